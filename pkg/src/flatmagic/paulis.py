"""Pauli strings as (x_mask, z_mask) bit-mask pairs.

An n-qubit Pauli with overall phase +1 is encoded by two n-bit masks: bit i
of ``x_mask`` marks an X factor on qubit i, bit i of ``z_mask`` a Z factor,
both bits set mean Y. The represented operator is the Hermitian

    P(x, z) = i^{|x & z|} X^x Z^z,

so that each (1,1) site carries Y = i X Z. Qubit 0 is the least significant
bit of the basis-state index everywhere in this package.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

_PAULI_LETTERS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_LETTER_MASKS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}


def popcount(a):
    """Population count, elementwise over an integer array or scalar."""
    return np.bitwise_count(np.asarray(a, dtype=np.uint64))


def parity(a):
    """Bit parity (popcount mod 2), elementwise."""
    return popcount(a) & 1


@dataclass(frozen=True)
class PauliString:
    """One n-qubit Pauli operator with phase fixed to +1."""

    num_qubits: int
    x_mask: int
    z_mask: int

    def __post_init__(self):
        n = self.num_qubits
        if n < 1:
            raise ValidationError("num_qubits must be >= 1", field="num_qubits")
        full = (1 << n) - 1
        if not (0 <= self.x_mask <= full and 0 <= self.z_mask <= full):
            raise ValidationError(
                f"masks must fit in {n} bits: x={self.x_mask:#x} z={self.z_mask:#x}"
            )

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Build from a string like 'XIZY'; leftmost letter is qubit 0."""
        x = z = 0
        for i, ch in enumerate(label):
            try:
                xb, zb = _LETTER_MASKS[ch]
            except KeyError:
                raise ValidationError(f"unknown Pauli letter {ch!r}") from None
            x |= xb << i
            z |= zb << i
        return cls(len(label), x, z)

    @property
    def label(self) -> str:
        return "".join(
            _PAULI_LETTERS[(self.x_mask >> i) & 1, (self.z_mask >> i) & 1]
            for i in range(self.num_qubits)
        )

    @property
    def index(self) -> int:
        """Flat index into a 4^n sweep: x_mask in the high bits, z_mask low."""
        return (self.x_mask << self.num_qubits) | self.z_mask

    @property
    def weight(self) -> int:
        return int(popcount(self.x_mask | self.z_mask))

    @property
    def y_count(self) -> int:
        return int(popcount(self.x_mask & self.z_mask))

    def commutes_with(self, other: "PauliString") -> bool:
        """Symplectic product: Paulis commute iff <x,z'> + <x',z> = 0 mod 2."""
        s = parity(self.x_mask & other.z_mask) ^ parity(other.x_mask & self.z_mask)
        return not bool(s)

    def matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n matrix; intended for small n (oracles, 2-qubit gates)."""
        n = self.num_qubits
        d = 1 << n
        k = np.arange(d)
        phase = 1j ** self.y_count
        signs = np.where(parity(k & self.z_mask), -1.0, 1.0)
        m = np.zeros((d, d), dtype=complex)
        m[k ^ self.x_mask, k] = phase * signs
        return m


def pauli_from_index(num_qubits: int, index: int) -> PauliString:
    """Inverse of ``PauliString.index``."""
    n = num_qubits
    return PauliString(n, index >> n, index & ((1 << n) - 1))


def enumerate_paulis(num_qubits: int, include_identity: bool = True):
    """Yield all 4^n phase-+1 Pauli strings in flat-index order."""
    for idx in range(4**num_qubits):
        if not include_identity and idx == 0:
            continue
        yield pauli_from_index(num_qubits, idx)
