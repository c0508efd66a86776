"""Dense state-vector engine: gates, partial trace, spectrum moments.

Amplitude indexing is little-endian: qubit 0 is the least significant bit
of the basis-state index. States live in numpy complex128 vectors of length
2^n with n capped at 16 (the largest experiment, the 4x2 toric lattice,
needs 16 spins).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CapacityError,
    NumericalConsistencyError,
    PartitionError,
    ValidationError,
)

MAX_QUBITS = 16
NORM_ATOL = 1e-12
FLATNESS_CLAMP = 1e-12


@dataclass
class PureState:
    """A pure n-qubit state as a dense amplitude vector.

    Gate application mutates ``amplitudes`` in place (single writer); all
    read-only analyses may share a state concurrently.
    """

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        n = self.num_qubits
        if not 1 <= n <= MAX_QUBITS:
            raise CapacityError(
                f"num_qubits={n} outside supported range 1..{MAX_QUBITS}",
                cap=MAX_QUBITS,
            )
        self.amplitudes = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (1 << n,):
            raise ValidationError(
                f"amplitude vector must have length 2^{n}, got {self.amplitudes.shape}"
            )
        self.validate_norm()

    @property
    def dim(self) -> int:
        return 1 << self.num_qubits

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def validate_norm(self, atol: float = NORM_ATOL) -> None:
        err = abs(self.norm() - 1.0)
        if err > atol:
            raise ValidationError(f"state norm deviates from 1 by {err:.3e}")

    def copy(self) -> "PureState":
        return PureState(self.num_qubits, self.amplitudes.copy())

    def overlap(self, other: "PureState") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass
class ReducedDensityMatrix:
    """Reduced density operator of a bipartition, Hermitian with unit trace."""

    dim: int
    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=np.complex128)
        if m.shape != (self.dim, self.dim):
            raise ValidationError(f"entries must be {self.dim}x{self.dim}")
        herm_err = float(np.max(np.abs(m - m.conj().T)))
        trace_err = abs(float(m.trace().real) - 1.0)
        if herm_err > 1e-12 or trace_err > 1e-12:
            raise NumericalConsistencyError(
                f"RDM invariant violated: hermiticity {herm_err:.3e}, trace {trace_err:.3e}"
            )
        self.entries = m

    def eigenvalues_ascending(self) -> np.ndarray:
        vals = np.linalg.eigvalsh(self.entries)
        if float(vals.min()) < -1e-10:
            raise NumericalConsistencyError(
                f"RDM has eigenvalue {vals.min():.3e} below -1e-10"
            )
        return vals


@dataclass(frozen=True)
class SpectrumMoments:
    """Second and third moments of an entanglement spectrum."""

    p2: float
    p3: float

    def __post_init__(self):
        if self.p3 > self.p2 + 1e-12:
            raise NumericalConsistencyError(
                f"moment ordering violated: p3={self.p3} > p2={self.p2}"
            )
        if self.p3 < self.p2**2 - 1e-12:
            raise NumericalConsistencyError(
                f"negative spectrum variance: p3={self.p3} < p2^2={self.p2 ** 2}"
            )


def product_state(thetas: Sequence[float]) -> PureState:
    """Tensor product of (|0> + e^{i theta_i}|1>)/sqrt(2), one angle per qubit."""
    thetas = np.asarray(list(thetas), dtype=float)
    n = thetas.size
    if n < 1:
        raise ValidationError("need at least one angle", field="theta")
    if n > MAX_QUBITS:
        raise CapacityError(f"n={n} exceeds qubit cap {MAX_QUBITS}", cap=MAX_QUBITS)
    k = np.arange(1 << n)
    phase = np.zeros(1 << n)
    for i in range(n):
        phase = phase + np.where((k >> i) & 1, thetas[i], 0.0)
    amps = np.exp(1j * phase) * (2.0 ** (-n / 2))
    return PureState(n, amps)


def zero_state(num_qubits: int) -> PureState:
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return PureState(num_qubits, amps)


@lru_cache(maxsize=None)
def _one_qubit_bases(n: int, q: int):
    rest = np.arange(1 << (n - 1), dtype=np.intp)
    low = rest & ((1 << q) - 1)
    base = ((rest >> q) << (q + 1)) | low
    return base, base | (1 << q)


@lru_cache(maxsize=None)
def _two_qubit_bases(n: int, a: int, b: int):
    # Local basis index is bit(a) + 2*bit(b); a and b need not be ordered.
    p, q = min(a, b), max(a, b)
    rest = np.arange(1 << (n - 2), dtype=np.intp)
    low = rest & ((1 << p) - 1)
    mid = (rest >> p) & ((1 << (q - 1 - p)) - 1)
    base = ((rest >> (q - 1)) << (q + 1)) | (mid << (p + 1)) | low
    return tuple(
        base | (((v >> 0) & 1) << a) | (((v >> 1) & 1) << b) for v in range(4)
    )


def apply_gate(state: PureState, gate) -> PureState:
    """Apply a 1- or 2-qubit unitary in place and return the state."""
    n = state.num_qubits
    targets = gate.targets
    if len(set(targets)) != len(targets):
        raise IndexError(f"duplicate gate targets {targets}")
    if any(not 0 <= t < n for t in targets):
        raise IndexError(f"gate targets {targets} out of range for n={n}")
    psi = state.amplitudes
    m = gate.matrix
    if len(targets) == 1:
        i0, i1 = _one_qubit_bases(n, targets[0])
        a0, a1 = psi[i0], psi[i1]
        psi[i0] = m[0, 0] * a0 + m[0, 1] * a1
        psi[i1] = m[1, 0] * a0 + m[1, 1] * a1
    elif len(targets) == 2:
        idx = _two_qubit_bases(n, targets[0], targets[1])
        block = np.array([psi[i] for i in idx])
        out = m @ block
        for v in range(4):
            psi[idx[v]] = out[v]
    else:
        raise ValidationError(f"unsupported gate arity {len(targets)}")
    return state


def apply_layer(state: PureState, gates: Iterable) -> PureState:
    for gate in gates:
        apply_gate(state, gate)
    return state


def _normalize_subsystem(n: int, subsystem: Iterable[int]) -> tuple[int, ...]:
    sub = tuple(sorted(set(int(q) for q in subsystem)))
    if len(sub) == 0:
        raise PartitionError("subsystem must be non-empty")
    if len(sub) >= n:
        raise PartitionError("subsystem must be a proper subset of the qubits")
    if sub[0] < 0 or sub[-1] >= n:
        raise PartitionError(f"subsystem {sub} out of range for n={n}")
    return sub


def half_cut(num_qubits: int) -> tuple[int, ...]:
    """Default experiment bipartition: the first ceil(n/2) qubits."""
    return tuple(range((num_qubits + 1) // 2))


def _bipartition_matrix(state: PureState, subsystem) -> np.ndarray:
    """Reshape amplitudes into a d_A x d_B matrix for the given qubit set."""
    n = state.num_qubits
    sub = _normalize_subsystem(n, subsystem)
    rest = tuple(q for q in range(n) if q not in sub)
    tensor = state.amplitudes.reshape([2] * n)
    # Axis j of the reshaped tensor is qubit n-1-j; order each block so the
    # matrix index is little-endian over the sorted qubit list.
    perm = [n - 1 - q for q in reversed(sub)] + [n - 1 - q for q in reversed(rest)]
    return tensor.transpose(perm).reshape(1 << len(sub), 1 << len(rest))


def reduced_density_matrix(state: PureState, subsystem) -> ReducedDensityMatrix:
    """Trace out the complement of ``subsystem`` from a pure state."""
    m = _bipartition_matrix(state, subsystem)
    rho = m @ m.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return ReducedDensityMatrix(rho.shape[0], rho)


def purity_moments(rdm: ReducedDensityMatrix) -> SpectrumMoments:
    """Tr(rho^2) and Tr(rho^3) via matrix products, no eigendecomposition."""
    rho = rdm.entries
    p2 = float(np.vdot(rho, rho).real)
    p3 = float(np.vdot(rho, rho @ rho).real)
    d = rdm.dim
    if not (1.0 / d - 1e-12 <= p2 <= 1.0 + 1e-12):
        raise NumericalConsistencyError(f"purity {p2} outside [1/{d}, 1]")
    return SpectrumMoments(p2=p2, p3=p3)


def flatness_from_moments(moments: SpectrumMoments) -> float:
    """Self-weighted spectrum variance p3 - p2^2, clamped at zero.

    Values below -FLATNESS_CLAMP indicate an inconsistent moment pair and
    raise; tiny negatives from round-off are clamped to 0.
    """
    f = moments.p3 - moments.p2**2
    if f < -FLATNESS_CLAMP:
        raise NumericalConsistencyError(f"anti-flatness {f:.3e} below -1e-12")
    return max(f, 0.0)


def anti_flatness(state: PureState, subsystem) -> float:
    """Anti-flatness of the entanglement spectrum for the given bipartition.

    Zero (within round-off) exactly when all nonzero eigenvalues of the
    reduced density operator are equal.
    """
    return flatness_from_moments(purity_moments(reduced_density_matrix(state, subsystem)))


def entanglement_spectrum(rdm: ReducedDensityMatrix) -> np.ndarray:
    """Eigenvalues of the reduced density operator, descending (diagnostic path)."""
    vals = rdm.eigenvalues_ascending()[::-1]
    if abs(float(vals.sum()) - 1.0) > 1e-10:
        raise NumericalConsistencyError("entanglement spectrum does not sum to 1")
    return vals
