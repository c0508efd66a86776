"""Clifford gate sampling, brickwork circuits, and coherent-noise dressing.

Two-qubit Cliffords are represented canonically by their tableau: the
conjugation images of the generators X0, X1, Z0, Z1, each a signed two-qubit
Pauli. The phaseless group has 720 * 16 = 11520 elements (symplectic part
times sign choices); enumerating it gives exact uniform sampling and the
exhaustive orbit averages used by the oracles.

Randomness is split per gate: the stream for (layer, bond, role) is
numpy's SeedSequence(master_seed, spawn_key=(layer, bond, role)), role 0
for the Clifford choice and role 1 for noise draws, so circuits are
reproducible and independent of construction order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedError, ValidationError
from .paulis import PauliString

SQRT1_2 = 1.0 / np.sqrt(2.0)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) * SQRT1_2
PHASE_S = np.array([[1, 0], [0, 1j]], dtype=complex)
# Local two-qubit basis is little-endian over targets: index = bit(t0) + 2*bit(t1).
CNOT_MATRIX = np.array(
    [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex
)

TWO_QUBIT_CLIFFORD_COUNT = 11520
_SYMPLECTIC_COUNT = 720

ROLE_CLIFFORD = 0
ROLE_NOISE = 1


@dataclass
class GateOp:
    """A 1- or 2-qubit unitary bound to target qubits."""

    targets: tuple
    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        self.targets = tuple(int(t) for t in self.targets)
        if len(self.targets) not in (1, 2):
            raise ValidationError(f"gates act on 1 or 2 qubits, got {self.targets}")
        dim = 1 << len(self.targets)
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.shape != (dim, dim):
            raise ValidationError(f"matrix shape {m.shape} does not match targets")
        err = float(np.max(np.abs(m.conj().T @ m - np.eye(dim))))
        if err > 1e-12:
            raise ValidationError(f"gate matrix not unitary (deviation {err:.3e})")
        self.matrix = m


def h_gate(qubit: int) -> GateOp:
    return GateOp((qubit,), HADAMARD, "H")


def s_gate(qubit: int) -> GateOp:
    return GateOp((qubit,), PHASE_S, "S")


def cnot_gate(control: int, target: int) -> GateOp:
    return GateOp((control, target), CNOT_MATRIX, "CNOT")


@dataclass(frozen=True)
class CliffordTableau2:
    """Conjugation images of X0, X1, Z0, Z1 as signed two-qubit Paulis."""

    image_x: tuple  # ((PauliString, sign), (PauliString, sign))
    image_z: tuple

    def commutation_ok(self) -> bool:
        """Images must reproduce the generator commutation pattern."""
        gens = [self.image_x[0], self.image_x[1], self.image_z[0], self.image_z[1]]
        want = {(0, 2), (2, 0), (1, 3), (3, 1)}  # anticommuting pairs (Xi, Zi)
        for i in range(4):
            for j in range(4):
                if i == j:
                    continue
                anticommute = not gens[i][0].commutes_with(gens[j][0])
                if anticommute != ((i, j) in want):
                    return False
        return True


def _symplectic_matrices() -> np.ndarray:
    """All 720 binary 4x4 matrices preserving the two-qubit symplectic form.

    Rows are image vectors (x0, x1, z0, z1) of the generators X0, X1, Z0, Z1,
    listed in ascending order of their 16-bit encoding (entry (i, j) is bit
    4*i + j).
    """
    omega = np.zeros((4, 4), dtype=np.uint8)
    omega[:2, 2:] = np.eye(2, dtype=np.uint8)
    omega[2:, :2] = np.eye(2, dtype=np.uint8)
    codes = np.arange(1 << 16)
    bits = ((codes[:, None] >> np.arange(16)[None, :]) & 1).astype(np.uint8)
    mats = bits.reshape(-1, 4, 4)
    prod = np.einsum("nij,jk,nlk->nil", mats, omega, mats) % 2
    keep = np.all(prod == omega, axis=(1, 2))
    out = mats[keep]
    if out.shape[0] != _SYMPLECTIC_COUNT:
        raise AssertionError(f"expected 720 symplectic matrices, got {out.shape[0]}")
    return out


_SYMPLECTIC_CACHE: np.ndarray | None = None
_UNITARY_CACHE: np.ndarray | None = None


def _symplectic_cache() -> np.ndarray:
    global _SYMPLECTIC_CACHE
    if _SYMPLECTIC_CACHE is None:
        _SYMPLECTIC_CACHE = _symplectic_matrices()
    return _SYMPLECTIC_CACHE


def _row_to_pauli(row: np.ndarray) -> PauliString:
    x = int(row[0]) | (int(row[1]) << 1)
    z = int(row[2]) | (int(row[3]) << 1)
    return PauliString(2, x, z)


def tableau_from_index(index: int) -> CliffordTableau2:
    """Canonical tableau of group element ``index`` in [0, 11520).

    index = 16 * symplectic_index + sign_bits, sign bit g flipping the sign
    of generator g's image in the order (X0, X1, Z0, Z1).
    """
    if not 0 <= index < TWO_QUBIT_CLIFFORD_COUNT:
        raise ValidationError(f"Clifford index {index} out of range")
    sym, signs = divmod(index, 16)
    s = _symplectic_cache()[sym]
    sgn = [-1 if (signs >> g) & 1 else 1 for g in range(4)]
    return CliffordTableau2(
        image_x=((_row_to_pauli(s[0]), sgn[0]), (_row_to_pauli(s[1]), sgn[1])),
        image_z=((_row_to_pauli(s[2]), sgn[2]), (_row_to_pauli(s[3]), sgn[3])),
    )


def unitary_from_tableau(tab: CliffordTableau2) -> np.ndarray:
    """Synthesize the 4x4 unitary with the given conjugation action.

    The first column is the state stabilized by the signed Z images; the
    rest follow by applying the signed X images. The global phase is fixed
    by making the largest-magnitude entry of column 0 real positive.
    """
    mz = [sign * p.matrix() for p, sign in tab.image_z]
    mx = [sign * p.matrix() for p, sign in tab.image_x]
    proj = 0.25 * (np.eye(4) + mz[0]) @ (np.eye(4) + mz[1])
    col = int(np.argmax(np.linalg.norm(proj, axis=0)))
    phi = proj[:, col]
    phi = phi / np.linalg.norm(phi)
    anchor = int(np.argmax(np.abs(phi)))
    phi = phi * (phi[anchor].conj() / abs(phi[anchor]))
    u = np.empty((4, 4), dtype=complex)
    u[:, 0] = phi
    u[:, 1] = mx[0] @ phi
    u[:, 2] = mx[1] @ phi
    u[:, 3] = mx[1] @ u[:, 1]
    return u


def two_qubit_clifford_unitaries() -> np.ndarray:
    """All 11520 two-qubit Clifford unitaries, indexed like tableau_from_index.

    Built once per process (~1s) and cached; treat the result as read-only.
    """
    global _UNITARY_CACHE
    if _UNITARY_CACHE is None:
        syms = _symplectic_cache()
        out = np.empty((TWO_QUBIT_CLIFFORD_COUNT, 4, 4), dtype=complex)
        eye = np.eye(4)
        for si, s in enumerate(syms):
            mx = [_row_to_pauli(s[0]).matrix(), _row_to_pauli(s[1]).matrix()]
            mz = [_row_to_pauli(s[2]).matrix(), _row_to_pauli(s[3]).matrix()]
            for signs in range(16):
                sx0 = -1.0 if signs & 1 else 1.0
                sx1 = -1.0 if signs & 2 else 1.0
                sz0 = -1.0 if signs & 4 else 1.0
                sz1 = -1.0 if signs & 8 else 1.0
                proj = 0.25 * (eye + sz0 * mz[0]) @ (eye + sz1 * mz[1])
                col = int(np.argmax(np.linalg.norm(proj, axis=0)))
                phi = proj[:, col]
                phi = phi / np.linalg.norm(phi)
                anchor = int(np.argmax(np.abs(phi)))
                phi = phi * (phi[anchor].conj() / abs(phi[anchor]))
                u = out[si * 16 + signs]
                u[:, 0] = phi
                u[:, 1] = sx0 * (mx[0] @ phi)
                u[:, 2] = sx1 * (mx[1] @ phi)
                u[:, 3] = sx1 * (mx[1] @ u[:, 1])
        out.setflags(write=False)
        _UNITARY_CACHE = out
    return _UNITARY_CACHE


def sample_two_qubit_clifford_index(rng: np.random.Generator) -> int:
    return int(rng.integers(0, TWO_QUBIT_CLIFFORD_COUNT))


def sample_two_qubit_clifford(rng: np.random.Generator, targets=(0, 1)) -> GateOp:
    """Draw one gate uniformly from the 11520-element two-qubit Clifford group."""
    idx = sample_two_qubit_clifford_index(rng)
    return GateOp(targets, two_qubit_clifford_unitaries()[idx], f"C2_{idx}")


def gate_rng(master_seed: int, layer: int, bond: int, role: int) -> np.random.Generator:
    """Per-gate random stream; see module docstring for the mixing scheme."""
    seq = np.random.SeedSequence(master_seed, spawn_key=(layer, bond, role))
    return np.random.Generator(np.random.PCG64(seq))


def bond_order(num_qubits: int) -> list:
    """Even bonds then odd bonds; bond i couples qubits (i, i+1)."""
    return list(range(0, num_qubits - 1, 2)) + list(range(1, num_qubits - 1, 2))


def brickwork_layer(
    num_qubits: int, layer_index: int, master_seed: int, mode: str = "uniform"
) -> list:
    """One brickwork layer: n-1 gates covering every nearest-neighbor bond.

    ``uniform`` draws an independent uniform two-qubit Clifford per bond;
    ``generators`` draws one of {H, S on either qubit, CNOT either way},
    staying close to the minimal gate-set reading.
    """
    if num_qubits < 2:
        raise ValidationError("brickwork needs at least 2 qubits", field="n")
    gates = []
    for bond in bond_order(num_qubits):
        rng = gate_rng(master_seed, layer_index, bond, ROLE_CLIFFORD)
        if mode == "uniform":
            gates.append(sample_two_qubit_clifford(rng, targets=(bond, bond + 1)))
        elif mode == "generators":
            choice = int(rng.integers(0, 6))
            i, j = bond, bond + 1
            gates.append(
                [h_gate(i), h_gate(j), s_gate(i), s_gate(j),
                 cnot_gate(i, j), cnot_gate(j, i)][choice]
            )
        else:
            raise ValidationError(f"unknown circuit mode {mode!r}", field="clifford_mode")
    return gates


def noisy_gate(gate: GateOp, sigma: float, rng: np.random.Generator) -> GateOp:
    """Dress a two-qubit gate with coherent noise: V U V^dag.

    V = exp(-i sum_a eps_a P^a) over the 15 non-identity Paulis on the
    gate's two qubits (ordered by flat (x_mask << 2) | z_mask index), with
    eps_a i.i.d. Gaussian of standard deviation sigma.
    """
    if len(gate.targets) != 2:
        raise UnsupportedError("noise dressing is defined for two-qubit gates only")
    if sigma < 0:
        raise ValidationError("sigma must be >= 0", field="sigma")
    if sigma == 0.0:
        return gate
    eps = rng.normal(0.0, sigma, size=15)
    ham = np.zeros((4, 4), dtype=complex)
    for a in range(15):
        x, z = divmod(a + 1, 4)
        ham += eps[a] * PauliString(2, x, z).matrix()
    evals, evecs = np.linalg.eigh(ham)
    v = (evecs * np.exp(-1j * evals)) @ evecs.conj().T
    return GateOp(gate.targets, v @ gate.matrix @ v.conj().T, gate.label + "+noise")


@dataclass
class CircuitSpec:
    """Declarative random-Clifford brickwork circuit on an open chain."""

    num_qubits: int
    num_layers: int
    noise_sigma: float = 0.0
    master_seed: int = 0
    mode: str = "uniform"

    def __post_init__(self):
        if self.num_qubits < 2:
            raise ValidationError("circuits need at least 2 qubits", field="n")
        if self.num_layers < 0:
            raise ValidationError("num_layers must be >= 0", field="layers")
        if self.noise_sigma < 0:
            raise ValidationError("noise_sigma must be >= 0", field="sigma")
        if self.mode not in ("uniform", "generators"):
            raise ValidationError(f"unknown mode {self.mode!r}", field="clifford_mode")


def build_circuit(spec: CircuitSpec) -> list:
    """All layers of the circuit; every two-qubit gate is noise-dressed when
    sigma > 0. Fully determined by the spec (master_seed included)."""
    layers = []
    for layer_index in range(spec.num_layers):
        gates = brickwork_layer(
            spec.num_qubits, layer_index, spec.master_seed, mode=spec.mode
        )
        if spec.noise_sigma > 0:
            dressed = []
            for g in gates:
                if len(g.targets) == 2:
                    bond = min(g.targets)
                    nrng = gate_rng(spec.master_seed, layer_index, bond, ROLE_NOISE)
                    dressed.append(noisy_gate(g, spec.noise_sigma, nrng))
                else:
                    dressed.append(g)
            gates = dressed
        layers.append(gates)
    return layers
