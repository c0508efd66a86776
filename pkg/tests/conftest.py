"""Shared oracle helpers for the test suite.

Everything here is deliberately independent of the library kernels: dense
matrices via np.kron, eigendecompositions, Taylor series. Tests freeze
expected values computed through these paths.
"""

import numpy as np

from flatmagic.statevec import PureState

PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def random_state(rng, n: int) -> PureState:
    vec = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return PureState(n, vec / np.linalg.norm(vec))


def dense_pauli(label: str) -> np.ndarray:
    """Dense matrix of a Pauli label, little-endian: label[0] acts on qubit 0."""
    out = PAULI_1Q[label[0]]
    for ch in label[1:]:
        out = np.kron(PAULI_1Q[ch], out)
    return out


def kron_states(low: np.ndarray, high: np.ndarray) -> np.ndarray:
    """Amplitudes of low-qubits (x) high-qubits tensor product."""
    return np.kron(high, low)


def random_unitary(rng, dim: int) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(a)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def taylor_expm(m: np.ndarray, terms: int = 40) -> np.ndarray:
    """Matrix exponential by scaling-and-squaring a Taylor series."""
    norm = np.linalg.norm(m, 2)
    squarings = max(0, int(np.ceil(np.log2(norm))) + 1) if norm > 1e-16 else 0
    a = m / (2.0**squarings)
    out = np.eye(m.shape[0], dtype=complex)
    term = np.eye(m.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ a / k
        out = out + term
    for _ in range(squarings):
        out = out @ out
    return out


def dense_partial_trace(psi: np.ndarray, n: int, keep) -> np.ndarray:
    """Partial trace of |psi><psi| by explicit bit assembly (slow oracle).

    Entry (i, j) sums psi[idx(i, b)] * conj(psi[idx(j, b)]) over the traced
    bits b, with little-endian index assembly matching the package
    convention (bit p of i goes to qubit keep[p]).
    """
    keep = sorted(keep)
    rest = [q for q in range(n) if q not in keep]
    d_a, d_b = 1 << len(keep), 1 << len(rest)

    def full_index(a_bits: int, b_bits: int) -> int:
        idx = 0
        for pos, q in enumerate(keep):
            idx |= ((a_bits >> pos) & 1) << q
        for pos, q in enumerate(rest):
            idx |= ((b_bits >> pos) & 1) << q
        return idx

    rho = np.zeros((d_a, d_a), dtype=complex)
    for i in range(d_a):
        for j in range(d_a):
            rho[i, j] = sum(
                psi[full_index(i, b)] * np.conj(psi[full_index(j, b)])
                for b in range(d_b)
            )
    return rho
