"""Non-stabilizerness measures built on the Pauli-expectation distribution.

For a pure state psi the distribution Xi(P) = tr(P psi)^2 / d over the 4^n
phase-+1 Pauli strings is normalized, and the measures here are functionals
of it: the alpha Renyi entropies minus log d, the linear entropy
1 - d * ||Xi||_2^2, and the exact product-state fast path.

Logs are natural throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CapacityError,
    NumericalConsistencyError,
    UnsupportedError,
    ValidationError,
)
from .paulis import PauliString, popcount
from .statevec import PureState

DEFAULT_SWEEP_CAP = 10
_XI_SUM_ATOL = 1e-9

# Memory bound for the blocked 4^n sweep: rows x 2^n complex entries.
_SWEEP_BLOCK_ELEMENTS = 1 << 21


def pauli_expectation(state: PureState, p: PauliString) -> float:
    """<psi|P|psi> via index flips (x_mask) and popcount-parity signs (z_mask).

    P is never materialized; the kernel walks amplitude pairs once, O(2^n).
    """
    if p.num_qubits != state.num_qubits:
        raise ValidationError(
            f"Pauli acts on {p.num_qubits} qubits, state has {state.num_qubits}"
        )
    psi = state.amplitudes
    k = np.arange(state.dim)
    signs = 1.0 - 2.0 * (popcount(k & p.z_mask) & 1)
    val = (1j**p.y_count) * np.sum(psi[k ^ p.x_mask].conj() * signs * psi)
    return float(val.real)


@dataclass
class XiDistribution:
    """Probability vector over all 4^n Pauli strings.

    ``values`` is flat, indexed by (x_mask << n) | z_mask so a sweep at
    fixed x reads a contiguous block.
    """

    num_qubits: int
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (4**self.num_qubits,):
            raise ValidationError(f"expected 4^{self.num_qubits} entries")
        if float(v.min()) < -1e-12:
            raise NumericalConsistencyError(f"negative Xi entry {v.min():.3e}")
        total = float(v.sum())
        if abs(total - 1.0) > _XI_SUM_ATOL:
            raise NumericalConsistencyError(f"Xi sums to {total}, expected 1")
        self.values = np.maximum(v, 0.0)

    def value(self, p: PauliString) -> float:
        return float(self.values[p.index])


def _walsh_hadamard_last_axis(a: np.ndarray) -> np.ndarray:
    """Unnormalized transform: out[z] = sum_k (-1)^{popcount(k & z)} a[k]."""
    length = a.shape[-1]
    lead = a.shape[:-1]
    h = 1
    while h < length:
        a = a.reshape(lead + (length // (2 * h), 2, h))
        top = a[..., 0, :].copy()
        a[..., 0, :] += a[..., 1, :]
        a[..., 1, :] = top - a[..., 1, :]
        h *= 2
    return a.reshape(lead + (length,))


def xi_distribution(state: PureState, cap: int = DEFAULT_SWEEP_CAP) -> XiDistribution:
    """Exact Xi over all 4^n Pauli strings.

    One Walsh-Hadamard transform per x_mask covers all z_masks at once,
    O(4^n n) total instead of O(8^n) for repeated single-Pauli kernels.
    """
    n = state.num_qubits
    if n > cap:
        raise CapacityError(
            f"n={n} exceeds the brute-force Pauli sweep cap {cap}; "
            "raise the cap explicitly for longer runs",
            cap=cap,
        )
    d = state.dim
    psi = state.amplitudes
    psi_c = psi.conj()
    k = np.arange(d, dtype=np.uint64)
    values = np.empty(4**n)
    block = max(1, _SWEEP_BLOCK_ELEMENTS // d)
    for start in range(0, d, block):
        xs = np.arange(start, min(start + block, d), dtype=np.uint64)
        g = psi_c[(k[None, :] ^ xs[:, None]).astype(np.intp)] * psi[None, :]
        t = _walsh_hadamard_last_axis(g)
        w4 = (popcount(k[None, :] & xs[:, None]) & 3).astype(np.int8)
        # Re(i^w t) cycles through (Re t, -Im t, -Re t, Im t) as w mod 4 runs 0..3.
        expect = np.where(w4 & 1, -t.imag, t.real) * (1 - (w4 & 2))
        values[start * d : (start + len(xs)) * d] = (expect**2 / d).reshape(-1)
    return XiDistribution(n, values)


def sre(state: PureState, alpha: float, cap: int = DEFAULT_SWEEP_CAP) -> float:
    """Stabilizer Renyi entropy M_alpha = (1-alpha)^-1 log sum Xi^alpha - log d."""
    if alpha == 1:
        raise UnsupportedError("alpha=1 (Shannon limit) is not supported")
    if alpha <= 0:
        raise ValidationError("alpha must be positive", field="alpha")
    xi = xi_distribution(state, cap=cap)
    m = np.log(np.sum(xi.values**alpha)) / (1.0 - alpha) - state.num_qubits * np.log(2.0)
    return _clamp_nonnegative(float(m), "M_alpha")


def stabilizer_linear_entropy(state: PureState, cap: int = DEFAULT_SWEEP_CAP) -> float:
    """M_lin = 1 - d * ||Xi||_2^2; zero exactly on stabilizer states."""
    xi = xi_distribution(state, cap=cap)
    m = 1.0 - state.dim * float(np.sum(xi.values**2))
    return _clamp_nonnegative(m, "M_lin")


def m2_from_mlin(m_lin: float) -> float:
    """Second SRE from the linear entropy: M_2 = -log(1 - M_lin)."""
    if not 0.0 <= m_lin < 1.0:
        raise ValidationError(f"m_lin={m_lin} outside [0, 1)", field="m_lin")
    return -np.log1p(-m_lin)


def product_mlin(thetas) -> float:
    """Exact M_lin of a theta-product state for any n (no sweep cap).

    Follows from additivity of M_2: each factor contributes
    1 - sin^2(2 theta)/4 to the product 1 - M_lin.
    """
    thetas = np.asarray(list(thetas), dtype=float)
    if thetas.size < 1:
        raise ValidationError("need at least one angle", field="theta")
    return float(1.0 - np.prod(1.0 - np.sin(2.0 * thetas) ** 2 / 4.0))


@dataclass
class MagicMeasures:
    """Bundle of measures computed from one Xi sweep."""

    m_lin: float
    m2: float
    m_alpha: dict = field(default_factory=dict)

    def __post_init__(self):
        if abs(self.m2 + np.log1p(-self.m_lin)) > 1e-10:
            raise NumericalConsistencyError("m2 and m_lin disagree beyond 1e-10")


def magic_measures(
    state: PureState, alphas=(), cap: int = DEFAULT_SWEEP_CAP
) -> MagicMeasures:
    xi = xi_distribution(state, cap=cap)
    d = state.dim
    m_lin = _clamp_nonnegative(1.0 - d * float(np.sum(xi.values**2)), "M_lin")
    bound = 1.0 - 2.0 / (d + 1.0)
    if m_lin >= bound + 1e-10:
        raise NumericalConsistencyError(f"M_lin={m_lin} exceeds bound {bound}")
    m_alpha = {}
    for alpha in alphas:
        if alpha == 1:
            raise UnsupportedError("alpha=1 (Shannon limit) is not supported")
        m_alpha[float(alpha)] = _clamp_nonnegative(
            float(np.log(np.sum(xi.values**alpha)) / (1.0 - alpha))
            - state.num_qubits * np.log(2.0),
            "M_alpha",
        )
    return MagicMeasures(m_lin=m_lin, m2=m2_from_mlin(m_lin), m_alpha=m_alpha)


def _clamp_nonnegative(value: float, name: str) -> float:
    if value < -1e-10:
        raise NumericalConsistencyError(f"{name}={value:.3e} below -1e-10")
    return max(value, 0.0)
