"""Exact small-instance oracles: stabilizer-state enumeration, stabilizer
fidelity, the exhaustive two-qubit Clifford orbit average that pins the
flatness proportionality constant, and toric-code ground states.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from itertools import combinations

import numpy as np

from .clifford import two_qubit_clifford_unitaries
from .errors import CapacityError, UnavailableError, UnsupportedError, ValidationError
from .paulis import PauliString, parity
from .statevec import MAX_QUBITS, PureState, zero_state

STAB_ENUM_CAP = 3


def stabilizer_state_count(num_qubits: int) -> int:
    """2^n * prod_{k=1..n} (2^k + 1): 6, 60, 1080, ..."""
    count = 1 << num_qubits
    for k in range(1, num_qubits + 1):
        count *= (1 << k) + 1
    return count


@dataclass
class StabilizerStateSet:
    """All pure stabilizer states on n qubits, deduplicated up to phase."""

    num_qubits: int
    states: list

    def __post_init__(self):
        want = stabilizer_state_count(self.num_qubits)
        if len(self.states) != want:
            raise AssertionError(f"expected {want} states, built {len(self.states)}")

    def matrix(self) -> np.ndarray:
        """Stacked state vectors, one row per stabilizer state."""
        return np.array([s.amplitudes for s in self.states])


def _symplectic_product(u: int, v: int, n: int) -> int:
    mask = (1 << n) - 1
    ux, uz = u & mask, u >> n
    vx, vz = v & mask, v >> n
    return int(parity(ux & vz) ^ parity(uz & vx))


def _lagrangian_subspaces(n: int) -> list:
    """All maximal isotropic subspaces of F_2^{2n}, as sorted element tuples."""
    vecs = list(range(1, 1 << (2 * n)))
    commute = {
        (u, v)
        for u in vecs
        for v in vecs
        if _symplectic_product(u, v, n) == 0
    }
    found = set()
    for gens in combinations(vecs, n):
        if any((a, b) not in commute for a, b in combinations(gens, 2)):
            continue
        span = {0}
        for g in gens:
            span |= {s ^ g for s in span}
        if len(span) != 1 << n:
            continue  # dependent generators
        found.add(tuple(sorted(span)))
    expected = 1
    for k in range(1, n + 1):
        expected *= (1 << k) + 1
    if len(found) != expected:
        raise AssertionError(f"found {len(found)} Lagrangian subspaces, want {expected}")
    return sorted(found)


def _canonical_generators(subspace: tuple, n: int) -> list:
    """Greedy minimal generating set from the sorted element list."""
    gens: list[int] = []
    span = {0}
    for v in subspace:
        if v in span:
            continue
        gens.append(v)
        span |= {s ^ v for s in span}
        if len(gens) == n:
            break
    return gens


def _vec_to_pauli(v: int, n: int) -> PauliString:
    mask = (1 << n) - 1
    return PauliString(n, v & mask, v >> n)


_STAB_CACHE: dict = {}


def enumerate_stabilizer_states(num_qubits: int) -> StabilizerStateSet:
    """Every maximal abelian Pauli subgroup with every sign assignment.

    Deterministic order: subspaces sorted by element tuple, then sign bits
    ascending (bit i flips generator i).
    """
    n = num_qubits
    if not 1 <= n <= STAB_ENUM_CAP:
        raise CapacityError(
            f"stabilizer enumeration supports n <= {STAB_ENUM_CAP}, got {n}",
            cap=STAB_ENUM_CAP,
        )
    if n in _STAB_CACHE:
        return _STAB_CACHE[n]
    d = 1 << n
    eye = np.eye(d)
    states = []
    for subspace in _lagrangian_subspaces(n):
        gen_mats = [_vec_to_pauli(g, n).matrix() for g in _canonical_generators(subspace, n)]
        for signs in range(1 << n):
            proj = eye
            for i, g in enumerate(gen_mats):
                sign = -1.0 if (signs >> i) & 1 else 1.0
                proj = proj @ (0.5 * (eye + sign * g))
            col = int(np.argmax(np.linalg.norm(proj, axis=0)))
            phi = proj[:, col]
            phi = phi / np.linalg.norm(phi)
            anchor = int(np.argmax(np.abs(phi)))
            phi = phi * (phi[anchor].conj() / abs(phi[anchor]))
            states.append(PureState(n, phi))
    result = StabilizerStateSet(n, states)
    _STAB_CACHE[n] = result
    return result


def stabilizer_fidelity(state: PureState) -> float:
    """max over stabilizer states sigma of |<sigma|psi>|^2, brute force (n <= 3)."""
    n = state.num_qubits
    if n > STAB_ENUM_CAP:
        raise CapacityError(
            f"brute-force stabilizer fidelity needs n <= {STAB_ENUM_CAP}; "
            "use product_stabilizer_fidelity for product states",
            cap=STAB_ENUM_CAP,
        )
    overlaps = enumerate_stabilizer_states(n).matrix().conj() @ state.amplitudes
    return float(np.max(np.abs(overlaps) ** 2))


def product_stabilizer_fidelity(thetas) -> float:
    """Per-factor maximization for theta-product states of any n.

    This restricts the maximization to product stabilizer states, so it is
    an estimate (a lower bound on the true maximum over all stabilizer
    states), exact per factor.
    """
    from .statevec import product_state

    total = 1.0
    for theta in thetas:
        total *= stabilizer_fidelity(product_state([theta]))
    return total


def exhaustive_clifford_average(state: PureState, subsystem=(0,)) -> float:
    """Mean anti-flatness of subsystem over all 11520 two-qubit Cliffords."""
    if state.num_qubits != 2:
        raise UnsupportedError("exhaustive Clifford averaging is exact at n=2 only")
    sub = tuple(sorted(subsystem))
    if sub not in ((0,), (1,)):
        raise ValidationError(f"subsystem {subsystem} invalid for n=2")
    u = two_qubit_clifford_unitaries()
    psis = np.einsum("nij,j->ni", u, state.amplitudes).reshape(-1, 2, 2)
    # reshape axis order is (qubit1, qubit0); row index must be the subsystem bit
    m = psis.transpose(0, 2, 1) if sub == (0,) else psis
    rho = m @ m.conj().transpose(0, 2, 1)
    p2 = np.einsum("nij,nij->n", rho, rho.conj()).real
    p3 = np.einsum("nij,nij->n", rho @ rho, rho.conj()).real
    f = p3 - p2**2
    if float(f.min()) < -1e-12:
        raise AssertionError(f"anti-flatness {f.min():.3e} below -1e-12 in orbit sweep")
    return float(np.mean(np.maximum(f, 0.0)))


@dataclass(frozen=True)
class FlatnessConstant:
    """Proportionality constant between orbit-averaged anti-flatness and M_lin."""

    d: int
    d_a: int
    value: float
    mode: str  # "asymptotic" | "exact-derived"
    provenance: str = ""


_GOLDEN: dict | None = None


def _golden_constants() -> dict:
    global _GOLDEN
    if _GOLDEN is None:
        text = (
            resources.files("flatmagic").joinpath("data/golden_constants.txt").read_text()
        )
        out = {}
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, val = line.partition("=")
            out[key.strip()] = val.strip()
        _GOLDEN = out
    return _GOLDEN


def golden_c42() -> float:
    return float(_golden_constants()["c_exact_4_2"])


def c_constant(d: int, d_a: int, mode: str = "asymptotic") -> FlatnessConstant:
    """c(d, d_A): asymptotic (d^2 - d_A^2)/d^3, or the stored exact value.

    Exact values exist only where an in-repo oracle derived them (d=4,
    d_A=2, from the exhaustive two-qubit average).
    """
    for name, val in (("d", d), ("d_A", d_a)):
        if val < 2 or val & (val - 1):
            raise ValidationError(f"{name}={val} must be a power of two >= 2", field=name)
    if d_a >= d:
        raise ValidationError(f"d_A={d_a} must be smaller than d={d}", field="d_A")
    if mode == "asymptotic":
        return FlatnessConstant(d, d_a, (d**2 - d_a**2) / d**3, mode)
    if mode == "exact-derived":
        if (d, d_a) != (4, 2):
            raise UnavailableError(
                f"no golden exact c for d={d}, d_A={d_a}; use mode='asymptotic'"
            )
        return FlatnessConstant(
            d, d_a, golden_c42(), mode,
            provenance="exhaustive 11520-element two-qubit Clifford average",
        )
    raise ValidationError(f"unknown mode {mode!r}", field="mode")


def toric_lattice(lx: int, ly: int):
    """Vertex and plaquette stabilizer generators of the toric code.

    Qubits sit on the bonds of an lx-by-ly periodic square lattice:
    horizontal bond (x, y) is qubit y*lx + x, vertical bond (x, y) is
    qubit lx*ly + y*lx + x. Returns (vertex X-strings, plaquette Z-strings).
    """
    n = 2 * lx * ly
    if lx < 1 or ly < 1:
        raise ValidationError("lattice sizes must be >= 1", field="lx")
    if n > MAX_QUBITS:
        raise CapacityError(
            f"{lx}x{ly} unit cells need {n} qubits, cap is {MAX_QUBITS}", cap=MAX_QUBITS
        )

    def h_bond(x, y):
        return (y % ly) * lx + (x % lx)

    def v_bond(x, y):
        return lx * ly + (y % ly) * lx + (x % lx)

    vertex_ops = []
    plaquette_ops = []
    for y in range(ly):
        for x in range(lx):
            xmask = 0
            for q in (h_bond(x, y), h_bond(x - 1, y), v_bond(x, y), v_bond(x, y - 1)):
                xmask ^= 1 << q
            vertex_ops.append(PauliString(n, xmask, 0))
            zmask = 0
            for q in (h_bond(x, y), h_bond(x, y + 1), v_bond(x, y), v_bond(x + 1, y)):
                zmask ^= 1 << q
            plaquette_ops.append(PauliString(n, 0, zmask))
    return vertex_ops, plaquette_ops


def toric_code_ground_state(lx: int, ly: int) -> PureState:
    """Ground state of the toric code on lx * ly unit cells (2*lx*ly spins).

    Projector construction prod_v (1 + A_v) applied to |0...0>, which picks
    one topological sector deterministically; every A_v and B_p has
    expectation +1.
    """
    vertex_ops, _ = toric_lattice(lx, ly)
    n = 2 * lx * ly
    state = zero_state(n)
    amps = state.amplitudes
    k = np.arange(1 << n)
    for op in vertex_ops:
        amps = amps + amps[k ^ op.x_mask]
    amps = amps / np.linalg.norm(amps)
    return PureState(n, amps)
