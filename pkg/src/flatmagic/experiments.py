"""Reproducible Monte Carlo experiments over Clifford orbits.

Every experiment is a pure function of its ExperimentConfig: realization r
of grid point g draws its circuit seed from
SeedSequence(master_seed, spawn_key=(g, r)), so record streams are
identical regardless of worker count or scheduling. Records carry one
anti-flatness sample per (realization, layer).
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .clifford import CircuitSpec, brickwork_layer, build_circuit
from .errors import CapacityError, ValidationError
from .magic import product_mlin
from .oracle import c_constant, toric_code_ground_state
from .statevec import (
    MAX_QUBITS,
    PureState,
    anti_flatness,
    apply_layer,
    half_cut,
    product_state,
)

KINDS = ("orbit-average", "ratio-trace", "witness-sweep", "noise-scan", "toric-noise")
_NOISE_KINDS = ("noise-scan", "toric-noise")


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    n: int = 0
    theta: float | None = None
    theta_grid: tuple = ()
    layers: int = 0
    layers_grid: tuple = ()
    prep_layers: int = 0
    realizations: int = 1
    epsilon: float = 0.0
    sigmas: tuple = ()
    partition: tuple | None = None  # None = first ceil(n/2) qubits
    master_seed: int = 0
    out: str | None = None
    threads: int = 1
    clifford_mode: str = "uniform"
    witness_mode: str = "incremental"
    lx: int = 4
    ly: int = 2


@dataclass(frozen=True)
class RunRecord:
    """One experiment sample; empty (None) fields are not applicable."""

    kind: str
    n: int
    theta: float | None
    sigma: float | None
    layer: int
    realization: int
    seed: int
    f_a: float
    m_lin_initial: float
    ratio: float | None
    witness_fired: bool | None


def validate_config(config: ExperimentConfig) -> ExperimentConfig:
    """Check kind-specific requirements; returns the config with derived
    fields (toric qubit count, grid defaults) filled in."""
    c = config
    if c.kind not in KINDS:
        raise ValidationError(f"unknown experiment kind {c.kind!r}", field="kind")
    if c.kind == "toric-noise":
        toric_n = 2 * c.lx * c.ly
        if c.lx < 1 or c.ly < 1:
            raise ValidationError("lattice sizes must be >= 1", field="lx")
        if toric_n > MAX_QUBITS:
            raise CapacityError(
                f"{c.lx}x{c.ly} toric lattice needs {toric_n} qubits, cap {MAX_QUBITS}",
                cap=MAX_QUBITS,
            )
        if c.n not in (0, toric_n):
            raise ValidationError(
                f"n={c.n} inconsistent with {c.lx}x{c.ly} lattice ({toric_n} qubits)",
                field="n",
            )
        c = replace(c, n=toric_n)
    else:
        if c.n < 2:
            raise ValidationError(f"n={c.n} must be >= 2", field="n")
        if c.n > MAX_QUBITS:
            raise CapacityError(f"n={c.n} exceeds qubit cap {MAX_QUBITS}", cap=MAX_QUBITS)
    if c.realizations < 1:
        raise ValidationError("realizations must be >= 1", field="realizations")
    if c.threads < 1:
        raise ValidationError("threads must be >= 1", field="threads")
    if c.master_seed < 0:
        raise ValidationError("seed must be >= 0", field="seed")
    if c.epsilon < 0:
        raise ValidationError("epsilon must be >= 0", field="epsilon")
    if c.prep_layers < 0:
        raise ValidationError("prep_layers must be >= 0", field="prep_layers")
    if any(s < 0 for s in c.sigmas):
        raise ValidationError("sigma values must be >= 0", field="sigmas")
    if c.partition is not None:
        part = tuple(sorted(set(int(q) for q in c.partition)))
        if not part or len(part) >= c.n or part[0] < 0 or part[-1] >= c.n:
            raise ValidationError(
                f"partition {c.partition} is not a proper non-empty subset", field="partition"
            )
        c = replace(c, partition=part)
    if c.kind in ("orbit-average", "ratio-trace"):
        if c.theta is None:
            raise ValidationError(f"{c.kind} requires theta", field="theta")
        if c.layers < 1:
            raise ValidationError("layers must be >= 1", field="layers")
        if any(s != 0 for s in c.sigmas):
            raise ValidationError(f"{c.kind} runs noiseless (sigma = 0)", field="sigmas")
    if c.kind == "witness-sweep":
        if c.epsilon <= 0:
            raise ValidationError("witness threshold epsilon must be > 0", field="epsilon")
        if not c.theta_grid:
            if c.theta is None:
                raise ValidationError("witness-sweep needs theta or theta_grid", field="theta_grid")
            c = replace(c, theta_grid=(float(c.theta),))
        if not c.layers_grid:
            if c.layers < 1:
                raise ValidationError(
                    "witness-sweep needs layers or layers_grid", field="layers_grid"
                )
            c = replace(c, layers_grid=(int(c.layers),))
        if any(l < 1 for l in c.layers_grid):
            raise ValidationError("layer budgets must be >= 1", field="layers_grid")
    if c.kind in _NOISE_KINDS:
        if not c.sigmas:
            raise ValidationError(f"{c.kind} requires a sigma list", field="sigmas")
        if c.layers < 1:
            raise ValidationError("layers must be >= 1", field="layers")
    return c


def derive_seed(master_seed: int, *key: int) -> int:
    """64-bit per-task seed from numpy's SeedSequence spawn-key mixing."""
    words = np.random.SeedSequence(master_seed, spawn_key=tuple(key)).generate_state(2)
    return int(words[0]) | (int(words[1]) << 32)


def _partition_of(config: ExperimentConfig) -> tuple:
    return config.partition if config.partition is not None else half_cut(config.n)


def ratio_c_value(n: int, subsystem_size: int) -> float:
    """Ratio denominator constant: exact golden at n=2, asymptotic otherwise."""
    mode = "exact-derived" if n == 2 else "asymptotic"
    return c_constant(1 << n, 1 << subsystem_size, mode=mode).value


def mean_ci95(values) -> tuple[float, float]:
    """Mean and normal-approximation 95% half-width (1.96 * stderr)."""
    arr = np.asarray(list(values), dtype=float)
    if arr.size < 2:
        return (float(arr.mean()) if arr.size else float("nan"), float("nan"))
    return float(arr.mean()), float(1.96 * arr.std(ddof=1) / np.sqrt(arr.size))


def _map_tasks(worker, arg_tuples, threads: int) -> list:
    if threads <= 1:
        return [worker(*args) for args in arg_tuples]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(worker, *args) for args in arg_tuples]
        return [f.result() for f in futures]


# --- orbit-average and ratio-trace -----------------------------------------


def _trace_realization(config: ExperimentConfig, realization: int) -> list:
    seed = derive_seed(config.master_seed, realization)
    n = config.n
    state = product_state([config.theta] * n)
    partition = _partition_of(config)
    m_lin = product_mlin([config.theta] * n)
    denom = ratio_c_value(n, len(partition)) * m_lin if m_lin > 0 else 0.0
    prep = config.prep_layers if config.kind == "ratio-trace" else 0
    spec = CircuitSpec(n, prep + config.layers, 0.0, seed, config.clifford_mode)
    records = []
    for layer_index, gates in enumerate(build_circuit(spec)):
        apply_layer(state, gates)
        if layer_index < prep:
            continue
        f = anti_flatness(state, partition)
        records.append(
            RunRecord(
                kind=config.kind,
                n=n,
                theta=config.theta,
                sigma=0.0,
                layer=layer_index - prep + 1,
                realization=realization,
                seed=seed,
                f_a=f,
                m_lin_initial=m_lin,
                ratio=f / denom if denom > 0 else None,
                witness_fired=None,
            )
        )
    return records


def orbit_average_trace(config: ExperimentConfig) -> list:
    """Anti-flatness along the Clifford orbit of a theta-product state."""
    config = validate_config(config)
    if config.kind != "orbit-average":
        raise ValidationError("config kind must be orbit-average", field="kind")
    chunks = _map_tasks(
        _trace_realization,
        [(config, r) for r in range(config.realizations)],
        config.threads,
    )
    return [rec for chunk in chunks for rec in chunk]


def ratio_trace_volume_law(config: ExperimentConfig) -> list:
    """Ratio vs shallow extra layers after pre-scrambling into volume law."""
    config = validate_config(config)
    if config.kind != "ratio-trace":
        raise ValidationError("config kind must be ratio-trace", field="kind")
    chunks = _map_tasks(
        _trace_realization,
        [(config, r) for r in range(config.realizations)],
        config.threads,
    )
    return [rec for chunk in chunks for rec in chunk]


# --- witness ----------------------------------------------------------------


def _witness_trajectory(
    initial: PureState,
    epsilon: float,
    max_layers: int,
    seed: int,
    partition=None,
    mode: str = "incremental",
    clifford_mode: str = "uniform",
) -> tuple:
    """Run the flatness witness; returns (fired_layer or None, prefix_max).

    prefix_max[k] is the largest anti-flatness seen in layers 1..k+1; the
    trajectory stops at the first layer whose anti-flatness exceeds epsilon.
    """
    n = initial.num_qubits
    part = tuple(partition) if partition is not None else half_cut(n)
    prefix_max: list[float] = []
    running = 0.0
    if mode == "incremental":
        state = initial.copy()
        for layer in range(max_layers):
            apply_layer(state, brickwork_layer(n, layer, seed, clifford_mode))
            f = anti_flatness(state, part)
            running = max(running, f)
            prefix_max.append(running)
            if f > epsilon:
                return layer + 1, prefix_max
    elif mode == "fresh":
        # Independent circuit of depth k at iteration k.
        for k in range(1, max_layers + 1):
            state = initial.copy()
            spec = CircuitSpec(n, k, 0.0, derive_seed(seed, k), clifford_mode)
            for gates in build_circuit(spec):
                apply_layer(state, gates)
            f = anti_flatness(state, part)
            running = max(running, f)
            prefix_max.append(running)
            if f > epsilon:
                return k, prefix_max
    else:
        raise ValidationError(f"unknown witness mode {mode!r}", field="witness_mode")
    return None, prefix_max


def witness(
    state: PureState,
    epsilon: float,
    max_layers: int,
    seed: int,
    partition=None,
    mode: str = "incremental",
) -> bool:
    """True iff some layer along a random Clifford trajectory shows
    anti-flatness above epsilon (non-stabilizerness detected)."""
    if epsilon <= 0:
        raise ValidationError("epsilon must be > 0", field="epsilon")
    if max_layers < 1:
        raise ValidationError("max_layers must be >= 1", field="layers")
    fired_layer, _ = _witness_trajectory(state, epsilon, max_layers, seed, partition, mode)
    return fired_layer is not None


def _witness_realization(config: ExperimentConfig, theta_index: int, realization: int) -> list:
    theta = config.theta_grid[theta_index]
    seed = derive_seed(config.master_seed, theta_index, realization)
    n = config.n
    budgets = config.layers_grid
    fired_layer, prefix = _witness_trajectory(
        product_state([theta] * n),
        config.epsilon,
        max(budgets),
        seed,
        _partition_of(config),
        config.witness_mode,
        config.clifford_mode,
    )
    m_lin = product_mlin([theta] * n)
    records = []
    for budget in budgets:
        upto = min(budget, len(prefix))
        records.append(
            RunRecord(
                kind=config.kind,
                n=n,
                theta=theta,
                sigma=0.0,
                layer=budget,
                realization=realization,
                seed=seed,
                f_a=prefix[upto - 1],
                m_lin_initial=m_lin,
                ratio=None,
                witness_fired=fired_layer is not None and fired_layer <= budget,
            )
        )
    return records


def success_probability_sweep(config: ExperimentConfig) -> list:
    """Witness success probability over a theta grid and layer budgets.

    One trajectory per (theta, realization) serves every budget in
    layers_grid (budget L sees the prefix of the same orbit walk), which
    makes the empirical success probability exactly non-decreasing in L.
    """
    config = validate_config(config)
    if config.kind != "witness-sweep":
        raise ValidationError("config kind must be witness-sweep", field="kind")
    tasks = [
        (config, t, r)
        for t in range(len(config.theta_grid))
        for r in range(config.realizations)
    ]
    chunks = _map_tasks(_witness_realization, tasks, config.threads)
    return [rec for chunk in chunks for rec in chunk]


def success_probability(records, theta: float, budget: int) -> float:
    hits = [r.witness_fired for r in records if r.theta == theta and r.layer == budget]
    if not hits:
        raise ValidationError(f"no records for theta={theta}, budget={budget}")
    return sum(hits) / len(hits)


# --- noise scans ------------------------------------------------------------


def _noise_initial_state(config: ExperimentConfig) -> PureState:
    if config.kind == "toric-noise":
        return toric_code_ground_state(config.lx, config.ly)
    return product_state([0.0] * config.n)


def _noise_realization(config: ExperimentConfig, sigma_index: int, realization: int) -> list:
    sigma = config.sigmas[sigma_index]
    seed = derive_seed(config.master_seed, sigma_index, realization)
    state = _noise_initial_state(config)
    partition = _partition_of(config)
    spec = CircuitSpec(config.n, config.layers, sigma, seed, config.clifford_mode)
    theta = 0.0 if config.kind == "noise-scan" else None
    records = []
    for layer_index, gates in enumerate(build_circuit(spec)):
        apply_layer(state, gates)
        records.append(
            RunRecord(
                kind=config.kind,
                n=config.n,
                theta=theta,
                sigma=sigma,
                layer=layer_index + 1,
                realization=realization,
                seed=seed,
                f_a=anti_flatness(state, partition),
                m_lin_initial=0.0,
                ratio=None,
                witness_fired=None,
            )
        )
    return records


def noise_scan(config: ExperimentConfig) -> list:
    """Anti-flatness growth under coherent-noise-dressed Clifford layers,
    starting from a stabilizer state (|+> product or toric ground state)."""
    config = validate_config(config)
    if config.kind not in _NOISE_KINDS:
        raise ValidationError("config kind must be noise-scan or toric-noise", field="kind")
    tasks = [
        (config, s, r)
        for s in range(len(config.sigmas))
        for r in range(config.realizations)
    ]
    chunks = _map_tasks(_noise_realization, tasks, config.threads)
    return [rec for chunk in chunks for rec in chunk]


def run_experiment(config: ExperimentConfig) -> list:
    config = validate_config(config)
    dispatch = {
        "orbit-average": orbit_average_trace,
        "ratio-trace": ratio_trace_volume_law,
        "witness-sweep": success_probability_sweep,
        "noise-scan": noise_scan,
        "toric-noise": noise_scan,
    }
    return dispatch[config.kind](config)


def layer_mean_ci(records, sigma: float | None = None) -> dict:
    """Per-layer (mean, 95% half-width) of f_a, optionally filtered by sigma."""
    by_layer: dict[int, list] = {}
    for rec in records:
        if sigma is not None and rec.sigma != sigma:
            continue
        by_layer.setdefault(rec.layer, []).append(rec.f_a)
    return {layer: mean_ci95(vals) for layer, vals in sorted(by_layer.items())}
