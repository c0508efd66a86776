"""Command-line driver: config parsing, CSV emission, experiment dispatch.

Config grammar (also accepted inline as flags): one ``key = value`` pair
per line, ``#`` starts a comment. Lists are comma-separated. Keys:

    kind          orbit-average | ratio-trace | witness-sweep | noise-scan | toric-noise
    n             qubit count (derived from lx, ly for toric-noise)
    theta         product-state angle in radians
    theta_grid    list of angles (witness-sweep)
    layers        recorded circuit depth / witness budget
    layers_grid   list of witness budgets
    prep_layers   scrambling layers before recording (ratio-trace)
    realizations  Monte Carlo sample count
    epsilon       witness threshold
    sigmas        list of coherent-noise strengths
    partition     first-half | comma list of qubit indices
    seed          master seed (any non-negative integer)
    out           output CSV path
    threads       worker process cap
    clifford_mode uniform | generators
    witness_mode  incremental | fresh
    lx, ly        toric unit-cell counts

Exit codes: 0 success, 2 validation failure (message names the field),
3 capacity exceeded.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import fields

import numpy as np

from .errors import (
    CapacityError,
    PartitionError,
    UnavailableError,
    UnsupportedError,
    ValidationError,
)
from .experiments import ExperimentConfig, RunRecord, run_experiment, validate_config
from .magic import (
    DEFAULT_SWEEP_CAP,
    m2_from_mlin,
    product_mlin,
    stabilizer_linear_entropy,
)
from .oracle import exhaustive_clifford_average, golden_c42
from .statevec import MAX_QUBITS, PureState, anti_flatness, half_cut, product_state

CSV_HEADER = "kind,n,theta,sigma,layer,realization,seed,f_a,m_lin_initial,ratio,witness_fired"

_INT_KEYS = ("n", "layers", "prep_layers", "realizations", "seed", "threads", "lx", "ly")
_FLOAT_KEYS = ("theta", "epsilon")
_FLOAT_LIST_KEYS = ("theta_grid", "sigmas")
_INT_LIST_KEYS = ("layers_grid",)
_STR_KEYS = ("kind", "out", "clifford_mode", "witness_mode")
_ALL_KEYS = (
    _INT_KEYS + _FLOAT_KEYS + _FLOAT_LIST_KEYS + _INT_LIST_KEYS + _STR_KEYS + ("partition",)
)


def _fmt(value) -> str:
    """CSV cell: empty for None, 17 significant digits for floats."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def record_row(rec: RunRecord) -> str:
    return ",".join(
        _fmt(v)
        for v in (
            rec.kind, rec.n, rec.theta, rec.sigma, rec.layer, rec.realization,
            rec.seed, rec.f_a, rec.m_lin_initial, rec.ratio, rec.witness_fired,
        )
    )


def write_csv(records, path: str) -> None:
    ordered = sorted(records, key=lambda r: (r.realization, r.layer))
    with open(path, "w", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        for rec in ordered:
            fh.write(record_row(rec) + "\n")


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _FLOAT_LIST_KEYS:
            return tuple(float(v) for v in raw.split(",") if v.strip())
        if key in _INT_LIST_KEYS:
            return tuple(int(v) for v in raw.split(",") if v.strip())
    except ValueError:
        raise ValidationError(f"bad value {raw!r} for key {key!r}", field=key) from None
    if key == "partition":
        if raw == "first-half":
            return None
        try:
            return tuple(int(v) for v in raw.split(",") if v.strip())
        except ValueError:
            raise ValidationError(f"bad partition {raw!r}", field=key) from None
    return raw


def parse_config(path: str) -> ExperimentConfig:
    """Parse and validate a key-value run config; unknown keys are rejected."""
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, eq, raw = line.partition("=")
            key = key.strip()
            if not eq:
                raise ValidationError(f"line {lineno}: expected 'key = value'", field=key)
            if key not in _ALL_KEYS:
                raise ValidationError(f"unknown config key {key!r}", field=key)
            values[key] = _parse_value(key, raw)
    return _config_from_values(values)


def _config_from_values(values: dict) -> ExperimentConfig:
    if "kind" not in values:
        raise ValidationError("missing required key 'kind'", field="kind")
    kwargs = {}
    rename = {"seed": "master_seed"}
    field_names = {f.name for f in fields(ExperimentConfig)}
    for key, val in values.items():
        name = rename.get(key, key)
        if name in field_names and val is not None:
            kwargs[name] = val
    return validate_config(ExperimentConfig(**kwargs))


def serialize_config(config: ExperimentConfig) -> str:
    """Canonical text form; parse_config on the result yields an equal config."""
    lines = [f"kind = {config.kind}", f"n = {config.n}"]
    if config.theta is not None:
        lines.append(f"theta = {config.theta:.17g}")
    if config.theta_grid:
        lines.append("theta_grid = " + ", ".join(f"{t:.17g}" for t in config.theta_grid))
    if config.layers:
        lines.append(f"layers = {config.layers}")
    if config.layers_grid:
        lines.append("layers_grid = " + ", ".join(str(v) for v in config.layers_grid))
    if config.prep_layers:
        lines.append(f"prep_layers = {config.prep_layers}")
    lines.append(f"realizations = {config.realizations}")
    if config.epsilon:
        lines.append(f"epsilon = {config.epsilon:.17g}")
    if config.sigmas:
        lines.append("sigmas = " + ", ".join(f"{s:.17g}" for s in config.sigmas))
    if config.partition is not None:
        lines.append("partition = " + ", ".join(str(q) for q in config.partition))
    lines.append(f"seed = {config.master_seed}")
    if config.out:
        lines.append(f"out = {config.out}")
    lines.append(f"threads = {config.threads}")
    lines.append(f"clifford_mode = {config.clifford_mode}")
    lines.append(f"witness_mode = {config.witness_mode}")
    if config.kind == "toric-noise":
        lines.append(f"lx = {config.lx}")
        lines.append(f"ly = {config.ly}")
    return "\n".join(lines) + "\n"


def _add_experiment_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="run-config path (exclusive with inline flags)")
    sub.add_argument("--n", type=int)
    sub.add_argument("--theta", type=float)
    sub.add_argument("--theta-grid", help="comma list of angles")
    sub.add_argument("--layers", type=int)
    sub.add_argument("--layers-grid", help="comma list of witness budgets")
    sub.add_argument("--prep-layers", type=int)
    sub.add_argument("--realizations", type=int)
    sub.add_argument("--epsilon", type=float)
    sub.add_argument("--sigma", help="comma list of noise strengths")
    sub.add_argument("--partition", help="'first-half' or comma list of qubits")
    sub.add_argument("--seed", type=int)
    sub.add_argument("--out", required=False)
    sub.add_argument("--threads", type=int)
    sub.add_argument("--clifford-mode", choices=("uniform", "generators"))
    sub.add_argument("--witness-mode", choices=("incremental", "fresh"))
    sub.add_argument("--lx", type=int)
    sub.add_argument("--ly", type=int)


_FLAG_TO_KEY = {
    "n": "n", "theta": "theta", "theta_grid": "theta_grid", "layers": "layers",
    "layers_grid": "layers_grid", "prep_layers": "prep_layers",
    "realizations": "realizations", "epsilon": "epsilon", "sigma": "sigmas",
    "partition": "partition", "seed": "seed", "out": "out", "threads": "threads",
    "clifford_mode": "clifford_mode", "witness_mode": "witness_mode",
    "lx": "lx", "ly": "ly",
}


def _experiment_config(kind: str, args: argparse.Namespace) -> ExperimentConfig:
    inline = {
        key: getattr(args, flag)
        for flag, key in _FLAG_TO_KEY.items()
        if getattr(args, flag) is not None
    }
    if args.config:
        if inline:
            raise ValidationError(
                "--config cannot be combined with inline flags", field="config"
            )
        config = parse_config(args.config)
        if config.kind != kind:
            raise ValidationError(
                f"config kind {config.kind!r} does not match subcommand {kind!r}",
                field="kind",
            )
        return config
    values = {"kind": kind}
    for key, val in inline.items():
        if key in ("theta_grid", "sigmas", "partition", "layers_grid"):
            values[key] = _parse_value(key, str(val))
        else:
            values[key] = val
    return _config_from_values(values)


def _cmd_experiment(kind: str, args: argparse.Namespace) -> int:
    config = _experiment_config(kind, args)
    if not config.out:
        raise ValidationError("an output CSV path is required", field="out")
    print(
        f"flatmagic {kind}: n={config.n} layers={config.layers or config.layers_grid} "
        f"realizations={config.realizations} seed={config.master_seed}",
        file=sys.stderr,
    )
    records = run_experiment(config)
    write_csv(records, config.out)
    print(f"flatmagic {kind}: wrote {len(records)} records to {config.out}", file=sys.stderr)
    return 0


def _cmd_magic(args: argparse.Namespace) -> int:
    n = args.n
    if n is None or args.theta is None:
        raise ValidationError("magic requires --n and --theta", field="theta")
    if not 1 <= n <= MAX_QUBITS:
        raise CapacityError(f"n={n} outside 1..{MAX_QUBITS}", cap=MAX_QUBITS)
    thetas = [args.theta] * n
    if n <= DEFAULT_SWEEP_CAP:
        m_lin = stabilizer_linear_entropy(product_state(thetas))
    else:
        m_lin = product_mlin(thetas)
    print(f"M_lin = {_fmt(float(m_lin))}")
    print(f"M_2 = {_fmt(float(m2_from_mlin(m_lin)))}")
    if n >= 2:
        part = (
            _parse_value("partition", args.partition) if args.partition else None
        ) or half_cut(n)
        print(f"F_A = {_fmt(float(anti_flatness(product_state(thetas), part)))}")
    return 0


def _cmd_verify_theorem(args: argparse.Namespace) -> int:
    rng = np.random.default_rng(args.seed)
    ratios = []
    for i in range(args.states):
        vec = rng.normal(size=4) + 1j * rng.normal(size=4)
        state = PureState(2, vec / np.linalg.norm(vec))
        avg = exhaustive_clifford_average(state, (0,))
        m_lin = stabilizer_linear_entropy(state)
        ratios.append(avg / m_lin)
        print(f"state {i:02d}: ratio = {ratios[-1]:.17g}")
    spread = max(ratios) - min(ratios)
    print(f"measured c(4,2) = {float(np.mean(ratios)):.17g} (spread {spread:.3g})")
    print(f"golden c(4,2) = {golden_c42():.17g}")
    print(f"asymptotic c(4,2) = {12 / 64:.17g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flatmagic",
        description="Probe non-stabilizerness through entanglement-spectrum anti-flatness.",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    for kind in ("orbit-average", "ratio-trace", "witness-sweep", "noise-scan", "toric-noise"):
        sub = subs.add_parser(kind, help=f"run the {kind} experiment")
        _add_experiment_flags(sub)
    magic = subs.add_parser("magic", help="print M_lin, M_2, F_A of a theta-product state")
    magic.add_argument("--n", type=int)
    magic.add_argument("--theta", type=float)
    magic.add_argument("--partition")
    verify = subs.add_parser(
        "verify-theorem-n2", help="exhaustive two-qubit orbit average vs M_lin"
    )
    verify.add_argument("--states", type=int, default=20)
    verify.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "magic":
            return _cmd_magic(args)
        if args.command == "verify-theorem-n2":
            return _cmd_verify_theorem(args)
        return _cmd_experiment(args.command, args)
    except CapacityError as exc:
        print(f"flatmagic: capacity error: {exc}", file=sys.stderr)
        return 3
    except (ValidationError, PartitionError, UnsupportedError, UnavailableError) as exc:
        field = getattr(exc, "field", None)
        where = f" (field: {field})" if field else ""
        print(f"flatmagic: invalid configuration{where}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
