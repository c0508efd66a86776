"""Panel rendering: mean curves with 95% confidence bands from raw samples.

Rendering is read-only over the CSVs: ``extract_series`` produces the plot
specification (curve labels, x/y arrays, band half-widths) and ``render``
draws it, so the same inputs always map to the same data series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .schema import SchemaError, read_many  # noqa: E402

PANEL_KINDS = ("orbit", "ratio", "knee", "noise")

_DEFAULT_LABELS = {
    "orbit": ("Clifford layers", "anti-flatness"),
    "ratio": ("extra Clifford layers", "anti-flatness ratio"),
    "knee": ("initial second stabilizer Renyi entropy", "success probability"),
    "noise": ("Clifford layers", "anti-flatness"),
}


@dataclass(frozen=True)
class PanelSpec:
    inputs: tuple  # one or more CSV paths
    kind: str  # orbit | ratio | knee | noise
    out: str
    xlabel: str = ""
    ylabel: str = ""
    title: str = ""

    def __post_init__(self):
        if self.kind not in PANEL_KINDS:
            raise SchemaError(f"unknown panel kind {self.kind!r}")
        if not self.inputs:
            raise SchemaError("panel needs at least one input CSV")


@dataclass
class Series:
    label: str
    x: list
    y: list
    band: list = field(default_factory=list)  # 95% half-widths, empty = no band


def _mean_ci(values) -> tuple:
    n = len(values)
    mean = sum(values) / n
    if n < 2:
        return mean, 0.0
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, 1.96 * math.sqrt(var / n)


def _binomial_ci(hits: int, total: int) -> tuple:
    p = hits / total
    return p, 1.96 * math.sqrt(max(p * (1 - p), 0.0) / total)


def _curve_over_layers(rows, label) -> Series:
    by_layer: dict[int, list] = {}
    for row in rows:
        by_layer.setdefault(row.layer, []).append(row)
    xs, ys, band = [], [], []
    for layer in sorted(by_layer):
        xs.append(layer)
        mean, half = _mean_ci([r.f_a for r in by_layer[layer]])
        ys.append(mean)
        band.append(half)
    return Series(label=label, x=xs, y=ys, band=band)


def _group_label(value, prefix) -> str:
    return f"{prefix}={value:g}" if value is not None else prefix


def extract_series(spec: PanelSpec) -> list:
    """The panel's data series, deterministically ordered."""
    if spec.kind == "knee":
        series = []
        for path in spec.inputs:
            rows = read_many([path])
            budgets = sorted({r.layer for r in rows})
            for budget in budgets:
                by_theta: dict[float, list] = {}
                for row in rows:
                    if row.layer != budget:
                        continue
                    if row.witness_fired is None:
                        raise SchemaError(f"{path}: knee panel needs witness_fired cells")
                    by_theta.setdefault(row.m_lin_initial, []).append(row)
                xs, ys, band = [], [], []
                for m_lin in sorted(by_theta):
                    grouped = by_theta[m_lin]
                    xs.append(-math.log1p(-m_lin))  # M_2 of the initial state
                    p, half = _binomial_ci(
                        sum(r.witness_fired for r in grouped), len(grouped)
                    )
                    ys.append(p)
                    band.append(half)
                stem = Path(path).stem
                label = f"{stem}, {budget} layers" if len(budgets) > 1 else stem
                series.append(Series(label=label, x=xs, y=ys, band=band))
        return series

    rows = read_many(spec.inputs)
    if spec.kind == "orbit":
        thetas = sorted({r.theta for r in rows}, key=lambda t: (t is None, t))
        return [
            _curve_over_layers(
                [r for r in rows if r.theta == theta], _group_label(theta, "theta")
            )
            for theta in thetas
        ]
    if spec.kind == "noise":
        sigmas = sorted({r.sigma for r in rows}, key=lambda s: (s is None, s))
        return [
            _curve_over_layers(
                [r for r in rows if r.sigma == sigma], _group_label(sigma, "sigma")
            )
            for sigma in sigmas
        ]
    # ratio panel: rows without a ratio (stabilizer inputs) cannot be plotted
    kept = [r for r in rows if r.ratio is not None]
    if not kept:
        raise SchemaError("ratio panel: no rows with a ratio value")
    series = []
    for theta in sorted({r.theta for r in kept}):
        sub = [r for r in kept if r.theta == theta]
        by_layer: dict[int, list] = {}
        for row in sub:
            by_layer.setdefault(row.layer, []).append(row.ratio)
        xs, ys, band = [], [], []
        for layer in sorted(by_layer):
            xs.append(layer)
            mean, half = _mean_ci(by_layer[layer])
            ys.append(mean)
            band.append(half)
        series.append(Series(label=_group_label(theta, "theta"), x=xs, y=ys, band=band))
    return series


def render(spec: PanelSpec) -> str:
    """Draw the panel and write the image; returns the output path."""
    series = extract_series(spec)
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    for s in series:
        (line,) = ax.plot(s.x, s.y, marker="o", markersize=3, label=s.label)
        if s.band:
            lo = [y - b for y, b in zip(s.y, s.band)]
            hi = [y + b for y, b in zip(s.y, s.band)]
            ax.fill_between(s.x, lo, hi, alpha=0.25, color=line.get_color(), linewidth=0)
    if spec.kind == "ratio":
        ax.axhline(1.0, color="crimson", linestyle="--", linewidth=1.2, label="theory")
    ax.set_xlabel(spec.xlabel or _DEFAULT_LABELS[spec.kind][0])
    ax.set_ylabel(spec.ylabel or _DEFAULT_LABELS[spec.kind][1])
    if spec.title:
        ax.set_title(spec.title)
    if spec.kind in ("orbit", "noise"):
        ax.set_yscale("log" if _spans_decades(series) else "linear")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(spec.out)
    plt.close(fig)
    return spec.out


def _spans_decades(series) -> bool:
    values = [y for s in series for y in s.y if y > 0]
    return bool(values) and max(values) / max(min(values), 1e-300) > 1e3
