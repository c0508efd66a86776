"""Typed reading of flatmagic run CSVs.

The contract is the fixed 11-column header written by the simulation CLI;
anything else fails loudly with the missing column names.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

EXPECTED_COLUMNS = (
    "kind", "n", "theta", "sigma", "layer", "realization", "seed",
    "f_a", "m_lin_initial", "ratio", "witness_fired",
)


class SchemaError(Exception):
    """The CSV does not conform to the run-record schema."""

    def __init__(self, message: str, missing: tuple = ()):
        super().__init__(message)
        self.missing = tuple(missing)


@dataclass(frozen=True)
class Row:
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


def _opt_float(cell: str) -> float | None:
    return float(cell) if cell != "" else None


def _opt_bool(cell: str) -> bool | None:
    if cell == "":
        return None
    if cell not in ("true", "false"):
        raise SchemaError(f"bad boolean cell {cell!r}")
    return cell == "true"


def read_rows(path: str) -> list:
    """Parse one CSV, validating the header and every row."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(
                f"{path}: empty file, missing columns: {', '.join(EXPECTED_COLUMNS)}",
                missing=EXPECTED_COLUMNS,
            ) from None
        missing = tuple(c for c in EXPECTED_COLUMNS if c not in header)
        if missing:
            raise SchemaError(
                f"{path}: missing columns: {', '.join(missing)}", missing=missing
            )
        idx = {c: header.index(c) for c in EXPECTED_COLUMNS}
        rows = []
        for lineno, cells in enumerate(reader, 2):
            if len(cells) != len(header):
                raise SchemaError(f"{path}:{lineno}: expected {len(header)} cells")
            try:
                rows.append(
                    Row(
                        kind=cells[idx["kind"]],
                        n=int(cells[idx["n"]]),
                        theta=_opt_float(cells[idx["theta"]]),
                        sigma=_opt_float(cells[idx["sigma"]]),
                        layer=int(cells[idx["layer"]]),
                        realization=int(cells[idx["realization"]]),
                        seed=int(cells[idx["seed"]]),
                        f_a=float(cells[idx["f_a"]]),
                        m_lin_initial=float(cells[idx["m_lin_initial"]]),
                        ratio=_opt_float(cells[idx["ratio"]]),
                        witness_fired=_opt_bool(cells[idx["witness_fired"]]),
                    )
                )
            except ValueError as exc:
                raise SchemaError(f"{path}:{lineno}: {exc}") from None
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def read_many(paths) -> list:
    rows = []
    for path in paths:
        rows.extend(read_rows(path))
    return rows
