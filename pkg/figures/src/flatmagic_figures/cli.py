"""One plotting script per panel kind, each with --in/--out flags."""

from __future__ import annotations

import argparse
import sys

from .panels import PanelSpec, render
from .schema import SchemaError


def _run(kind: str, argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog=f"fm-plot-{kind}",
        description=f"Render a {kind} panel from flatmagic run CSVs.",
    )
    parser.add_argument(
        "--in", dest="inputs", action="append", required=True,
        help="input CSV path (repeat for multiple files)",
    )
    parser.add_argument("--out", required=True, help="output image path (.svg or .png)")
    parser.add_argument("--xlabel", default="")
    parser.add_argument("--ylabel", default="")
    parser.add_argument("--title", default="")
    args = parser.parse_args(argv)
    spec = PanelSpec(
        inputs=tuple(args.inputs), kind=kind, out=args.out,
        xlabel=args.xlabel, ylabel=args.ylabel, title=args.title,
    )
    try:
        render(spec)
    except (SchemaError, OSError) as exc:
        print(f"fm-plot-{kind}: {exc}", file=sys.stderr)
        return 2
    print(f"fm-plot-{kind}: wrote {spec.out}", file=sys.stderr)
    return 0


def main_orbit(argv=None) -> int:
    return _run("orbit", argv)


def main_ratio(argv=None) -> int:
    return _run("ratio", argv)


def main_knee(argv=None) -> int:
    return _run("knee", argv)


def main_noise(argv=None) -> int:
    return _run("noise", argv)


if __name__ == "__main__":
    sys.exit(_run(sys.argv[1], sys.argv[2:]))
