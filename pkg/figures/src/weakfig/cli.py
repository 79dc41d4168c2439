"""Flag-style entry point mirroring the FigureJob fields.

Exit codes: 0 on success, 2 for schema or argument problems (no image is
written), 3 for unexpected rendering failures.
"""

from __future__ import annotations

import argparse
import sys

from .render import KINDS, FigureJob, render
from .schema import SchemaError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weakfig", description="Render figures from simulator CSV output.")
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--input", required=True, action="append",
                        help="input CSV (repeatable; first file drives the figure)")
    parser.add_argument("--output", required=True, help="image path (.png or .svg)")
    parser.add_argument("--points", action="append", default=[],
                        help="protocol CSV with Monte-Carlo columns for error bars "
                             "(fidelity-curve only, repeatable)")
    parser.add_argument("--dpi", type=int, default=150)
    parser.add_argument("--cmap", default="viridis")
    parser.add_argument("--title", default=None)
    parser.add_argument("--levels", default=None,
                        help="comma-separated contour levels overriding the preset")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    levels = [float(tok) for tok in args.levels.split(",")] if args.levels else None
    try:
        job = FigureJob(kind=args.kind, inputs=args.input, output=args.output,
                        points=args.points, dpi=args.dpi, cmap=args.cmap,
                        title=args.title, levels=levels)
        info = render(job)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"rendering failure: {exc}", file=sys.stderr)
        return 3
    summary = " ".join(f"{k}={v}" for k, v in info.items())
    print(f"wrote {args.output}" + (f" ({summary})" if summary else ""))
    return 0


if __name__ == "__main__":
    sys.exit(main())
