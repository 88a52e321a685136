"""Command-line entry point: render --figure F3 --in <dir> --out fig3.svg."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .figures import FigureId, FigureSpec, render_figure
from .schemas import SchemaMismatch

EXIT_OK = 0
EXIT_SCHEMA = 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="render",
        description="Render simulation-suite CSV/JSON outputs into a figure file.",
    )
    p.add_argument("--figure", required=True, choices=[f.value for f in FigureId])
    p.add_argument("--in", dest="input_dir", required=True,
                   help="directory containing the experiment's output files")
    p.add_argument("--out", dest="output_file", required=True,
                   help="image file to write (.svg or .png)")
    p.add_argument("--ep-marker", type=float, default=None, metavar="KAPPA",
                   help="draw vertical EP markers at +/-KAPPA (F5)")
    p.add_argument("--no-labels", action="store_true", help="suppress line labels")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    style = {"line_labels": not args.no_labels}
    if args.ep_marker is not None:
        style["ep_markers"] = args.ep_marker
    spec = FigureSpec(
        figure_id=FigureId(args.figure),
        input_dir=Path(args.input_dir),
        output_file=Path(args.output_file),
        style=style,
    )
    try:
        out = render_figure(spec)
    except SchemaMismatch as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    print(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
