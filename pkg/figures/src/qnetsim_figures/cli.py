"""qnetsim-figures FIGURE_ID INPUT_CSV OUTPUT_IMAGE"""

from __future__ import annotations

import argparse
import sys

from .render import FIGURE_IDS, FigureInputError, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qnetsim-figures",
        description="Render a qnetsim experiment CSV into its figure analogue",
    )
    parser.add_argument("figure_id", choices=FIGURE_IDS)
    parser.add_argument("input_csv")
    parser.add_argument("output_path")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        render(FigureSpec(args.figure_id, args.input_csv, args.output_path))
    except (FigureInputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.output_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
