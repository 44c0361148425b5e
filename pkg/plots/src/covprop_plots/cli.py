"""covprop-plot: render a CSV figure bundle to an image file."""

from __future__ import annotations

import argparse
import sys

from .renderer import SchemaError, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="covprop-plot",
        description="Render a covprop CSV bundle to a static image.")
    parser.add_argument("--bundle", required=True,
                        help="bundle directory (contains manifest.json)")
    parser.add_argument("--figure", required=True, help="figure id to render")
    parser.add_argument("--out", required=True,
                        help="output image path (.png or .svg)")
    parser.add_argument("--dpi", type=int, default=150)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0

    try:
        out = render(args.bundle, args.figure, args.out, dpi=args.dpi)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
