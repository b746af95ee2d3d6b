"""`render <figure-name> --in <dir> --out <file.png>`"""

from __future__ import annotations

import argparse
import sys

from .figures import FIGURES, render
from .io import SchemaError


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="render", description="Render nhring CSV artifacts into figure panels.")
    ap.add_argument("figure", choices=sorted(FIGURES), help="figure name")
    ap.add_argument("--in", dest="indir", required=True, help="directory holding the input CSVs")
    ap.add_argument("--out", required=True, help="output image path (.png)")
    ap.add_argument("--log", action="store_true", help="log color scale (amplifying runs)")
    args = ap.parse_args(argv)
    try:
        path = render(args.figure, args.indir, args.out, log=args.log)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
