#!/usr/bin/env python3
"""Locate the symmetry-breaking strength over a grid of potential depths.

Usage: python scripts/alpha_c_scan.py [--v0 0.01 0.02 0.04 0.08] [--im-tol 1e-9]

The threshold is amplitude-independent for the cosine/sine family; this scan
is the numerical check of that statement.
"""

import argparse

from nhring import estimate_alpha_c


def run(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--v0", nargs="*", type=float, default=[0.01, 0.02, 0.04, 0.08])
    ap.add_argument("--im-tol", type=float, default=1e-9)
    args = ap.parse_args(argv)

    print("v0,alpha_c")
    for v0 in args.v0:
        ac = estimate_alpha_c(v0, (0.5, 1.5), im_tol=args.im_tol)
        print(f"{v0!r},{ac!r}")
    return 0


if __name__ == "__main__":
    raise SystemExit(run())
