#!/usr/bin/env python3
"""Run every compiled-in preset into out/<name>/.

Usage: python scripts/run_all_presets.py [--out ROOT] [--only NAME ...]
"""

import argparse
import sys
import time
from pathlib import Path

from nhring.cli import main as nhring_main
from nhring.presets import PRESETS


def run(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out", help="root output directory")
    ap.add_argument("--only", nargs="*", help="subset of preset names")
    args = ap.parse_args(argv)

    names = args.only or sorted(PRESETS)
    root = Path(args.out)
    failures = []
    for name in names:
        command = PRESETS[name]["command"]
        outdir = root / name
        started = time.perf_counter()
        code = nhring_main([command, "--preset", name, "--out", str(outdir)])
        print(f"[{name}] exit={code} ({time.perf_counter() - started:.1f}s)")
        if code != 0:
            failures.append(name)
    if failures:
        print(f"failed: {', '.join(failures)}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(run())
