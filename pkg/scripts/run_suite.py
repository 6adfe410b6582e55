"""Run the golden command suite; write reports to a directory or compare against one.

    python3 scripts/run_suite.py --write tests/golden
    python3 scripts/run_suite.py --check tests/golden
"""
import argparse
import sys
import time
from pathlib import Path

from rankwitness.cli import run
from rankwitness.suite import SUITE


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    g = ap.add_mutually_exclusive_group(required=True)
    g.add_argument("--write", type=Path)
    g.add_argument("--check", type=Path)
    args = ap.parse_args()
    bad = 0
    for name, argv in SUITE:
        t0 = time.perf_counter()
        text, code = run(argv)
        dt = time.perf_counter() - t0
        if args.write:
            args.write.mkdir(parents=True, exist_ok=True)
            (args.write / f"{name}.json").write_text(text)
            status = "written"
        else:
            same = (args.check / f"{name}.json").read_text() == text
            bad += not same
            status = "same" if same else "DIFFERS"
        print(f"{name:20s} exit={code} {status:8s} {dt:6.2f}s")
        bad += code != 0
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
