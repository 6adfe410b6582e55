"""Scan witness families over every catalog curve and tabulate what was accepted.

    python3 scripts/witness_sweep.py --count 8
"""
import argparse
import time

from rankwitness.catalog import load_catalog
from rankwitness.witness import cm_discriminant, scan_family


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=5)
    ap.add_argument("--catalog")
    args = ap.parse_args()
    for label, entry in load_catalog(args.catalog).items():
        t0 = time.perf_counter()
        fam = scan_family(entry.curve, args.count)
        dt = time.perf_counter() - t0
        print(f"{label}  M={fam.config.M}  CM={cm_discriminant(entry.curve)}  "
              f"rank>={fam.certificate['rank_lower_bound']}  rejected={len(fam.rejected)}  {dt:.2f}s")
        for w in fam.members:
            print(f"  m={w.m:>8}  s={w.s:<6} d={w.d:<22} D_K={w.fund_disc:<22} split={w.split_checks}")


if __name__ == "__main__":
    main()
