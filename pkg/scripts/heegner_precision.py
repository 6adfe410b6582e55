"""Trace-relation residuals for 37a-short, D_K = -7 as working precision grows.

    python3 scripts/heegner_precision.py --digits 20 30 40 60
"""
import argparse

import mpmath

from rankwitness.catalog import lookup
from rankwitness.heegner import heegner_trace_to_rational, make_parametrization, verify_norm_inert, verify_norm_tower


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--curve", default="37a-short")
    ap.add_argument("--fund-disc", type=int, default=-7)
    ap.add_argument("--digits", type=int, nargs="+", default=[20, 30, 40, 60])
    args = ap.parse_args()
    entry = lookup(args.curve)
    print(f"{'digits':>6} {'trace point':>14} {'inert l=3':>12} {'inert l=5':>12} {'tower p=3':>12}")
    for d in args.digits:
        param = make_parametrization(entry.table(200), d)
        tr = heegner_trace_to_rational(param, args.fund_disc)
        r3 = verify_norm_inert(param, args.fund_disc, 3).residual
        r5 = verify_norm_inert(param, args.fund_disc, 5).residual
        rt = verify_norm_tower(param, args.fund_disc, 3).residual
        pt = f"({tr.point.x}, {tr.point.y})" if tr.point else "O"
        print(f"{d:>6} {pt:>14} {mpmath.nstr(r3, 3):>12} {mpmath.nstr(r5, 3):>12} {mpmath.nstr(rt, 3):>12}")


if __name__ == "__main__":
    main()
