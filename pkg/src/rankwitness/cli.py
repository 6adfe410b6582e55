"""Command-line entry point: ``python -m rankwitness <command> ...``.

Each command prints one canonical JSON report. Exit codes: 0 when every
check passed, 1 when a mathematical check failed or a bounded search came up
empty, 2 for bad input, catalog or IO problems.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import report
from .arith import field_of_discriminant, is_prime
from .catalog import lookup
from .classfield import class_number_order, verify_inert_step, verify_tower_p
from .curve import ApTable, hasse_ok
from .errors import CheckFailure, InputError, RankWitnessError
from .heegner import heegner_trace_to_rational, make_parametrization, verify_norm_inert, verify_norm_tower
from .primesearch import find_q
from .recurrence import first_nonintegral, generate, supersingular_tail, tail_drops
from .witness import ScanConfig, cm_discriminant, scan_family

EXIT_OK, EXIT_CHECK, EXIT_INPUT = 0, 1, 2


class ParseError(InputError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def cmd_ap(args) -> tuple[dict, bool]:
    entry = lookup(args.curve, args.catalog)
    table = entry.table(args.max_prime)
    cache_state = None
    if args.cache:
        path = Path(args.cache)
        if path.exists():
            cached = ApTable.from_csv(entry.curve, path, entry.ap_overrides)
            if cached.merged() != table.merged():
                diff = sorted(p for p in set(cached.merged()) | set(table.merged())
                              if cached.merged().get(p) != table.merged().get(p))
                raise InputError(f"cache {path} disagrees with recomputation at p in {diff[:10]}")
            cache_state = "verified"
        else:
            try:
                table.to_csv(path)
            except OSError as exc:
                raise InputError(f"cannot write cache {path}: {exc}") from None
            cache_state = "written"
    merged = table.merged()
    hasse = {p: hasse_ok(p, a) for p, a in merged.items()}
    results = {
        "ap": merged,
        "bad_primes": entry.curve.bad_primes,
        "hasse_bound_holds": all(hasse.values()),
        "cache": cache_state,
    }
    return report.make_report("ap", {"curve": args.curve, "max_prime": args.max_prime, "cache": args.cache},
                              results, all(hasse.values())), all(hasse.values())


def cmd_witness(args) -> tuple[dict, bool]:
    entry = lookup(args.curve, args.catalog)
    fam = scan_family(entry.curve, args.count, ScanConfig(max_steps=args.bound))
    members = []
    for w in fam.members:
        members.append({
            "m": w.m,
            "f_m": w.f_m,
            "s": w.s,
            "d": w.d,
            "fund_disc": w.fund_disc,
            "x": w.point.x.a,
            "y_coeff": w.point.y.b,
            "nontorsion": w.torsion.nontorsion,
            "torsion_argument": w.torsion.text,
            "split_checks": w.split_checks,
        })
    results = {
        "M": fam.config.M,
        "cm_discriminant": cm_discriminant(entry.curve),
        "members": members,
        "rejected": [{"m": m, "reason": r} for m, r in fam.rejected],
        "certificate": fam.certificate,
    }
    ok = all(m["nontorsion"] for m in members) and len(members) == args.count
    return report.make_report("witness", {"curve": args.curve, "count": args.count, "bound": args.bound},
                              results, ok), ok


def cmd_classfield(args) -> tuple[dict, bool]:
    K = field_of_discriminant(args.fund_disc)
    if args.inert_step:
        k, p_j = args.inert_step
        deg = verify_inert_step(K, k, p_j)
        results = {"k": k, "p_j": p_j, "degree": deg,
                   "h_k": class_number_order(K, k), "h_k_over_p_j": class_number_order(K, k // p_j)}
        inputs = {"fund_disc": args.fund_disc, "inert_step": [k, p_j]}
    else:
        if args.prime is None:
            raise InputError("--prime is required unless --inert-step is given")
        rep = verify_tower_p(K, args.conductor, args.prime, args.nmax)
        results = rep.to_dict()
        results["ratios"] = [str(rep.step_ratios[n]) for n in sorted(rep.step_ratios)]
        inputs = {"fund_disc": args.fund_disc, "conductor": args.conductor, "prime": args.prime, "nmax": args.nmax}
    return report.make_report("classfield", inputs, results, True), True


def cmd_heegner(args) -> tuple[dict, bool]:
    entry = lookup(args.curve, args.catalog)
    param = make_parametrization(entry.table(100), args.precision)
    inputs = {"curve": args.curve, "fund_disc": args.fund_disc, "precision": args.precision,
              "verify_inert": args.verify_inert, "verify_tower": args.verify_tower}
    if args.verify_inert or args.verify_tower:
        if args.verify_inert:
            chk = verify_norm_inert(param, args.fund_disc, args.verify_inert)
        else:
            chk = verify_norm_tower(param, args.fund_disc, args.verify_tower)
        results = {
            "kind": chk.kind,
            "ell": chk.ell,
            "a_ell": chk.a_ell,
            "base_forms": [str(f) for f in chk.base_forms],
            "upper_forms": [str(f) for f in chk.upper_forms],
            "class_counts": chk.class_counts,
            "residual": report.tagged(chk.residual, 6),
            "tolerance": report.tagged(chk.tolerance, 6),
            "scale": param.scale,
        }
        return report.make_report("heegner", inputs, results, chk.ok), chk.ok
    tr = heegner_trace_to_rational(param, args.fund_disc)
    results = {
        "form": str(tr.form),
        "scale": tr.scale,
        "point": tr.point,
        "nontorsion": tr.nontorsion,
        "residual": report.tagged(tr.residual, 6),
    }
    ok = tr.point is not None and tr.nontorsion
    return report.make_report("heegner", inputs, results, ok), ok


def cmd_primesearch(args) -> tuple[dict, bool]:
    entry = lookup(args.curve, args.catalog)
    K = field_of_discriminant(args.fund_disc)
    res = find_q(entry.curve, K, args.p, args.bound, entry.table(3))
    results = {"q": res.q, "checks": res.checks.to_dict(), "primes_scanned": res.scanned}
    inputs = {"curve": args.curve, "fund_disc": args.fund_disc, "p": args.p, "bound": args.bound}
    return report.make_report("primesearch", inputs, results, True), True


def cmd_recurrence(args) -> tuple[dict, bool]:
    if not is_prime(args.p):
        raise InputError(f"p={args.p} is not prime")
    state = generate(args.c0, args.c1, args.ap, args.p, args.steps)
    vals = state.vals
    outcome = first_nonintegral(args.c0, args.c1, args.ap, args.p)
    supersingular = args.ap % args.p == 0
    tail_ok = supersingular_tail(vals) if supersingular else tail_drops(vals)
    results = {
        "sequence": [str(c) for c in state.seq],
        "valuations": vals,
        "first_nonintegral": {"kind": outcome.kind, "index": outcome.index},
        "supersingular": supersingular,
        "tail_valuations_drop": tail_ok,
    }
    inputs = {"p": args.p, "ap": args.ap, "c0": args.c0, "c1": args.c1, "steps": args.steps}
    return report.make_report("recurrence", inputs, results, tail_ok), tail_ok


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="also write the report to this file")
    common.add_argument("--catalog", help="curve catalog (JSON lines); default: bundled")
    parser = _Parser(prog="rankwitness", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ap", parents=[common], help="a_p table with optional CSV cache")
    p.add_argument("curve")
    p.add_argument("--max-prime", type=int, default=100)
    p.add_argument("--cache")
    p.set_defaults(func=cmd_ap)

    p = sub.add_parser("witness", parents=[common], help="independent points over distinct quadratic fields")
    p.add_argument("curve")
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--bound", type=int, default=10**4, help="maximum number of m values scanned")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("classfield", parents=[common], help="ring class field degrees")
    p.add_argument("--fund-disc", type=int, required=True)
    p.add_argument("--conductor", type=int, default=1)
    p.add_argument("--prime", type=int)
    p.add_argument("--nmax", type=int, default=3)
    p.add_argument("--inert-step", type=int, nargs=2, metavar=("K", "P_J"))
    p.set_defaults(func=cmd_classfield)

    p = sub.add_parser("heegner", parents=[common], help="Heegner point trace and trace relations")
    p.add_argument("curve")
    p.add_argument("--fund-disc", type=int, required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--verify-inert", type=int, metavar="ELL")
    g.add_argument("--verify-tower", type=int, metavar="P")
    p.add_argument("--precision", type=int, default=30)
    p.set_defaults(func=cmd_heegner)

    p = sub.add_parser("primesearch", parents=[common], help="auxiliary prime q for a given p")
    p.add_argument("curve")
    p.add_argument("--fund-disc", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--bound", type=int, default=10**4)
    p.set_defaults(func=cmd_primesearch)

    p = sub.add_parser("recurrence", parents=[common], help="p c_{n+1} = a_p c_n - c_{n-1}")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--ap", type=int, required=True)
    p.add_argument("--c0", type=int, required=True)
    p.add_argument("--c1", type=int, required=True)
    p.add_argument("--steps", type=int, default=20)
    p.set_defaults(func=cmd_recurrence)
    return parser


def _failure(command: str, exc: Exception) -> dict:
    return report.make_report(command or "", {}, {"error": type(exc).__name__, "detail": str(exc)}, False)


def run(argv: list[str] | None = None) -> tuple[str, int]:
    """Parse, dispatch and serialize; returns (report text, exit code)."""
    command = ""
    out = None
    try:
        args = build_parser().parse_args(argv)
        command, out = args.command, args.out
        rep, ok = args.func(args)
        code = EXIT_OK if ok else EXIT_CHECK
    except CheckFailure as exc:
        rep, code = _failure(command, exc), EXIT_CHECK
    except (InputError, OSError) as exc:
        rep, code = _failure(command, exc), EXIT_INPUT
    except RankWitnessError as exc:
        rep, code = _failure(command, exc), EXIT_CHECK
    text = report.dumps(rep)
    if out:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            text = report.dumps(_failure(command, exc))
            code = EXIT_INPUT
    return text, code


def main(argv: list[str] | None = None) -> int:
    text, code = run(argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
