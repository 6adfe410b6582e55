"""Search for auxiliary primes q inert in K with p | q + 1 and p not dividing a_q."""
from __future__ import annotations

from dataclasses import dataclass

from .arith import QuadField, is_prime, kronecker, primes_up_to
from .curve import ApTable, CurveQ, count_ap
from .errors import BadReductionPrime, CMConditionFailed, InputError, SearchExhausted
from .witness import cm_discriminant


@dataclass(frozen=True)
class ConditionRecord:
    q: int
    inert: bool
    divides: bool
    ap_unit: bool
    kronecker: int
    q_plus_1_mod_p: int
    a_q: int
    a_q_mod_p: int

    @property
    def all_ok(self) -> bool:
        return self.inert and self.divides and self.ap_unit

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "inert": self.inert,
            "kronecker": self.kronecker,
            "p_divides_q_plus_1": self.divides,
            "q_plus_1_mod_p": self.q_plus_1_mod_p,
            "p_not_dividing_a_q": self.ap_unit,
            "a_q": self.a_q,
            "a_q_mod_p": self.a_q_mod_p,
        }


@dataclass(frozen=True)
class PrimeSearchResult:
    q: int
    checks: ConditionRecord
    scanned: int  # primes examined before the hit, inclusive

    def __post_init__(self):
        assert self.checks.all_ok and self.checks.q == self.q


def _a_q(curve: CurveQ, q: int, table: ApTable | None) -> int:
    if table is not None and q in table.merged():
        return table.ap(q)
    if q == 2:
        raise InputError("a_2 needs an explicit table entry")
    return count_ap(curve, q)


def verify_conditions(curve: CurveQ, field: QuadField, p: int, q: int,
                      table: ApTable | None = None) -> ConditionRecord:
    """Evaluate the three conditions on q separately, each with its witness."""
    if not is_prime(q):
        raise InputError(f"q={q} is not prime")
    if (curve.conductor * curve.disc) % q == 0:
        raise BadReductionPrime(f"q={q} divides N * disc")
    D = field.fund_disc
    kr = kronecker(D, q)
    a = _a_q(curve, q, table)
    return ConditionRecord(q, kr == -1, (q + 1) % p == 0, a % p != 0, kr, (q + 1) % p, a, a % p)


def _preconditions(curve: CurveQ, field: QuadField, p: int) -> None:
    if p == 2 or not is_prime(p):
        raise InputError(f"p={p} must be an odd prime")
    if not field.imaginary:
        raise InputError(f"{field} is not imaginary")
    if curve.conductor % p == 0:
        raise InputError(f"p={p} divides the conductor")
    D_cm = cm_discriminant(curve)
    if D_cm is not None and kronecker(D_cm, p) != -1:
        raise CMConditionFailed(f"p={p} is not inert in the CM field of discriminant {D_cm}")


def find_q(curve: CurveQ, field: QuadField, p: int, bound: int,
           table: ApTable | None = None) -> PrimeSearchResult:
    """Smallest prime q <= bound, q not dividing N * disc, meeting all three conditions."""
    _preconditions(curve, field, p)
    bad = curve.conductor * curve.disc
    scanned = 0
    for q in primes_up_to(bound):
        if bad % q == 0:
            continue
        scanned += 1
        # cheap filters first; a_q only for survivors
        if (q + 1) % p or kronecker(field.fund_disc, q) != -1:
            continue
        rec = verify_conditions(curve, field, p, q, table)
        if rec.all_ok:
            return PrimeSearchResult(q, rec, scanned)
    raise SearchExhausted(bound, f"no q <= {bound} for p={p}, D_K={field.fund_disc}; try a larger bound")
