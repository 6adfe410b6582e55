"""Explicit families of independent points over distinct imaginary quadratic fields.

With M = 4 * prod(p | N) and

    f(m) = (1 + M m)^3 + a M^4 (1 + M m) + b M^6,

the point P_m = ((1 + M m)/M^2, sqrt(f(m))/M^3) lies on E over K_m = Q(sqrt f(m)).
Choosing m with f(m) < 0 and pairwise distinct squarefree kernels gives points
over linearly disjoint imaginary quadratic fields in which every prime of N
splits. Each such point is negated by the conjugation of its own field and
fixed by the others, which forces independence once each is non-torsion.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .arith import QuadField, is_perfect_square, kronecker, prime_factors, quad_conj, squarefree_kernel
from .curve import CurveQ, Point, TorsionCheck, nontorsion_certificate, on_curve
from .errors import CheckFailed, InputError, NonNegativeF, SearchExhausted, SquareF

# j-invariant -> discriminant of the CM order, for the 13 rational CM j-invariants
CM_J_TABLE: dict[int, int] = {
    0: -3,
    1728: -4,
    -3375: -7,
    8000: -8,
    -32768: -11,
    54000: -12,
    287496: -16,
    -884736: -19,
    -12288000: -27,
    16581375: -28,
    -884736000: -43,
    -147197952000: -67,
    -262537412640768000: -163,
}


@dataclass(frozen=True)
class WitnessConfig:
    curve: CurveQ
    M: int

    def __post_init__(self):
        expected = 4 * math.prod(prime_factors(self.curve.conductor)) if self.curve.conductor > 1 else 4
        if self.M != expected:
            raise InputError(f"M={self.M} should be {expected}")
        if self.curve.conductor % 2 == 0:
            assert self.M % 8 == 0
        else:
            assert self.M % 8 == 4


@dataclass(frozen=True)
class WitnessPoint:
    m: int
    f_m: int
    s: int
    d: int
    field: QuadField
    point: Point
    torsion: TorsionCheck
    split_checks: dict[int, int]  # p -> kronecker(D_K, p), plus D_K mod 8 under key 2

    @property
    def fund_disc(self) -> int:
        return self.field.fund_disc


@dataclass
class WitnessFamily:
    config: WitnessConfig
    members: list[WitnessPoint] = field(default_factory=list)
    rejected: list[tuple[int, str]] = field(default_factory=list)
    certificate: dict | None = None


@dataclass(frozen=True)
class ScanConfig:
    start: int | None = None  # default: just below the smallest real root
    max_steps: int = 10**4


def build_config(curve: CurveQ) -> WitnessConfig:
    primes = prime_factors(curve.conductor) if curve.conductor > 1 else []
    return WitnessConfig(curve, 4 * math.prod(primes))


def eval_f(config: WitnessConfig, m: int) -> int:
    M, a, b = config.M, config.curve.a, config.curve.b
    u = 1 + M * m
    return u**3 + a * M**4 * u + b * M**6


def make_point(config: WitnessConfig, m: int) -> WitnessPoint:
    f_m = eval_f(config, m)
    if f_m >= 0:
        raise NonNegativeF(f"f({m}) = {f_m} >= 0")
    if is_perfect_square(f_m):
        raise SquareF(f"f({m}) is a square")
    s, d = squarefree_kernel(f_m)
    K = QuadField(d)
    M = config.M
    x = K(Fraction(1 + M * m, M * M))
    y = K(0, Fraction(s, M**3))
    P = Point(config.curve, x, y)
    if not on_curve(P):
        raise AssertionError(f"P_{m} is off the curve")
    return WitnessPoint(m, f_m, s, d, K, P, nontorsion_certificate(P), split_record(config.curve, K))


def split_record(curve: CurveQ, field: QuadField) -> dict[int, int]:
    D = field.fund_disc
    rec = {}
    for p in prime_factors(curve.conductor) if curve.conductor > 1 else []:
        rec[p] = D % 8 if p == 2 else kronecker(D, p)
    return rec


def check_split(curve: CurveQ, field: QuadField) -> bool:
    if not field.imaginary:
        raise InputError(f"{field} is not imaginary")
    # odd p: (D_K|p) = 1; p = 2: D_K = 1 mod 8
    return all(v == 1 for v in split_record(curve, field).values())


def cm_discriminant(curve: CurveQ) -> int | None:
    j = curve.j_invariant
    if j.denominator != 1:
        return None
    return CM_J_TABLE.get(int(j))


def cm_field_d(curve: CurveQ) -> int | None:
    """Squarefree d with End(E) (x) Q = Q(sqrt d), or None without CM."""
    D = cm_discriminant(curve)
    if D is None:
        return None
    return squarefree_kernel(D)[1]


def scan_start(config: WitnessConfig) -> int:
    """Largest m with 1 + M m below M^2 times the smallest real root of the cubic."""
    E = config.curve
    with mpmath.workdps(40):
        roots = mpmath.polyroots([1, 0, E.a, E.b], maxsteps=200, extraprec=200)
        e = min(mpmath.re(r) for r in roots if abs(mpmath.im(r)) < mpmath.mpf(10) ** -20)
        r = e * config.M**2
        m = int(mpmath.floor((r - 1) / config.M))
    # exact confirmation: step down until f(m) < 0
    while eval_f(config, m) >= 0:
        m -= 1
    return m


def scan_family(curve: CurveQ, k: int, search: ScanConfig = ScanConfig()) -> WitnessFamily:
    if k < 1:
        raise InputError("k must be >= 1")
    config = build_config(curve)
    fam = WitnessFamily(config)
    cm_d = cm_field_d(curve)
    kernels: set[int] = set()
    m = scan_start(config) if search.start is None else search.start
    for _ in range(search.max_steps):
        reason = _screen(config, m, kernels, cm_d, fam)
        if reason:
            fam.rejected.append((m, reason))
        if len(fam.members) == k:
            break
        m -= 1
    else:
        raise SearchExhausted(search.max_steps, f"found {len(fam.members)} of {k} members")
    fam.certificate = independence_certificate(fam)
    return fam


def _screen(config, m, kernels, cm_d, fam) -> str | None:
    f_m = eval_f(config, m)
    if f_m >= 0:
        return "f(m) >= 0"
    if is_perfect_square(f_m):
        return "f(m) is a square"
    s, d = squarefree_kernel(f_m)
    if d in kernels:
        return f"kernel {d} already used"
    if cm_d is not None and d == cm_d:
        return "K_m is the CM field"
    wp = make_point(config, m)
    if not check_split(config.curve, wp.field):
        # impossible by the congruence f(m) = 1 mod p; surfaced rather than skipped
        raise CheckFailed(m, "split", f"D_K={wp.fund_disc}")
    if math.gcd(wp.fund_disc, config.curve.conductor) != 1:
        raise CheckFailed(m, "coprime", f"D_K={wp.fund_disc}")
    if not wp.torsion.nontorsion:
        return f"torsion point of order {wp.torsion.order}"
    kernels.add(d)
    fam.members.append(wp)
    return None


def independence_certificate(family: WitnessFamily) -> dict:
    if not family.members:
        raise InputError("empty family")
    seen: dict[int, int] = {}
    for w in family.members:
        if not nontorsion_certificate(w.point).nontorsion:
            raise CheckFailed(w.m, "i", "torsion member")
        if w.d in seen:
            raise CheckFailed(w.m, "ii", f"kernel {w.d} repeats member m={seen[w.d]}")
        seen[w.d] = w.m
        P = w.point
        conj = Point(P.curve, quad_conj(P.x), quad_conj(P.y))
        if conj != -P:
            raise CheckFailed(w.m, "iii", "conjugate is not the negative")
    k = len(family.members)
    return {
        "rank_lower_bound": k,
        "fields": [w.d for w in family.members],
        "argument": (
            "kernels pairwise distinct, so the fields are linearly disjoint; for each i an "
            "automorphism negating sqrt(d_i) and fixing the other sqrt(d_j) maps a relation "
            "sum a_j P_j = O to one differing only in the sign of a_i P_i, hence 2 a_i P_i = O "
            "and a_i = 0 as P_i has infinite order"
        ),
        "torsion_bound": family.members[0].torsion.bound,
    }
