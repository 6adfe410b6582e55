"""Short-Weierstrass curves y^2 = x^3 + a x + b over Q.

The group law is written once against duck-typed coordinates, so the same
code runs over Fraction (Q), QuadElem (Q(sqrt d)), Fp and mpmath complex
numbers. Complex coordinates are compared with a tolerance.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

import mpmath

from .arith import Fp, QuadElem, is_prime, prime_factors, primes_up_to
from .errors import BadReductionPrime, FieldMismatch, InputError, MissingPrime, NotOnCurve

TORSION_BOUND_QUADRATIC = 18


@dataclass(frozen=True)
class CurveQ:
    a: int
    b: int
    conductor: int
    label: str = ""

    def __post_init__(self):
        if self.disc == 0:
            raise InputError(f"singular curve a={self.a} b={self.b}")
        if self.conductor < 1:
            raise InputError("conductor must be positive")
        for p in prime_factors(self.conductor):
            if self.disc % p:
                raise InputError(f"conductor prime {p} does not divide disc {self.disc}")

    @property
    def disc(self) -> int:
        return -16 * (4 * self.a**3 + 27 * self.b**2)

    @property
    def j_invariant(self) -> Fraction:
        return Fraction(1728 * 4 * self.a**3, 4 * self.a**3 + 27 * self.b**2)

    @property
    def bad_primes(self) -> list[int]:
        return prime_factors(self.disc)

    def rhs(self, x):
        return x * x * x + self.a * x + self.b

    def point(self, x, y) -> "Point":
        P = Point(self, x, y)
        if not on_curve(P):
            raise NotOnCurve(f"({x}, {y}) not on {self}")
        return P

    @property
    def O(self) -> "Point":
        return Point(self, None, None)

    def __str__(self):
        name = f"{self.label}: " if self.label else ""
        return f"{name}y^2 = x^3 + ({self.a})x + ({self.b})"


@dataclass(frozen=True)
class Point:
    """Affine point (x, y); x = y = None is the point at infinity."""

    curve: CurveQ
    x: Any
    y: Any

    def __post_init__(self):
        # plain ints would drift into float under the group law
        for name in ("x", "y"):
            v = getattr(self, name)
            if isinstance(v, int) and not isinstance(v, bool):
                object.__setattr__(self, name, Fraction(v))

    @property
    def is_zero(self) -> bool:
        return self.x is None

    def __neg__(self):
        return self if self.is_zero else Point(self.curve, self.x, -self.y)

    def __add__(self, other: "Point") -> "Point":
        return add(self, other)

    def __sub__(self, other: "Point") -> "Point":
        return add(self, -other)

    def __rmul__(self, n: int) -> "Point":
        return scalar_mul(n, self)


QuadraticPoint = Point


def _is_complex(v) -> bool:
    return isinstance(v, (mpmath.mpc, mpmath.mpf, complex, float))


def _eq(u, v) -> bool:
    if _is_complex(u) or _is_complex(v):
        scale = max(1, abs(u), abs(v))
        return abs(u - v) <= scale * mpmath.mpf(10) ** (8 - mpmath.mp.dps)
    return u == v


def _is_zero(u) -> bool:
    return _eq(u, 0)


def on_curve(P: Point) -> bool:
    if P.is_zero:
        return True
    return _eq(P.y * P.y, P.curve.rhs(P.x))


def _same_field(P: Point, Q: Point) -> None:
    tx, ty = type(P.x), type(Q.x)
    if _is_complex(P.x) and _is_complex(Q.x):
        return
    if tx is not ty:
        raise FieldMismatch(f"cannot add points over {tx.__name__} and {ty.__name__}")
    if tx is QuadElem and P.x.field != Q.x.field:
        raise FieldMismatch(f"{P.x.field} vs {Q.x.field}")
    if tx is Fp and P.x.p != Q.x.p:
        raise FieldMismatch(f"F_{P.x.p} vs F_{Q.x.p}")


def add(P: Point, Q: Point) -> Point:
    if P.curve != Q.curve:
        raise InputError("points on different curves")
    if P.is_zero:
        return Q
    if Q.is_zero:
        return P
    _same_field(P, Q)
    E = P.curve
    if _eq(P.x, Q.x):
        if _is_zero(P.y + Q.y):
            return E.O
        lam = (3 * P.x * P.x + E.a) / (2 * P.y)
    else:
        lam = (Q.y - P.y) / (Q.x - P.x)
    x3 = lam * lam - P.x - Q.x
    y3 = lam * (P.x - x3) - P.y
    return Point(E, x3, y3)


def scalar_mul(n: int, P: Point) -> Point:
    if n < 0:
        return -scalar_mul(-n, P)
    R = P.curve.O
    B = P
    while n:
        if n & 1:
            R = add(R, B)
        B = add(B, B)
        n >>= 1
    return R


def reduce_mod(P: Point, p: int) -> Point:
    """Reduce a rational point mod p (assumed p-integral)."""
    if P.is_zero:
        return P
    return Point(P.curve, Fp(Fraction(P.x).numerator, p) / Fraction(P.x).denominator,
                 Fp(Fraction(P.y).numerator, p) / Fraction(P.y).denominator)


# --------------------------------------------------------------------------
# point counting and Hecke coefficients

def _char_sum(a: int, b: int, p: int) -> int:
    """sum over x mod p of the quadratic character of x^3 + a x + b."""
    sq = [0] * p
    for y in range(1, p):
        sq[y * y % p] = 1
    chi = [2 * s - 1 for s in sq]
    chi[0] = 0
    a %= p
    b %= p
    return sum(chi[(x * x * x + a * x + b) % p] for x in range(p))


def count_ap(curve: CurveQ, p: int) -> int:
    """a_p = p + 1 - #E(F_p) for a prime of good reduction of this model, p >= 3."""
    if p < 3 or not is_prime(p):
        raise BadReductionPrime(f"p={p}: short model needs an odd prime")
    if curve.disc % p == 0:
        raise BadReductionPrime(f"p={p} divides disc {curve.disc}")
    ap = -_char_sum(curve.a, curve.b, p)
    assert ap * ap < 4 * p, (p, ap)
    return ap


def multiplicative_ap(curve: CurveQ, p: int) -> int:
    """a_p for p || N, p >= 5, on a model minimal at p: the same character sum gives +-1."""
    if curve.conductor % p or curve.conductor % (p * p) == 0 or p < 5:
        raise BadReductionPrime(f"p={p} is not a multiplicative prime this model can count")
    if curve.a % p**4 == 0 and curve.b % p**6 == 0:
        raise BadReductionPrime(f"model not minimal at {p}")
    ap = -_char_sum(curve.a, curve.b, p)
    if ap not in (1, -1):
        raise BadReductionPrime(f"p={p}: character sum {ap} is not +-1")
    return ap


def hasse_ok(p: int, ap: int) -> bool:
    return ap * ap < 4 * p


@dataclass
class ApTable:
    curve: CurveQ
    entries: dict[int, int] = field(default_factory=dict)
    overrides: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        for p, ap in self.overrides.items():
            if self.curve.disc % p:
                raise InputError(f"override prime {p} does not divide disc")
            if self.curve.conductor % p == 0:
                raise InputError(f"override prime {p} divides the conductor")
            if not hasse_ok(p, ap):
                raise InputError(f"override a_{p}={ap} violates the Hasse bound")
            if p in self.entries and self.entries[p] != ap:
                raise InputError(f"override a_{p}={ap} disagrees with table value {self.entries[p]}")

    @classmethod
    def build(cls, curve: CurveQ, max_prime: int, overrides: dict[int, int] | None = None) -> "ApTable":
        overrides = dict(overrides or {})
        entries = {}
        for p in primes_up_to(max_prime):
            if p in overrides:
                continue
            if curve.disc % p:
                entries[p] = count_ap(curve, p)
            elif curve.conductor % p == 0:
                if curve.conductor % (p * p) == 0:
                    entries[p] = 0
                elif p >= 5:
                    entries[p] = multiplicative_ap(curve, p)
        return cls(curve, entries, overrides)

    def ap(self, p: int) -> int:
        if p in self.overrides:
            return self.overrides[p]
        if p in self.entries:
            return self.entries[p]
        raise MissingPrime(p)

    def primes(self) -> list[int]:
        return sorted(set(self.entries) | set(self.overrides))

    def merged(self) -> dict[int, int]:
        out = dict(self.entries)
        out.update(self.overrides)
        return dict(sorted(out.items()))

    # CSV cache: header "p,ap", ascending p
    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["p", "ap"])
            for p, ap in self.merged().items():
                w.writerow([p, ap])

    @classmethod
    def from_csv(cls, curve: CurveQ, path: str | Path, overrides: dict[int, int] | None = None) -> "ApTable":
        overrides = dict(overrides or {})
        entries = {}
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        if not rows or rows[0] != ["p", "ap"]:
            raise InputError(f"{path}: expected header p,ap")
        last = 0
        for row in rows[1:]:
            try:
                p, ap = int(row[0]), int(row[1])
            except (ValueError, IndexError):
                raise InputError(f"{path}: malformed row {row}") from None
            if p <= last:
                raise InputError(f"{path}: primes not strictly ascending at {p}")
            last = p
            if p in overrides:
                if overrides[p] != ap:
                    raise InputError(f"{path}: a_{p}={ap} conflicts with override {overrides[p]}")
                continue
            entries[p] = ap
        return cls(curve, entries, overrides)


def hecke_an(table: ApTable, n: int) -> int:
    if n < 1:
        raise InputError("n must be positive")
    N = table.curve.conductor
    result = 1
    m = n
    for p in prime_factors(n):
        k = 0
        while m % p == 0:
            m //= p
            k += 1
        result *= _prime_power_coeff(table.ap(p), p, k, N % p == 0)
    return result


def _prime_power_coeff(ap: int, p: int, k: int, bad: bool) -> int:
    if bad:
        return ap**k
    prev, cur = 1, ap
    for _ in range(k - 1):
        prev, cur = cur, ap * cur - p * prev
    return cur if k else 1


def an_list(table: ApTable, T: int) -> list[int]:
    """[a_0, a_1, ..., a_T] with a_0 = 0, by a smallest-prime-factor sieve."""
    spf = list(range(T + 1))
    for i in range(2, math.isqrt(T) + 1):
        if spf[i] == i:
            for j in range(i * i, T + 1, i):
                if spf[j] == j:
                    spf[j] = i
    N = table.curve.conductor
    a = [0] * (T + 1)
    if T >= 1:
        a[1] = 1
    for n in range(2, T + 1):
        p = spf[n]
        m, k = n, 0
        while m % p == 0:
            m //= p
            k += 1
        a[n] = a[m] * _prime_power_coeff(table.ap(p), p, k, N % p == 0)
    return a


# --------------------------------------------------------------------------
# torsion


@dataclass(frozen=True)
class TorsionCheck:
    nontorsion: bool
    order: int | None
    bound: int = TORSION_BOUND_QUADRATIC

    @property
    def text(self) -> str:
        if self.nontorsion:
            return (f"n*P != O for n = 1..{self.bound}; torsion points over Q or a quadratic "
                    f"field have order <= {self.bound} (Kenku-Momose, Kamienny), so P has infinite order")
        return f"P has exact order {self.order}"


def nontorsion_certificate(P: Point, bound: int = TORSION_BOUND_QUADRATIC) -> TorsionCheck:
    if P.is_zero:
        raise InputError("the identity has no non-torsion certificate")
    Q = P
    for n in range(1, bound + 1):
        if Q.is_zero:
            return TorsionCheck(False, n, bound)
        Q = add(Q, P)
    return TorsionCheck(True, None, bound)


def rational_points_search(curve: CurveQ, height: int) -> list[Point]:
    """Every affine rational point with x = u/w^2, max(|u|, w^2) <= height.

    Brute force over (u, w); the y-coordinate must then be v/w^3 with v
    integral. Used as an oracle for small-height generators.
    """
    pts = []
    w = 1
    while w * w <= height:
        w2 = w * w
        for u in range(-height, height + 1):
            if math.gcd(u, w) != 1:
                continue
            num = u**3 + curve.a * u * w2 * w2 + curve.b * w2**3
            if num < 0:
                continue
            v = math.isqrt(num)
            if v * v != num:
                continue
            x = Fraction(u, w2)
            for y in sorted({v, -v}):
                pts.append(Point(curve, x, Fraction(y, w2 * w)))
        w += 1
    return pts


def naive_height(P: Point) -> float:
    x = Fraction(P.x)
    return math.log(max(abs(x.numerator), x.denominator, 1))

