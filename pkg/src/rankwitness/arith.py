"""Exact integer/rational arithmetic and quadratic fields Q(sqrt d).

Rationals are :class:`fractions.Fraction` throughout (always reduced, positive
denominator), so equality is structural.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import gmpy2
import mpmath

from .errors import FactorizationIncomplete, FieldMismatch, InputError, ZeroInput

TRIAL_BOUND = 10**6


def is_prime(n: int) -> bool:
    return n >= 2 and bool(gmpy2.is_prime(n, 50))


@lru_cache(maxsize=8)
def _sieve(limit: int) -> tuple[int, ...]:
    if limit < 2:
        return ()
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
    return tuple(i for i, f in enumerate(flags) if f)


def primes_up_to(limit: int) -> list[int]:
    return list(_sieve(limit))


def is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def factorize(n: int, bound: int = TRIAL_BOUND) -> dict[int, int]:
    """Prime factorization of |n| by trial division up to ``bound``.

    A leftover cofactor c is accepted when its shape is forced: c prime,
    c = q^2 with q prime, or c < bound^3 and not a square (then c = q*r with
    distinct primes q, r > bound, which we record as the composite key c).
    Anything else raises :class:`FactorizationIncomplete`.
    """
    if n == 0:
        raise ZeroInput("cannot factor 0")
    n = abs(n)
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    step = 2
    while f <= bound and f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += step
        step = 6 - step
    if n == 1:
        return out
    if f * f > n or is_prime(n):
        out[n] = out.get(n, 0) + 1
        return out
    r = math.isqrt(n)
    if r * r == n and is_prime(r):
        out[r] = out.get(r, 0) + 2
        return out
    if n < bound**3 and r * r != n:
        # two distinct primes above the bound; fine for squarefree purposes
        out[n] = out.get(n, 0) + 1
        return out
    raise FactorizationIncomplete(f"cofactor {n} unresolved after trial division to {bound}")


def prime_factors(n: int, bound: int = TRIAL_BOUND) -> list[int]:
    return sorted(factorize(n, bound))


def radical(n: int) -> int:
    return math.prod(prime_factors(n))


def squarefree_kernel(n: int, bound: int = TRIAL_BOUND) -> tuple[int, int]:
    """Return (s, d) with n = s^2 * d, s >= 1 and d squarefree of the sign of n."""
    if n == 0:
        raise ZeroInput("squarefree kernel of 0")
    s, d = 1, 1
    for p, e in factorize(n, bound).items():
        s *= p ** (e // 2)
        if e % 2:
            d *= p
    if n < 0:
        d = -d
    assert s * s * d == n
    return s, d


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for e in factorize(n).values())


def valuation(x: int | Fraction, p: int) -> int | None:
    """p-adic valuation of a rational; ``None`` stands for +infinity (x = 0)."""
    x = Fraction(x)
    if x == 0:
        return None

    def v(k: int) -> int:
        e = 0
        while k % p == 0:
            k //= p
            e += 1
        return e

    return v(x.numerator) - v(x.denominator)


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n) on its full domain."""
    return int(gmpy2.kronecker(a, n))


def sqrt_mod(a: int, m: int) -> list[int]:
    """Every residue x mod m with x^2 = a mod m (m small)."""
    return [x for x in range(m) if (x * x - a) % m == 0]


def rational_reconstruct(x, max_den: int) -> Fraction:
    """Last continued-fraction convergent of x with denominator <= max_den.

    ``x`` is an mpmath real (or anything mpmath.mpf accepts); expansion stops
    early once a convergent reproduces x to working precision.
    """
    x = mpmath.mpf(x)
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    best = Fraction(int(mpmath.nint(x)))
    y = x
    for _ in range(400):
        a = int(mpmath.floor(y))
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > max_den:
            break
        best = Fraction(h1, k1)
        frac = y - a
        if frac == 0 or abs(x - mpmath.mpf(h1) / k1) <= abs(x) * mpmath.eps * 16:
            break
        y = 1 / frac
    return best


def fundamental_discriminant(d: int) -> int:
    return d if d % 4 == 1 else 4 * d


def field_of_discriminant(D: int) -> "QuadField":
    """The quadratic field whose fundamental discriminant is D."""
    d = D if D % 4 == 1 else D // 4
    f = QuadField(d)
    if f.fund_disc != D:
        raise InputError(f"{D} is not a fundamental discriminant")
    return f


@dataclass(frozen=True)
class QuadField:
    d: int

    def __post_init__(self):
        if self.d in (0, 1) or not is_squarefree(self.d):
            raise InputError(f"d={self.d} must be squarefree and not 0 or 1")

    @property
    def fund_disc(self) -> int:
        return fundamental_discriminant(self.d)

    @property
    def imaginary(self) -> bool:
        return self.d < 0

    def __call__(self, a=0, b=0) -> "QuadElem":
        return QuadElem(self, Fraction(a), Fraction(b))

    def __str__(self):
        return f"Q(sqrt({self.d}))"


@dataclass(frozen=True)
class QuadElem:
    """a + b*sqrt(d) with exact rational a, b."""

    field: QuadField
    a: Fraction
    b: Fraction

    def _coerce(self, other) -> "QuadElem":
        if isinstance(other, QuadElem):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElem(self.field, Fraction(other), Fraction(0))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElem(self.field, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(self.field, -self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElem(self.field, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self.field.d
        return QuadElem(self.field, self.a * o.a + d * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.field.d * self.b * self.b

    def inverse(self) -> "QuadElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in quadratic field")
        return QuadElem(self.field, self.a / n, -self.b / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadElem):
            return self.field == other.field and self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self):
        return hash((self.field.d, self.a, self.b))

    def is_rational(self) -> bool:
        return self.b == 0

    def __repr__(self):
        return f"({self.a} + {self.b}*sqrt({self.field.d}))"


def quad_conj(x: QuadElem) -> QuadElem:
    return QuadElem(x.field, x.a, -x.b)


class Fp:
    """Residue mod a prime p; enough field arithmetic for the group law."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.p = p
        self.v = v % p

    def _c(self, o):
        if isinstance(o, Fp):
            if o.p != self.p:
                raise FieldMismatch(f"F_{self.p} vs F_{o.p}")
            return o.v
        if isinstance(o, int):
            return o
        if isinstance(o, Fraction):
            return o.numerator * pow(o.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, o):
        return Fp(self.v + self._c(o), self.p)

    __radd__ = __add__

    def __sub__(self, o):
        return Fp(self.v - self._c(o), self.p)

    def __rsub__(self, o):
        return Fp(self._c(o) - self.v, self.p)

    def __mul__(self, o):
        return Fp(self.v * self._c(o), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __truediv__(self, o):
        return Fp(self.v * pow(self._c(o), -1, self.p), self.p)

    def __rtruediv__(self, o):
        return Fp(self._c(o) * pow(self.v, -1, self.p), self.p)

    def __pow__(self, k):
        return Fp(pow(self.v, k, self.p), self.p)

    def __eq__(self, o):
        if isinstance(o, (Fp, int, Fraction)):
            return (self.v - self._c(o)) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __repr__(self):
        return f"{self.v} (mod {self.p})"
