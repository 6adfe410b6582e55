"""Positive definite binary quadratic forms and class numbers of imaginary
quadratic orders.

Degrees [H_c : K] of ring class fields are read off as h(O_c), computed two
ways: by enumerating reduced forms of discriminant c^2 D_K, and by the
classical conductor formula. The tower and inert-step checks compare ratios
of these class numbers with the predicted Galois group orders.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import QuadField, is_prime, kronecker, prime_factors
from .errors import BadDiscriminant, InputError, RatioMismatch


@dataclass(frozen=True, order=True)
class FormClass:
    A: int
    B: int
    C: int

    @property
    def disc(self) -> int:
        return self.B * self.B - 4 * self.A * self.C

    def is_reduced(self) -> bool:
        A, B, C = self.A, self.B, self.C
        if not (abs(B) <= A <= C):
            return False
        if (abs(B) == A or A == C) and B < 0:
            return False
        return True

    def is_primitive(self) -> bool:
        return math.gcd(math.gcd(self.A, self.B), self.C) == 1

    def __iter__(self):
        return iter((self.A, self.B, self.C))

    def __str__(self):
        return f"[{self.A},{self.B},{self.C}]"


def _check_disc(disc: int) -> None:
    if disc >= 0 or disc % 4 not in (0, 1):
        raise BadDiscriminant(f"{disc} is not a negative discriminant (0 or 1 mod 4)")


def reduced_forms(disc: int) -> list[FormClass]:
    """All reduced primitive forms of discriminant ``disc``, ordered by (A, B)."""
    _check_disc(disc)
    out = []
    A = 1
    while 3 * A * A <= -disc:
        for B in range(-A + 1, A + 1):
            if (B - disc) % 2:
                continue
            num = B * B - disc
            if num % (4 * A):
                continue
            C = num // (4 * A)
            f = FormClass(A, B, C)
            if C >= A and f.is_reduced() and f.is_primitive():
                out.append(f)
        A += 1
    return sorted(out, key=lambda f: (f.A, f.B))


def reduce_form(f: FormClass) -> FormClass:
    """The reduced form properly equivalent to a positive definite form."""
    A, B, C = f
    if A <= 0 or f.disc >= 0:
        raise BadDiscriminant(f"{f} is not positive definite")
    while True:
        # normalize B into (-A, A]
        if not (-A < B <= A):
            r = (A - B) // (2 * A)
            B, C = B + 2 * r * A, A * r * r + B * r + C
        if A > C:
            A, B, C = C, -B, A
            continue
        if A == C and B < 0:
            B = -B
        return FormClass(A, B, C)


def class_number(disc: int) -> int:
    return len(reduced_forms(disc))


def _unit_index(D_K: int, c: int) -> int:
    if c == 1:
        return 1
    return {-3: 3, -4: 2}.get(D_K, 1)


def class_number_formula(D_K: int, c: int) -> int:
    """h(O_c) = h(D_K) c prod_{p | c} (1 - (D_K/p)/p) / [O_K^* : O_c^*]."""
    h = Fraction(class_number(D_K) * c)
    for p in prime_factors(c) if c > 1 else []:
        h *= 1 - Fraction(kronecker(D_K, p), p)
    h /= _unit_index(D_K, c)
    if h.denominator != 1:
        raise ArithmeticError(f"class number formula gave non-integer {h}")
    return int(h)


@dataclass(frozen=True)
class QuadOrder:
    field: QuadField
    c: int

    def __post_init__(self):
        if not self.field.imaginary:
            raise BadDiscriminant(f"{self.field} is not imaginary")
        if self.c < 1:
            raise InputError("conductor must be positive")

    @property
    def disc(self) -> int:
        return self.c * self.c * self.field.fund_disc

    @property
    def h(self) -> int:
        return class_number(self.disc)


def class_number_order(field: QuadField, c: int) -> int:
    """h(O_c) by enumeration, asserted equal to the conductor formula."""
    order = QuadOrder(field, c)
    h = order.h
    h2 = class_number_formula(field.fund_disc, c)
    if h != h2:
        raise ArithmeticError(f"enumeration h={h} disagrees with formula h={h2} for c={c}")
    return h


def heegner_hypothesis(field: QuadField, N: int) -> bool:
    if not field.imaginary:
        raise BadDiscriminant(f"{field} is not imaginary")
    return all(kronecker(field.fund_disc, p) == 1 for p in prime_factors(N)) if N > 1 else True


@dataclass(frozen=True)
class TowerReport:
    fund_disc: int
    c: int
    p: int
    class_numbers: dict[int, int]  # n -> h(O_{c p^n}), n = 0..n_max
    ratios_to_base: dict[int, Fraction]  # n -> h(O_{cp^n}) / h(O_{cp})
    step_ratios: dict[int, Fraction]  # n -> h(O_{cp^{n+1}}) / h(O_{cp^n})
    first_step: Fraction  # h(O_{cp}) / h(O_c)
    precondition_ok: bool

    def to_dict(self) -> dict:
        return {
            "fund_disc": self.fund_disc,
            "c": self.c,
            "p": self.p,
            "class_numbers": {str(n): h for n, h in self.class_numbers.items()},
            "first_step_degree": str(self.first_step),
            "ratios_to_base": {str(n): str(r) for n, r in self.ratios_to_base.items()},
            "step_ratios": {str(n): str(r) for n, r in self.step_ratios.items()},
            "precondition_ok": self.precondition_ok,
        }


def tower_precondition(field: QuadField, c: int, p: int, N: int = 1) -> bool:
    """Stand-in for p not dividing c * N * [H_c:K] * disc(H_c): p coprime to c N D_K h(O_c)."""
    return (c * N * field.fund_disc * class_number(c * c * field.fund_disc)) % p != 0


def verify_tower_p(field: QuadField, c: int, p: int, n_max: int, N: int = 1) -> TowerReport:
    if p == 2 or not is_prime(p):
        raise InputError(f"p={p} must be an odd prime")
    if (c * field.fund_disc) % p == 0:
        raise InputError(f"p={p} divides c*D_K")
    ok = tower_precondition(field, c, p, N)
    hs = {n: class_number_order(field, c * p**n) for n in range(0, n_max + 2)}
    base = hs[1]
    ratios = {n: Fraction(hs[n], base) for n in range(1, n_max + 1)}
    steps = {n: Fraction(hs[n + 1], hs[n]) for n in range(1, n_max + 1)}
    for n in range(1, n_max + 1):
        if ratios[n] != p ** (n - 1):
            raise RatioMismatch(n, ratios[n], p ** (n - 1))
        if steps[n] != p:
            raise RatioMismatch(n, steps[n], p)
    hs.pop(n_max + 1)
    return TowerReport(field.fund_disc, c, p, hs, ratios, steps, Fraction(hs[1], hs[0]), ok)


def verify_inert_step(field: QuadField, k: int, p_j: int) -> int:
    """Degree h(O_k) / h(O_{k/p_j}); must equal p_j + 1."""
    primes = prime_factors(k)
    if math.prod(primes) != k:
        raise InputError(f"k={k} is not squarefree")
    if p_j not in primes:
        raise InputError(f"{p_j} does not divide {k}")
    for q in primes:
        if field.fund_disc % q == 0 or kronecker(field.fund_disc, q) != -1:
            raise InputError(f"{q} is not inert in {field}")
    ratio = Fraction(class_number_order(field, k), class_number_order(field, k // p_j))
    if ratio != p_j + 1:
        raise RatioMismatch(1, ratio, p_j + 1)
    return int(ratio)


def extend_class(f: FormClass, p: int) -> FormClass:
    """Image of a class of disc p^2 D under Pic(O_{cp}) -> Pic(O_c), as a reduced form.

    Picks an equivalent form with p not dividing A; then the ideal
    [A, (-B + p sqrt D)/2] extends to [A, (-b + sqrt D)/2] with p b = B mod 2A.
    """
    if p == 2 or f.disc % (p * p):
        raise InputError(f"p={p} must be odd and divide the conductor of {f}")
    D = f.disc // (p * p)
    A, B, _ = _coprime_leading(f, p)
    b = B * pow(p, -1, 2 * A) % (2 * A)
    num = b * b - D
    assert num % (4 * A) == 0, (f, b)
    return reduce_form(FormClass(A, b, num // (4 * A)))


def _coprime_leading(f: FormClass, p: int) -> FormClass:
    A, B, C = f
    for x in range(0, 50):
        for y in range(1, 50):
            if math.gcd(x, y) != 1:
                continue
            val = A * y * y + B * x * y + C * x * x
            if val % p:
                # complete (y, x) to a matrix [[y, s], [x, t]] with yt - sx = 1
                _, s0, t0 = _egcd(y, x)
                t, s = s0, -t0
                assert y * t - s * x == 1
                B2 = 2 * A * y * s + B * (y * t + x * s) + 2 * C * x * t
                C2 = A * s * s + B * s * t + C * t * t
                h = FormClass(val, B2, C2)
                assert h.disc == f.disc
                return h
    raise ArithmeticError(f"no value of {f} prime to {p}")


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return a, 1, 0
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y
