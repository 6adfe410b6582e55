"""Heegner points on X_0(N) pushed to E(C) through the modular parametrization.

A Heegner form [A, B, C] of discriminant c^2 D_K has N | A and B = c*beta
(mod 2N), where beta is a fixed square root of D_K mod 4N; its CM point
tau = (-B + sqrt(disc)) / (2A) maps to

    z(tau) = sum_{n >= 1} a_n / n * q^n,   q = exp(2 pi i tau),

a point of C / L_f where L_f is the period lattice of the newform. For the
short model we rescale by u = L_f / L (found from Gamma_0(N) periods) and
work in C / L throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

import mpmath
from mpmath import mpf

from .arith import QuadField, field_of_discriminant, kronecker, rational_reconstruct
from .classfield import FormClass, class_number, extend_class, heegner_hypothesis, reduce_form
from .curve import (
    ApTable,
    CurveQ,
    Point,
    add,
    an_list,
    naive_height,
    nontorsion_certificate,
    on_curve,
    rational_points_search,
    scalar_mul,
)
from .errors import (
    ClassNumberNotOne,
    InputError,
    MissingPrime,
    NoSquareRoot,
    NotInert,
    PrecisionUnreachable,
    RecognitionFailed,
    SearchExhausted,
)
from .lattice import GUARD_DIGITS, PeriodLattice, elliptic_exp, period_lattice

DEFAULT_ATTEMPTS = 10**4


@dataclass(frozen=True)
class HeegnerForm:
    A: int
    B: int
    C: int
    N: int

    def __post_init__(self):
        if self.A % self.N:
            raise InputError(f"N={self.N} does not divide A={self.A}")
        if (self.B * self.B - self.disc) % (4 * self.N):
            raise InputError("B^2 != disc mod 4N")
        if self.disc >= 0 or self.A <= 0:
            raise InputError("form must be positive definite")

    @property
    def disc(self) -> int:
        return self.B * self.B - 4 * self.A * self.C

    @property
    def tau(self):
        return (-self.B + mpmath.sqrt(self.disc)) / (2 * self.A)

    @property
    def klass(self) -> FormClass:
        return reduce_form(FormClass(self.A, self.B, self.C))

    def __str__(self):
        return f"[{self.A},{self.B},{self.C}]"


def heegner_beta(N: int, D: int) -> int:
    """Least B in [0, 2N) with B^2 = D mod 4N."""
    for B in range(2 * N):
        if (B * B - D) % (4 * N) == 0:
            return B
    raise NoSquareRoot(f"{D} has no square root mod {4 * N}")


def heegner_taus(N: int, disc: int, count: int | None = None, beta: int | None = None,
                 max_attempts: int = DEFAULT_ATTEMPTS) -> list[HeegnerForm]:
    """One level-N Heegner form per class of discriminant ``disc``.

    Leading coefficients A = N, 2N, ... are tried in turn, so each class gets
    the representative with the largest Im(tau). Returned in the order of the
    reduced forms.
    """
    K, c = _field_and_conductor(disc)
    if math.gcd(c, N) != 1:
        raise InputError(f"order conductor {c} is not prime to N={N}")
    if not heegner_hypothesis(K, N):
        raise InputError(f"Heegner hypothesis fails for D_K={K.fund_disc}, N={N}")
    if beta is None:
        beta = heegner_beta(N, K.fund_disc)
    B0 = c * beta % (2 * N)
    if (B0 * B0 - disc) % (4 * N):
        raise NoSquareRoot(f"{B0}^2 != {disc} mod {4 * N}")
    h = class_number(disc) if count is None else count
    found: dict[FormClass, HeegnerForm] = {}
    attempts = 0
    k = 1
    while len(found) < h:
        A = N * k
        for B in range(B0, 2 * A, 2 * N):
            attempts += 1
            if attempts > max_attempts:
                raise SearchExhausted(max_attempts, f"{len(found)} of {h} classes for disc {disc}")
            num = B * B - disc
            if num % (4 * A):
                continue
            f = FormClass(A, B, num // (4 * A))
            if not f.is_primitive():
                continue
            cls = reduce_form(f)
            if cls not in found:
                found[cls] = HeegnerForm(A, B, f.C, N)
        k += 1
    return [found[cls] for cls in sorted(found, key=lambda g: (g.A, g.B))]


def _field_and_conductor(disc: int) -> tuple[QuadField, int]:
    for f in range(math.isqrt(-disc), 0, -1):
        if disc % (f * f) == 0 and (disc // (f * f)) % 4 in (0, 1):
            try:
                K = field_of_discriminant(disc // (f * f))
            except InputError:
                continue
            return K, f
    raise InputError(f"{disc} has no fundamental part")


# --------------------------------------------------------------------------
# modular parametrization


def terms_needed(im_tau, tol) -> int:
    """Least T with sum_{n > T} n r^n < tol, r = exp(-2 pi Im tau)."""
    r = mpmath.exp(-2 * mpmath.pi * im_tau)
    T = 1
    while r ** (T + 1) * ((T + 1) - T * r) / (1 - r) ** 2 >= tol:
        T += 1
    return T


@dataclass
class Parametrization:
    """Coefficients a_n/n on demand plus the lattice scale u = L_f / L."""

    table: ApTable
    lattice: PeriodLattice
    scale: Fraction | None = None
    _an: list[int] = field(default_factory=list, repr=False)

    def coeffs(self, T: int) -> list[int]:
        if len(self._an) <= T:
            if max(self.table.primes(), default=1) < T:
                # extend the a_p table on demand, keeping the catalog overrides
                self.table = ApTable.build(self.table.curve, 2 * T, self.table.overrides)
            self._an = an_list(self.table, T)
        return self._an

    def value(self, tau, tol):
        """z(tau) in C / L_f (unscaled)."""
        return modular_param(self.table, tau, tol, coeffs=self.coeffs)

    def z(self, tau, tol):
        """z(tau) rescaled into C / L of the short model."""
        if self.scale is None:
            self.scale = parametrization_scale(self)
        return self.value(tau, tol) / mpf(self.scale.numerator) * self.scale.denominator


def modular_param(table: ApTable, tau, tol, coeffs=None):
    im = mpmath.im(tau)
    if im <= 0:
        raise InputError("tau must lie in the upper half plane")
    T = terms_needed(im, tol)
    if coeffs is None:
        if max(table.primes(), default=1) < T:
            raise MissingPrime(T)
        an = an_list(table, T)
    else:
        an = coeffs(T)
    q = mpmath.exp(2j * mpmath.pi * tau)
    # Horner in q: z = q (c_1 + q (c_2 + ...))
    acc = mpmath.mpc(0)
    for n in range(T, 0, -1):
        acc = acc * q + mpf(an[n]) / n
    return acc * q


def _gamma0_elements(N: int, count: int):
    out = []
    for k in range(1, 6):
        c = N * k
        for d in range(1, c):
            if math.gcd(c, d) != 1:
                continue
            a = pow(d, -1, c)
            b = (a * d - 1) // c
            out.append((a, b, c, d))
            if len(out) == count:
                return out
    return out


def _rational_gcd(values: list[Fraction]) -> Fraction:
    vals = [abs(v) for v in values if v]
    den = reduce(lambda x, y: x * y // math.gcd(x, y), (v.denominator for v in vals), 1)
    num = reduce(math.gcd, (int(v * den) for v in vals), 0)
    return Fraction(num, den)


def parametrization_scale(param: Parametrization, n_periods: int = 8, max_den: int = 12) -> Fraction:
    """u with L_f = u L, from periods z(g tau) - z(tau), g in Gamma_0(N)."""
    L = param.lattice
    N = param.table.curve.conductor
    with mpmath.workdps(L.digits + GUARD_DIGITS):
        tol = mpf(10) ** (-(L.digits + 4))
        coords = []
        for a, b, c, d in _gamma0_elements(N, n_periods):
            tau0 = mpmath.mpc(-mpf(d) / c, 1 / mpf(c))
            gtau = (a * tau0 + b) / (c * tau0 + d)
            per = param.value(gtau, tol) - param.value(tau0, tol)
            for x in L.coords(per):
                r = rational_reconstruct(x, max_den)
                if abs(x - mpf(r.numerator) / r.denominator) > mpf(10) ** (-L.digits // 2):
                    raise PrecisionUnreachable(f"period coordinate {mpmath.nstr(x, 20)} is not rational")
                coords.append(r)
    u = _rational_gcd(coords)
    if u == 0:
        raise PrecisionUnreachable("all sampled periods vanished")
    return u


# --------------------------------------------------------------------------
# rational recognition of the trace


@dataclass(frozen=True)
class TraceResult:
    form: HeegnerForm
    z: object
    trace_z: object
    point: Point | None  # None when the trace is the identity
    residual: object
    digits: int
    scale: Fraction
    nontorsion: bool


def _check_class_number_one(K: QuadField, N: int) -> None:
    if class_number(K.fund_disc) != 1:
        raise ClassNumberNotOne(f"h({K.fund_disc}) = {class_number(K.fund_disc)}")
    if not heegner_hypothesis(K, N):
        raise InputError(f"Heegner hypothesis fails for D_K={K.fund_disc}, N={N}")


def heegner_trace_to_rational(param: Parametrization, D_K: int, max_den: int | None = None) -> TraceResult:
    L = param.lattice
    E = L.curve
    K = field_of_discriminant(D_K)
    _check_class_number_one(K, E.conductor)
    digits = L.digits
    max_den = max_den or 10 ** (digits // 3)
    with mpmath.workdps(digits + GUARD_DIGITS):
        tol = mpf(10) ** (-(digits + 4))
        (form,) = heegner_taus(E.conductor, D_K)
        z = param.z(form.tau, tol)
        # trace to Q: z + conj(z), L is stable under conjugation
        tz = L.reduce(z + mpmath.conj(z))
        P = elliptic_exp(L, tz)
        if P.is_zero:
            return TraceResult(form, z, tz, None, mpf(0), digits, param.scale, False)
        x, y = P.x, P.y
        if abs(mpmath.im(x)) + abs(mpmath.im(y)) > mpf(10) ** (-digits // 2):
            raise RecognitionFailed("trace is not on the real locus")
        xr = rational_reconstruct(mpmath.re(x), max_den)
        yr = rational_reconstruct(mpmath.re(y), max_den)
        res = max(abs(x - mpf(xr.numerator) / xr.denominator), abs(y - mpf(yr.numerator) / yr.denominator))
    Q = Point(E, xr, yr)
    if res > mpf(10) ** (-digits // 2) or not on_curve(Q):
        raise RecognitionFailed(f"no small rational point near the trace (residual {mpmath.nstr(res, 5)})")
    cert = nontorsion_certificate(Q)
    return TraceResult(form, z, tz, Q, res, digits, param.scale, cert.nontorsion)


def multiple_of(P: Point, G: Point, torsion: list[Point], kmax: int = 50) -> int | None:
    """k with P = k G + T for some torsion T (|k| <= kmax), else None."""
    for k in range(0, kmax + 1):
        kG = scalar_mul(k, G)
        for sign in (1, -1):
            for T in torsion:
                if add(scalar_mul(sign, kG), T) == P:
                    return sign * k
    return None


def small_height_generator(E: CurveQ, height: int = 2000) -> tuple[Point, list[Point]]:
    """Least-height non-torsion point from an exhaustive search, plus the torsion found."""
    pts = rational_points_search(E, height)
    torsion = [E.O] + [P for P in pts if not nontorsion_certificate(P, 12).nontorsion]
    free = [P for P in pts if P not in torsion]
    if not free:
        raise SearchExhausted(height, "no non-torsion point of small height")
    G = min(free, key=lambda P: (naive_height(P), Fraction(P.x), Fraction(P.y)))
    return G, torsion


# --------------------------------------------------------------------------
# trace relations


@dataclass(frozen=True)
class NormCheck:
    kind: str
    ell: int
    a_ell: int
    base_forms: list[HeegnerForm]
    upper_forms: list[HeegnerForm]
    class_counts: dict[str, int]
    residual: object
    tolerance: object
    digits: int

    @property
    def ok(self) -> bool:
        return self.residual < self.tolerance


def _inert_setup(param: Parametrization, D_K: int, ell: int) -> QuadField:
    E = param.lattice.curve
    K = field_of_discriminant(D_K)
    _check_class_number_one(K, E.conductor)
    if E.conductor % ell == 0:
        raise InputError(f"{ell} divides the conductor")
    if kronecker(D_K, ell) != -1:
        raise NotInert(f"{ell} is not inert in {K}")
    return K


def verify_norm_inert(param: Parametrization, D_K: int, ell: int, tolerance="1e-8",
                      a_ell: int | None = None) -> NormCheck:
    """|sum of conductor-ell points - a_ell * conductor-1 point| modulo L."""
    _inert_setup(param, D_K, ell)
    L = param.lattice
    N = L.curve.conductor
    a = param.table.ap(ell) if a_ell is None else a_ell
    with mpmath.workdps(L.digits + GUARD_DIGITS):
        tolerance = mpf(tolerance)
        tol = mpf(10) ** (-(L.digits + 4))
        base = heegner_taus(N, D_K)
        upper = heegner_taus(N, ell * ell * D_K)
        z0 = param.z(base[0].tau, tol)
        total = mpmath.fsum(param.z(f.tau, tol) for f in upper)
        residual = L.distance_to_lattice(total - a * z0)
    return NormCheck("inert", ell, a, base, upper,
                     {"h_base": len(base), "h_upper": len(upper)}, residual, tolerance, L.digits)


def verify_norm_tower(param: Parametrization, D_K: int, p: int, tolerance="1e-6") -> NormCheck:
    """Points of conductor p^2 above a conductor-p point sum to a_p z_p - z_1 modulo L."""
    _inert_setup(param, D_K, p)
    L = param.lattice
    N = L.curve.conductor
    a = param.table.ap(p)
    with mpmath.workdps(L.digits + GUARD_DIGITS):
        tolerance = mpf(tolerance)
        tol = mpf(10) ** (-(L.digits + 4))
        (f1,) = heegner_taus(N, D_K)
        mid = heegner_taus(N, p * p * D_K)
        top = heegner_taus(N, p**4 * D_K)
        fp = mid[0]
        above = [f for f in top if extend_class(f.klass, p) == fp.klass]
        z1 = param.z(f1.tau, tol)
        zp = param.z(fp.tau, tol)
        total = mpmath.fsum(param.z(f.tau, tol) for f in above)
        residual = L.distance_to_lattice(total - (a * zp - z1))
    counts = {"h_1": 1, "h_p": len(mid), "h_p2": len(top), "above_base": len(above)}
    return NormCheck("tower", p, a, [f1, fp], above, counts, residual, tolerance, L.digits)


def make_parametrization(table: ApTable, digits: int = 30) -> Parametrization:
    return Parametrization(table, period_lattice(table.curve, digits))
