"""Complex uniformization C/L -> E(C), x = P(z), y = P'(z)/2.

For y^2 = x^3 + a x + b the lattice L has g2(L) = -4a and g3(L) = -4b.
Periods come from the arithmetic-geometric mean over the roots of the cubic
and are validated by rebuilding g2, g3 from Eisenstein q-series. The
Weierstrass functions are evaluated by their q-expansions, which converge
geometrically once the basis is reduced.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import mpmath
from mpmath import mpc, mpf

from .curve import CurveQ, Point
from .errors import PrecisionUnreachable

GUARD_DIGITS = 12


def agm(a, b):
    """Complex AGM with the optimal branch of the square root at every step."""
    a, b = mpmath.mpmathify(a), mpmath.mpmathify(b)
    tol = mpf(10) ** (-mpmath.mp.dps)
    for _ in range(10 * mpmath.mp.prec):
        if abs(a - b) <= tol * abs(a):
            return a
        a1 = (a + b) / 2
        b1 = mpmath.sqrt(a * b)
        if abs(a1 - b1) > abs(a1 + b1):
            b1 = -b1
        a, b = a1, b1
    raise PrecisionUnreachable("AGM did not converge")


def _sigma(n: int, k: int) -> int:
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


def _reduce_basis(w1, w2):
    """Gauss-reduce a lattice basis and orient it so Im(w2/w1) > 0."""
    for _ in range(1000):
        if abs(w2) < abs(w1):
            w1, w2 = w2, w1
        m = mpmath.nint(mpmath.re(w2 / w1))
        if m == 0:
            break
        w2 = w2 - m * w1
    if mpmath.im(w2 / w1) < 0:
        w2 = -w2
    return w1, w2


def eisenstein_g2_g3(w1, w2, tol=None):
    """(g2, g3) of the lattice Z w1 + Z w2 from its q-expansions."""
    w1, w2 = _reduce_basis(w1, w2)
    tau = w2 / w1
    q = mpmath.exp(2j * mpmath.pi * tau)
    tol = tol or mpf(10) ** (-mpmath.mp.dps)
    s3 = s5 = mpf(0)
    n = 1
    qn = q
    while True:
        s3 += _sigma(n, 3) * qn
        s5 += _sigma(n, 5) * qn
        if n**6 * abs(qn) < tol:
            break
        n += 1
        qn *= q
    c = 2 * mpmath.pi / w1
    return c**4 / 12 * (1 + 240 * s3), c**6 / 216 * (1 - 504 * s5)


@dataclass(frozen=True)
class PeriodLattice:
    """Basis (w1, w2) with Im(w2/w1) > 0; w1 is the least positive real period."""

    curve: CurveQ
    w1: mpc
    w2: mpc
    digits: int

    @property
    def tau(self):
        return self.w2 / self.w1

    def residual(self):
        with mpmath.workdps(self.digits + GUARD_DIGITS):
            g2, g3 = eisenstein_g2_g3(self.w1, self.w2)
            return max(abs(g2 + 4 * self.curve.a), abs(g3 + 4 * self.curve.b))

    def coords(self, z):
        """Real coordinates (s, t) with z = s*w1 + t*w2."""
        # solve the 2x2 real system
        a, b = mpmath.re(self.w1), mpmath.re(self.w2)
        c, d = mpmath.im(self.w1), mpmath.im(self.w2)
        det = a * d - b * c
        x, y = mpmath.re(z), mpmath.im(z)
        return (d * x - b * y) / det, (-c * x + a * y) / det

    def reduce(self, z):
        """Representative of z in the parallelogram {s w1 + t w2 : -1/2 <= s, t < 1/2}."""
        s, t = self.coords(z)
        return z - mpmath.nint(s) * self.w1 - mpmath.nint(t) * self.w2

    def distance_to_lattice(self, z):
        r = self.reduce(z)
        best = abs(r)
        for i, j in itertools.product((-1, 0, 1), repeat=2):
            best = min(best, abs(r + i * self.w1 + j * self.w2))
        return best

    def scaled(self, u) -> "PeriodLattice":
        """The lattice u*L (not a lattice of this curve's model unless u = 1)."""
        return PeriodLattice(self.curve, self.w1 * u, self.w2 * u, self.digits)


def period_lattice(curve: CurveQ, digits: int = 30) -> PeriodLattice:
    with mpmath.workdps(digits + GUARD_DIGITS):
        roots = mpmath.polyroots([1, 0, curve.a, curve.b], maxsteps=200, extraprec=4 * digits)
        cands = []
        for ei, ej, ek in itertools.permutations(roots):
            w = mpmath.pi / agm(mpmath.sqrt(ei - ek), mpmath.sqrt(ei - ej))
            if all(abs(w - c) > abs(w) * mpf(10) ** (-digits) for c in cands):
                cands.append(w)
        target = mpf(10) ** (-digits + 5)
        scale = 1 + abs(curve.a) + abs(curve.b)
        found = None
        for wa, wb in itertools.combinations(cands, 2):
            if abs(mpmath.im(wb / wa)) < mpf(10) ** (-digits // 2):
                continue
            g2, g3 = eisenstein_g2_g3(wa, wb)
            if max(abs(g2 + 4 * curve.a), abs(g3 + 4 * curve.b)) < target * scale:
                found = (wa, wb)
                break
        if found is None:
            raise PrecisionUnreachable(f"no period pair reproduces g2, g3 for {curve}")
        w1, w2 = _real_basis(*found, digits)
        return PeriodLattice(curve, mpc(w1), mpc(w2), digits)


def _real_basis(wa, wb, digits):
    """Rewrite the lattice basis as (least positive real period, partner)."""
    wa, wb = _reduce_basis(wa, wb)
    tol = mpf(10) ** (-digits // 2) * (abs(wa) + abs(wb))
    vecs = [m * wa + n * wb for m in range(-4, 5) for n in range(-4, 5) if (m, n) != (0, 0)]
    reals = [v for v in vecs if abs(mpmath.im(v)) < tol and mpmath.re(v) > 0]
    covol = abs(mpmath.im(mpmath.conj(wa) * wb))
    if not reals:
        return wa, wb
    w1 = mpmath.re(min(reals, key=lambda v: mpmath.re(v)))
    partners = [v for v in vecs if mpmath.im(v) > tol and abs(abs(w1 * mpmath.im(v)) - covol) < tol * abs(w1)]
    w2 = min(partners, key=lambda v: (mpmath.im(v), abs(mpmath.re(v))))
    # canonical real part in (-w1/2, w1/2]
    w2 = w2 - mpmath.nint(mpmath.re(w2) / w1) * w1
    if abs(mpmath.re(w2) + w1 / 2) < tol:
        w2 += w1
    return w1, w2


def _terms(x):
    return x / (1 - x) ** 2, x * (1 + x) / (1 - x) ** 3


def weierstrass_p(lattice: PeriodLattice, z):
    """(P(z), P'(z)) for the lattice, via q-expansions in a reduced basis."""
    w1, w2 = _reduce_basis(lattice.w1, lattice.w2)
    tau = w2 / w1
    s = z / w1
    # move s into the strip |Im(s)| <= Im(tau)/2
    k = mpmath.nint(mpmath.im(s) / mpmath.im(tau))
    s = s - k * tau
    s = s - mpmath.nint(mpmath.re(s))
    two_pi_i = 2j * mpmath.pi
    q = mpmath.exp(two_pi_i * tau)
    u = mpmath.exp(two_pi_i * s)
    tol = mpf(10) ** (-mpmath.mp.dps)
    p_sum, dp_sum = _terms(u)
    const = mpf(0)
    n = 1
    qn = q
    while True:
        a1, b1 = _terms(qn * u)
        a2, b2 = _terms(qn / u)
        p_sum += a1 + a2
        dp_sum += b1 - b2
        const += qn / (1 - qn) ** 2
        if abs(qn) * max(abs(u), 1 / abs(u)) < tol * 1e-3 and n > 2:
            break
        n += 1
        qn *= q
    P = (two_pi_i / w1) ** 2 * (mpf(1) / 12 + p_sum - 2 * const)
    dP = (two_pi_i / w1) ** 3 * dp_sum
    return P, dP


def elliptic_exp(lattice: PeriodLattice, z, zero_tol=None) -> Point:
    E = lattice.curve
    zero_tol = zero_tol or mpf(10) ** (-lattice.digits // 2)
    with mpmath.workdps(lattice.digits + GUARD_DIGITS):
        if lattice.distance_to_lattice(z) < zero_tol:
            return E.O
        P, dP = weierstrass_p(lattice, lattice.reduce(z))
        return Point(E, P, dP / 2)


def elliptic_log(lattice: PeriodLattice, x, y):
    """z with elliptic_exp(z) = (x, y): Carlson R_F start, Newton polish."""
    E = lattice.curve
    with mpmath.workdps(lattice.digits + GUARD_DIGITS):
        x, y = mpmath.mpmathify(x), mpmath.mpmathify(y)
        roots = mpmath.polyroots([1, 0, E.a, E.b], maxsteps=200, extraprec=4 * lattice.digits)
        z = mpmath.elliprf(*(x - e for e in roots))
        best = None
        for cand in (z, -z):
            for _ in range(60):
                P, dP = weierstrass_p(lattice, cand)
                step = (P - x) / dP
                cand -= step
                if abs(step) < mpf(10) ** (-(lattice.digits + GUARD_DIGITS - 2)):
                    break
            P, dP = weierstrass_p(lattice, cand)
            err = abs(P - x) + abs(dP / 2 - y)
            if best is None or err < best[0]:
                best = (err, cand)
        if best[0] > mpf(10) ** (-lattice.digits // 2) * (1 + abs(x) + abs(y)):
            raise PrecisionUnreachable(f"elliptic log did not converge (err {mpmath.nstr(best[0], 5)})")
        return lattice.reduce(best[1])


def real_period_quadrature(curve: CurveQ, digits: int = 30):
    """Independent check: the least real period as the integral of dx/y from the largest real root."""
    with mpmath.workdps(digits + GUARD_DIGITS):
        roots = mpmath.polyroots([1, 0, curve.a, curve.b], maxsteps=200, extraprec=4 * digits)
        e = max(mpmath.re(r) for r in roots if abs(mpmath.im(r)) < mpf(10) ** (-digits))
        # t = e + s^2 and t^3 + a t + b = (t - e)(t^2 + e t + e^2 + a): no endpoint singularity
        def g(s):
            t = e + s * s
            return 2 / mpmath.sqrt(t * t + e * t + e * e + curve.a)

        return mpmath.quad(g, [0, 1, mpmath.inf])
