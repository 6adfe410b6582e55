"""The recurrence p c_{n+1} = a_p c_n - c_{n-1} and why it has no integer
solutions with infinitely many nonzero terms.

Everything runs on exact rationals. When p does not divide a_p, one
characteristic root is a p-adic unit and the other has valuation -1, so once
a term picks up a p in its denominator every later term picks up one more.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .arith import valuation
from .curve import hasse_ok
from .errors import HasseViolation, ZeroSeed


@dataclass(frozen=True)
class RecurrenceState:
    p: int
    a_p: int
    seq: tuple[Fraction, ...]

    def __post_init__(self):
        _check(self.a_p, self.p)
        for i in range(1, len(self.seq) - 1):
            lhs = self.p * self.seq[i + 1]
            if lhs != self.a_p * self.seq[i] - self.seq[i - 1]:
                raise AssertionError(f"recurrence broken at index {i}")

    @property
    def vals(self) -> list[int | None]:
        return valuation_profile(self)


def _check(a_p: int, p: int) -> None:
    if not hasse_ok(p, a_p):
        raise HasseViolation(f"|a_p| = {abs(a_p)} >= 2 sqrt({p})")


def generate(c0: int, c1: int, a_p: int, p: int, steps: int) -> RecurrenceState:
    if c0 == 0:
        raise ZeroSeed("c0 must be nonzero")
    _check(a_p, p)
    seq = [Fraction(c0), Fraction(c1)]
    while len(seq) < steps + 1:
        seq.append((a_p * seq[-1] - seq[-2]) / p)
    return RecurrenceState(p, a_p, tuple(seq[: steps + 1]))


@dataclass(frozen=True)
class Outcome:
    kind: str  # "nonintegral" | "all_zero_tail" | "bound_exhausted"
    index: int


def first_nonintegral(c0: int, c1: int, a_p: int, p: int, bound: int = 200) -> Outcome:
    """Smallest n with c_n not an integer, unless two consecutive zeros come first."""
    if c0 == 0:
        raise ZeroSeed("c0 must be nonzero")
    _check(a_p, p)
    prev, cur = Fraction(c0), Fraction(c1)
    if cur.denominator != 1:
        return Outcome("nonintegral", 1)
    for n in range(2, bound + 1):
        if prev == 0 and cur == 0:
            return Outcome("all_zero_tail", n - 2)
        prev, cur = cur, (a_p * cur - prev) / p
        if cur.denominator != 1:
            return Outcome("nonintegral", n)
    return Outcome("bound_exhausted", bound)


def valuation_profile(state: RecurrenceState) -> list[int | None]:
    return [valuation(c, state.p) for c in state.seq]


@dataclass(frozen=True)
class CharRoots:
    alpha: mpmath.mpc
    beta: mpmath.mpc
    v_alpha: Fraction
    v_beta: Fraction
    supersingular: bool


def char_roots(a_p: int, p: int, digits: int = 30) -> CharRoots:
    """Roots of x^2 - (a_p/p) x + 1/p with their p-adic valuations (Newton polygon)."""
    _check(a_p, p)
    # rational roots would force a_p = +-(p + 1), excluded by Hasse
    assert abs(a_p) != p + 1
    with mpmath.workdps(digits):
        disc = mpmath.mpf(a_p * a_p - 4 * p) / (p * p)
        r = mpmath.sqrt(disc)
        alpha = mpmath.mpc((mpmath.mpf(a_p) / p + r) / 2)
        beta = mpmath.mpc((mpmath.mpf(a_p) / p - r) / 2)
    # Newton polygon of 1 - a_p x + p x^2 through (0, 0), (1, v(a_p)), (2, 1);
    # root valuations are minus the slopes
    if a_p % p:
        va, vb = Fraction(-1), Fraction(0)
    else:
        va = vb = Fraction(-1, 2)
    return CharRoots(alpha, beta, va, vb, a_p % p == 0)


def seed_sweep(table: dict[int, int], seeds: list[tuple[int, int]], bound: int = 40) -> list[dict]:
    """first_nonintegral for every (seed, p) with p not dividing a_p."""
    out = []
    for p, a_p in sorted(table.items()):
        if a_p % p == 0:
            continue
        for c0, c1 in seeds:
            res = first_nonintegral(c0, c1, a_p, p, bound)
            out.append({"p": p, "a_p": a_p, "c0": c0, "c1": c1, "kind": res.kind, "index": res.index})
    return out


def tail_drops(vals: list[int | None]) -> bool:
    """After the first negative valuation each term loses exactly one more power of p."""
    start = next((i for i, v in enumerate(vals) if v is not None and v < 0), None)
    if start is None:
        return True
    for i in range(start, len(vals) - 1):
        if vals[i + 1] is None or vals[i + 1] != vals[i] - 1:
            return False
    return True


def supersingular_tail(vals: list[int | None]) -> bool:
    """p | a_p: after the first negative valuation, valuations fall by 1 every two steps."""
    start = next((i for i, v in enumerate(vals) if v is not None and v < 0), None)
    if start is None:
        return True
    for i in range(start, len(vals) - 2):
        if vals[i] is not None and vals[i + 2] != vals[i] - 1:
            return False
    return True
