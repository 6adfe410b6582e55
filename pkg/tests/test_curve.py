import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rankwitness.arith import QuadField, primes_up_to
from rankwitness.curve import (
    ApTable,
    CurveQ,
    Point,
    add,
    an_list,
    count_ap,
    hasse_ok,
    hecke_an,
    multiplicative_ap,
    nontorsion_certificate,
    on_curve,
    scalar_mul,
)
from rankwitness.errors import BadReductionPrime, InputError, MissingPrime, NotOnCurve


def brute_force_ap(a, b, p):
    """p + 1 - #E(F_p) by enumerating every (x, y) in F_p^2."""
    xs = np.arange(p, dtype=np.int64)
    rhs = (xs * xs % p * xs + a * xs + b) % p
    lhs = xs * xs % p
    count = int((lhs[:, None] == rhs[None, :]).sum()) + 1
    return p + 1 - count


def test_curve_invariants(e37):
    assert e37.disc == 151552 == 2**12 * 37
    assert e37.j_invariant == Fraction(110592, 37)
    assert e37.bad_primes == [2, 37]


@pytest.mark.parametrize("a, b, N", [(0, 0, 1), (-3, 2, 1), (-16, 16, 11)])
def test_bad_curves_rejected(a, b, N):
    with pytest.raises(InputError):
        CurveQ(a, b, N)


def test_group_law_examples(e37):
    P = e37.point(0, 4)
    assert P + e37.O == P and e37.O + P == P
    assert add(P, e37.point(0, -4)).is_zero
    assert 2 * P == e37.point(4, 4)
    assert scalar_mul(0, P).is_zero
    assert scalar_mul(1, P) == P


def test_off_curve_point_rejected(e37):
    with pytest.raises(NotOnCurve):
        e37.point(1, 2)


@settings(max_examples=100, deadline=None)
@given(st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6))
def test_associativity(e37, i, j, k):
    G = e37.point(0, 4)
    P, Q, R = i * G, j * G, k * G
    assert (P + Q) + R == P + (Q + R)
    assert on_curve((P + Q) + R)


@settings(max_examples=50, deadline=None)
@given(st.integers(-8, 8), st.integers(-8, 8))
def test_scalar_mul_distributes(e37, m, n):
    G = e37.point(0, 4)
    assert (m + n) * G == m * G + n * G


def test_group_law_over_quadratic_field(e37):
    K = QuadField(-7)
    P = Point(e37, K(Fraction(-97087, 21904)), K(0, Fraction(1, 3241792)))
    # the witness point for m = -656 lives over Q(sqrt(-1688990044607)), not Q(sqrt -7)
    assert not on_curve(P)
    L = QuadField(-1688990044607)
    P = Point(e37, L(Fraction(-97087, 21904)), L(0, Fraction(1, 3241792)))
    assert on_curve(P) and on_curve(3 * P)


@pytest.mark.parametrize("p, ap", [(3, -3), (5, -2)])
def test_count_ap_examples(e37, p, ap):
    assert count_ap(e37, p) == ap


def test_count_ap_matches_brute_force(e37):
    for p in primes_up_to(499):
        if e37.disc % p == 0:
            continue
        ap = count_ap(e37, p)
        assert ap == brute_force_ap(e37.a, e37.b, p), p
        assert ap * ap < 4 * p


@pytest.mark.parametrize("p", [2, 37, 4])
def test_count_ap_rejects(e37, p):
    with pytest.raises(BadReductionPrime):
        count_ap(e37, p)


def test_multiplicative_prime():
    E = CurveQ(-13392, -1080432, 11)
    assert multiplicative_ap(E, 11) == 1
    with pytest.raises(BadReductionPrime):
        multiplicative_ap(E, 13)


def test_table_and_overrides(e37, tmp_path):
    t = ApTable.build(e37, 50, {2: -2})
    assert t.ap(2) == -2 and t.ap(37) == -1
    assert all(hasse_ok(p, a) for p, a in t.merged().items())
    with pytest.raises(MissingPrime):
        t.ap(53)
    with pytest.raises(InputError):
        ApTable(e37, {}, {37: 1})
    with pytest.raises(InputError):
        ApTable(e37, {}, {2: 3})
    path = tmp_path / "ap.csv"
    t.to_csv(path)
    assert path.read_text().splitlines()[:3] == ["p,ap", "2,-2", "3,-3"]
    assert ApTable.from_csv(e37, path, {2: -2}).merged() == t.merged()
    with pytest.raises(InputError):
        ApTable.from_csv(e37, path, {2: 1})


def test_csv_must_ascend(e37, tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("p,ap\n5,-2\n3,-3\n")
    with pytest.raises(InputError):
        ApTable.from_csv(e37, path)


def test_hecke_examples(table37):
    assert hecke_an(table37, 1) == 1
    assert hecke_an(table37, 9) == 6
    assert hecke_an(table37, 15) == 6
    assert an_list(table37, 19)[1:] == [1, -2, -3, 2, -2, 6, -1, 0, 6, 4, -5, -6, -2, 2, 6, -4, 0, -12, 0]


@pytest.fixture(scope="module")
def big_table(e37):
    return ApTable.build(e37, 10**4, {2: -2})


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 10**4), st.integers(1, 10**4))
def test_hecke_multiplicative(big_table, n, m):
    if math.gcd(n, m) == 1:
        assert hecke_an(big_table, n * m) == hecke_an(big_table, n) * hecke_an(big_table, m)


def test_an_list_matches_hecke_an(table37):
    an = an_list(table37, 200)
    assert all(an[n] == hecke_an(table37, n) for n in range(1, 201))


def test_nontorsion_and_torsion(e37):
    assert nontorsion_certificate(e37.point(0, 4)).nontorsion
    E = CurveQ(-1, 0, 32)
    T = E.point(1, 0)
    cert = nontorsion_certificate(T)
    assert not cert.nontorsion and cert.order == 2
    with pytest.raises(InputError):
        nontorsion_certificate(e37.O)


def test_complex_points_use_tolerance(e37):
    import mpmath

    with mpmath.workdps(30):
        P = Point(e37, mpmath.mpc(0), mpmath.mpc(4))
        Q = 2 * P
        assert abs(Q.x - 4) < 1e-25 and abs(Q.y - 4) < 1e-25
