import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from modheight import lfunc
from modheight.lfunc import LSeriesValue, PrecisionError
from modheight.numberfield import NumberFieldData, is_fundamental_discriminant, kronecker_symbol, parse_field

mpmath.mp.dps = 30

Q = NumberFieldData()
FIELDS = [Q, parse_field("Q(sqrt 2)"), parse_field("Q(sqrt 5)"), parse_field("Q(sqrt 13)"), parse_field("Q(sqrt 3)")]


def mp_l(s, d, derivative=0):
    """L(s, chi_d) (or its s-derivative) through mpmath's Hurwitz zeta."""
    if d == 1:
        return mpmath.zeta(s, 1, derivative)
    q = abs(d)
    s = mpmath.mpf(s)
    chars = [(mpmath.mpf(a) / q, kronecker_symbol(d, a)) for a in range(1, q + 1)]
    value = sum(c * mpmath.zeta(s, x) for x, c in chars if c)
    if derivative == 0:
        return q ** (-s) * value
    dvalue = sum(c * mpmath.zeta(s, x, 1) for x, c in chars if c)
    return q ** (-s) * (dvalue - mpmath.log(q) * value)


def mp_dedekind_log_deriv(F, s):
    parts = [1] if F.is_rational else [1, F.discriminant]
    return sum(mp_l(s, d, 1) / mp_l(s, d) for d in parts)


def test_bernoulli_numbers():
    assert [lfunc.bernoulli(n) for n in range(7)] == [1, Fraction(-1, 2), Fraction(1, 6), 0, Fraction(-1, 30), 0, Fraction(1, 42)]


@pytest.mark.parametrize("s, a", [(2.0, 1.0), (2.0, 0.25), (3.5, 0.7), (-1.0, 0.5), (0.5, 0.3)])
def test_hurwitz_against_mpmath(s, a):
    v, d, err = lfunc.hurwitz_zeta(s, a, 1e-12)
    assert err <= 1e-12
    assert abs(v - float(mpmath.zeta(s, a))) < 1e-12
    assert abs(d - float(mpmath.zeta(s, a, 1))) < 1e-11


def test_series_tail_soundness():
    # halving the starting cutoff must not move the value by more than the declared precision
    for s, a in [(2.0, 0.2), (2.0, 1.0)]:
        v1, d1, _ = lfunc.hurwitz_zeta(s, a, 1e-10, start=64)
        v2, d2, _ = lfunc.hurwitz_zeta(s, a, 1e-10, start=32)
        assert abs(v1 - v2) <= 1e-10 and abs(d1 - d2) <= 1e-10


def test_precision_error():
    with pytest.raises(PrecisionError):
        lfunc.hurwitz_zeta(2.0, 0.5, 1e-30)
    with pytest.raises(ValueError):
        lfunc.hurwitz_zeta(2.0, 0.5, 0.0)


def test_zeta_log_deriv_at2_rational():
    oracle = float(mpmath.zeta(2, 1, 1) / mpmath.zeta(2))
    assert oracle == pytest.approx(-0.5699609930945329, abs=1e-15)
    assert abs(lfunc.zeta_log_deriv_at2(Q).value - oracle) < 1e-10


def test_zeta_log_deriv_at2_von_mangoldt_crosscheck():
    # -sum Lambda(n)/n^2 with an explicit tail bound
    X = 200_000
    sieve = bytearray([1]) * (X + 1)
    sieve[0:2] = b"\x00\x00"
    total = 0.0
    for p in range(2, X + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
            pk = p
            while pk <= X:
                total -= math.log(p) / pk**2
                pk *= p
    tail = 2 * (math.log(X) + 1) / X
    assert abs(lfunc.zeta_log_deriv_at2(Q).value - total) < tail


@pytest.mark.parametrize("F", FIELDS, ids=str)
def test_log_deriv_at2_against_mpmath(F):
    assert abs(lfunc.zeta_log_deriv_at2(F, 1e-10).value - float(mp_dedekind_log_deriv(F, 2))) < 1e-10


@pytest.mark.parametrize("F", FIELDS, ids=str)
def test_log_deriv_at_minus1_against_hurwitz_oracle(F):
    # direct evaluation at s = -1, never touching the functional equation
    assert abs(lfunc.zeta_log_deriv_at_minus1(F, 1e-10).value - float(mp_dedekind_log_deriv(F, -1))) < 1e-9


def test_known_values():
    assert lfunc.zeta_log_deriv_at_minus1(Q).value == pytest.approx(1.9850537244054112, abs=1e-10)
    F5 = parse_field("Q(sqrt 5)")
    assert lfunc.zeta_log_deriv_at2(F5).value == pytest.approx(-0.28299010, abs=1e-8)
    assert lfunc.zeta_log_deriv_at_minus1(F5).value == pytest.approx(1.50373765, abs=1e-8)


def test_glaisher_route():
    logA = mpmath.log(mpmath.glaisher)
    # zeta'(-1) = 1/12 - log A
    assert abs(lfunc.riemann_zeta_deriv_at_minus1() - float(mpmath.mpf(1) / 12 - logA)) < 1e-11


@pytest.mark.parametrize("F", FIELDS, ids=str)
def test_functional_equation_round_trip(F):
    prec = 1e-10
    at2 = lfunc.zeta_log_deriv_at2(F, prec).value
    back = lfunc.completed_log_deriv_minus1_to_2(lfunc.zeta_log_deriv_at_minus1(F, prec).value, F)
    assert abs(back - at2) <= 2 * prec


@given(st.floats(-5, 5), st.sampled_from(FIELDS))
def test_functional_equation_is_an_involution(x, F):
    y = lfunc.completed_log_deriv_2_to_minus1(x, F)
    assert lfunc.completed_log_deriv_minus1_to_2(y, F) == pytest.approx(x, abs=1e-12)


def test_gamma_factor_constants():
    assert lfunc.gamma_factor_log_deriv(2.0, 2) == pytest.approx(-(lfunc.EULER_GAMMA + math.log(math.pi)), abs=1e-14)
    at_m1 = float(mpmath.digamma(-0.5)) / 2 - math.log(math.pi) / 2
    assert at_m1 == pytest.approx(-0.5 * (lfunc.EULER_GAMMA + math.log(4 * math.pi)) + 1, abs=1e-14)
    assert lfunc.gamma_factor_log_deriv(-1.0, 1) == pytest.approx(at_m1, abs=1e-14)


@pytest.mark.parametrize("F, value", [(Q, Fraction(-1, 12)), (parse_field("Q(sqrt 5)"), Fraction(1, 30)),
                                      (parse_field("Q(sqrt 2)"), Fraction(1, 12)), (parse_field("Q(sqrt 13)"), Fraction(1, 6))])
def test_zeta_value_at_minus1(F, value):
    assert lfunc.zeta_value_at_minus1(F) == value


def test_l_at_minus1_random_discriminants():
    rng = random.Random(1)
    pool = [d for d in range(-200, 201) if d != 1 and is_fundamental_discriminant(d)]
    for d in rng.sample(pool, 20):
        exact = lfunc.l_value_at_minus1(d)
        assert isinstance(exact, Fraction)
        assert abs(float(mp_l(-1, d)) - float(exact)) < 1e-10, d


def test_l_value_at_0():
    assert lfunc.l_value_at_0(-4) == Fraction(1, 2)
    assert lfunc.l_value_at_0(-3) == Fraction(1, 3)
    with pytest.raises(ValueError):
        lfunc.l_value_at_0(-12 * 4)


def test_quadratic_log_deriv_at0():
    r = lfunc.quadratic_l_log_deriv_at0(-4)
    assert r.source == "Computed"
    assert r.value == pytest.approx(0.7831887854136739, abs=1e-12)
    for d in (-3, -4, -7, -8, -15, -20):
        assert abs(lfunc.quadratic_l_log_deriv_at0(d).value - float(mp_l(0, d, 1) / mp_l(0, d))) < 1e-10
    with pytest.raises(ValueError):
        lfunc.quadratic_l_log_deriv_at0(5)


def test_s1_reconversion():
    ratio0 = lfunc.quadratic_l_log_deriv_at0(-4).value
    v, dv, _ = lfunc.dirichlet_l(1.0, -4, 1e-12)
    assert v == pytest.approx(math.pi / 4, abs=1e-12)
    assert abs(lfunc.odd_l_log_deriv_at1_from_at0(-4, ratio0) - dv / v) < 1e-10


def test_lseries_value():
    s = LSeriesValue.supplied(0.25)
    assert float(s) == 0.25 and s.source == "Supplied"
    with pytest.raises(ValueError):
        LSeriesValue(1.0, 0.0, "Guessed")
