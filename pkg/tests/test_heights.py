import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from modheight import heights, lfunc
from modheight.heights import AT_MINUS_ONE, AT_TWO, HeightResult
from modheight.numberfield import FieldSpecError, NumberFieldData, ParityError, RamificationSet, parse_field
from modheight.verify import ram_sets

Q = NumberFieldData()
F5 = parse_field("Q(sqrt 5)")
F2 = parse_field("Q(sqrt 2)")


def ram(F, text):
    return RamificationSet.parse(F, text)


def zeta_ratio_at_minus1_glaisher():
    mpmath.mp.dps = 30
    # zeta'(-1) = 1/12 - log A and zeta(-1) = -1/12
    return float((mpmath.mpf(1) / 12 - mpmath.log(mpmath.glaisher)) / (-mpmath.mpf(1) / 12))


def test_bost_kuhn():
    h = heights.modular_height(Q, ram(Q, ""))
    assert h.route == AT_MINUS_ONE
    assert h.value == pytest.approx(-zeta_ratio_at_minus1_glaisher() - 0.5, abs=1e-8)
    assert h.value == pytest.approx(-2.4850537, abs=1e-7)


def test_q_two_three():
    h = heights.modular_height(Q, ram(Q, "2,3"))
    expected = -zeta_ratio_at_minus1_glaisher() - 0.5 + 1.25 * math.log(2) + math.log(3)
    assert h.value == pytest.approx(expected, abs=1e-9)
    assert h.breakdown["local 2"] == pytest.approx(1.25 * math.log(2), abs=1e-15)


def test_breakdown_sums_to_value():
    for F, text in [(Q, "2,3"), (F5, "2"), (F2, "3,5,7:split1")]:
        for fn in (heights.modular_height, heights.modular_height_via_s2):
            h = fn(F, ram(F, text))
            assert abs(math.fsum(h.breakdown.values()) - h.value) <= 1e-12


def test_height_result_invariant():
    with pytest.raises(ArithmeticError):
        HeightResult(1.0, {"a": 0.5}, AT_TWO)
    with pytest.raises(ValueError):
        HeightResult(0.0, {}, "AtThree")
    h = heights.modular_height(F5, ram(F5, "2"))
    assert HeightResult.from_dict(h.to_dict()) == h


@pytest.mark.parametrize("F", [Q, F2, F5], ids=str)
def test_dual_route(F):
    for R in ram_sets(F, (2, 3, 5, 7, 11, 13), 3):
        a = heights.modular_height(F, R)
        b = heights.modular_height_via_s2(F, R)
        assert b.route == AT_TWO
        assert abs(a.value - b.value) < 1e-8


def test_quadratic_height_against_hurwitz_oracle():
    # independent route: zeta_F'/zeta_F(-1) straight from mpmath's Hurwitz zeta
    mpmath.mp.dps = 30
    chi = {1: 1, 2: -1, 3: -1, 4: 1}
    L = sum(c * mpmath.zeta(-1, mpmath.mpf(a) / 5) for a, c in chi.items()) * 5
    dL = sum(c * mpmath.zeta(-1, mpmath.mpf(a) / 5, 1) for a, c in chi.items()) * 5 - mpmath.log(5) * L
    ratio = float(mpmath.zeta(-1, 1, 1) / mpmath.zeta(-1) + dL / L)
    h = heights.modular_height(F5, ram(F5, "2"))
    assert h.value == pytest.approx(-ratio - 1 + Fraction(11, 12) * 2 * math.log(2), abs=1e-9)


def test_parity_errors():
    with pytest.raises(ParityError):
        ram(Q, "2")
    with pytest.raises(ParityError):
        ram(F5, "")


def test_ramification_field_mismatch():
    with pytest.raises(FieldSpecError):
        heights.modular_height(F5, ram(Q, "2,3"))


def test_vigneras_examples():
    assert heights.vigneras_degree(Q, ram(Q, "2,3"), 1) == Fraction(1, 3)
    assert heights.vigneras_degree(Q, ram(Q, "")) == Fraction(1, 6)
    assert heights.vigneras_degree(F5, ram(F5, "2")) == Fraction(1, 10)
    assert heights.vigneras_degree(F2, ram(F2, "3")) == Fraction(2, 3)
    assert heights.vigneras_degree(F5, ram(F5, "2"), 3) == Fraction(3, 10)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([Q, F2, F5, parse_field("Q(sqrt 13)"), parse_field("Q(sqrt 3)")]), st.integers(1, 4), st.data())
def test_vigneras_positive_and_exact(F, h, data):
    options = list(ram_sets(F, (2, 3, 5, 7), 3))
    R = data.draw(st.sampled_from(options))
    deg = heights.vigneras_degree(F, R, h)
    assert isinstance(deg, Fraction) and deg > 0
    manual = 4 * h * Fraction(1, (-2) ** F.degree) * lfunc.zeta_value_at_minus1(F)
    for P in R.places:
        manual *= P.norm - 1
    assert deg == manual


def test_cm_height_examples():
    r4 = lfunc.quadratic_l_log_deriv_at0(-4)
    assert heights.cm_height(Q, r4, 1, 4) == pytest.approx(-1.4763360, abs=1e-7)
    assert heights.cm_height(Q, 0.0, 7, 7) == 0.0
    r3 = lfunc.quadratic_l_log_deriv_at0(-3)
    assert heights.cm_height(Q, r3, 1, 3) == pytest.approx(-r3.value - 0.5 * math.log(3), abs=1e-15)
    with pytest.raises(FieldSpecError):
        heights.cm_height(Q, r4, 0, 4)


def test_cm_height_against_log_gamma_route():
    # L'/L(0, chi_-4) = 2 log(Gamma(1/4) / Gamma(3/4)) - log 4
    mpmath.mp.dps = 30
    ratio = float(2 * mpmath.log(mpmath.gamma(0.25) / mpmath.gamma(0.75)) - mpmath.log(4))
    direct = heights.cm_height(Q, lfunc.quadratic_l_log_deriv_at0(-4), 1, 4)
    assert direct == pytest.approx(-ratio - 0.5 * math.log(4), abs=1e-12)


def test_kry():
    R = ram(Q, "2,3")
    assert heights.kry_height(R) == pytest.approx(-1.4158872, abs=1e-7)
    for text in ("2,5", "3,13", "2,3,5,7"):
        R = ram(Q, text)
        assert abs(heights.kry_height(R) - (heights.modular_height(Q, R).value - 0.5 * math.log(R.d_B))) < 1e-9
    with pytest.raises(FieldSpecError):
        heights.kry_height(ram(F5, "2"))
    with pytest.raises(FieldSpecError):
        heights.kry_height(ram(Q, ""))


@given(st.sampled_from([2, 3, 5, 7, 11, 13, 17]))
def test_kry_local_coefficients_differ_by_half(p):
    from modheight.local_nonarch import local_term_coefficient

    assert local_term_coefficient(p) - heights.kry_local_coefficient(p) == Fraction(1, 2)
