import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from modheight.numberfield import (
    FieldSpecError,
    FinitePlace,
    NumberFieldData,
    ParityError,
    RamificationSet,
    is_fundamental_discriminant,
    is_prime,
    kronecker_symbol,
    local_different_abs,
    parse_field,
    places_above,
    render_field,
    select_place,
)

SMALL_PRIMES = [p for p in range(2, 60) if all(p % q for q in range(2, p))]
SQUAREFREE = [D for D in range(2, 80) if all(D % (q * q) for q in range(2, 9))]


def test_is_prime_matches_trial_division():
    assert [n for n in range(60) if is_prime(n)] == SMALL_PRIMES


def _squarefree(n):
    n = abs(n)
    return n > 0 and all(n % (q * q) for q in range(2, int(n**0.5) + 1))


def _fundamental_oracle(d):
    if d == 1 or d == 0:
        return None  # convention-dependent, checked separately
    if d % 4 == 1:
        return _squarefree(d)
    return d % 4 == 0 and (d // 4) % 4 in (2, 3) and _squarefree(d // 4)


@given(st.integers(-400, 400))
def test_fundamental_discriminant_definition(d):
    expected = _fundamental_oracle(d)
    if expected is not None:
        assert is_fundamental_discriminant(d) == expected


@given(st.integers(-200, 200), st.sampled_from(SMALL_PRIMES[1:]))
def test_kronecker_is_legendre_for_odd_primes(a, p):
    # Euler's criterion as oracle
    e = pow(a % p, (p - 1) // 2, p)
    expected = 0 if a % p == 0 else (1 if e == 1 else -1)
    assert kronecker_symbol(a, p) == expected


@pytest.mark.parametrize("d, expected", [(5, -1), (-3, -1), (-7, 1), (-15, 1), (8, 0), (17, 1), (21, -1)])
def test_kronecker_at_two(d, expected):
    assert kronecker_symbol(d, 2) == expected


@given(st.sampled_from(SQUAREFREE), st.integers(1, 5))
def test_field_parse_render_roundtrip(D, h):
    F = NumberFieldData(D, h)
    G = parse_field(render_field(F), h)
    assert G == F and G.degree == 2


def test_discriminant():
    assert parse_field("Q").discriminant == 1
    assert parse_field("Q(sqrt 5)").discriminant == 5
    assert parse_field("Q(sqrt 2)").discriminant == 8
    assert parse_field("Q(sqrt 3)").discriminant == 12


@pytest.mark.parametrize("bad", ["Q(sqrt 4)", "Q(sqrt -1)", "R", "Q(sqrt 1)", "Q(sqrt x)"])
def test_malformed_field(bad):
    with pytest.raises(FieldSpecError):
        parse_field(bad)


def _roots_mod_p(D, p):
    if p == 2:
        # splitting at 2 follows d_F mod 8
        return None
    return sum(1 for x in range(p) if (x * x - D) % p == 0)


@given(st.sampled_from(SQUAREFREE), st.sampled_from(SMALL_PRIMES))
def test_place_decomposition_matches_brute_force(D, p):
    F = NumberFieldData(D)
    places = places_above(F, p)
    assert sum(P.e * P.f for P in places) == 2
    roots = _roots_mod_p(D, p)
    if roots is None:
        d = F.discriminant
        kind = "ram" if d % 2 == 0 else ("split" if d % 8 == 1 else "inert")
    else:
        kind = "ram" if D % p == 0 else ("split" if roots == 2 else "inert")
    kinds = {P.kind for P in places}
    assert kinds == ({"split1", "split2"} if kind == "split" else {kind})


def test_log_norm_uses_residue_degree():
    P = select_place(parse_field("Q(sqrt 5)"), "2")
    assert P.norm == 4 and P.f == 2
    assert P.log_norm == 2 * math.log(2)


def test_select_place_requires_selector_for_split_primes():
    F = parse_field("Q(sqrt 5)")
    with pytest.raises(FieldSpecError, match="split"):
        select_place(F, "11")
    assert select_place(F, "11:split2").label == "split2"
    with pytest.raises(FieldSpecError):
        select_place(F, "2:ram")


@pytest.mark.parametrize("field, text, ok", [
    ("Q", "", True), ("Q", "2,3", True), ("Q", "2", False), ("Q(sqrt 5)", "2", True),
    ("Q(sqrt 5)", "", False), ("Q(sqrt 5)", "11:split1,11:split2,2", True),
])
def test_parity(field, text, ok):
    F = parse_field(field)
    if ok:
        RamificationSet.parse(F, text)
    else:
        with pytest.raises(ParityError):
            RamificationSet.parse(F, text)


def test_duplicate_places_rejected():
    with pytest.raises(ParityError):
        RamificationSet.parse(parse_field("Q(sqrt 5)"), "2,2,3")


def test_d_B_is_product_of_norms():
    F = parse_field("Q(sqrt 5)")
    assert RamificationSet.parse(F, "2,3,5").d_B == 4 * 9 * 5


def test_local_different():
    F = parse_field("Q(sqrt 2)")
    (P,) = places_above(F, 2)
    assert P.kind == "ram" and P.diff_val == 3
    assert local_different_abs(P) == Fraction(1, 8)
    assert local_different_abs(FinitePlace(3)) == 1
