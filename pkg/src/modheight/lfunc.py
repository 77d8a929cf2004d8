"""Zeta and quadratic Dirichlet L-functions for fields of degree at most two.

Values at s = 2 come from Hurwitz sums with an Euler-Maclaurin tail; values at
s = -1 are obtained only through the completed functional equation.  Exact
special values use generalized Bernoulli numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .numberfield import NumberFieldData, is_fundamental_discriminant, kronecker_symbol

__all__ = [
    "PrecisionError",
    "LSeriesValue",
    "EULER_GAMMA",
    "bernoulli",
    "hurwitz_zeta",
    "dirichlet_l",
    "zeta_log_deriv_at2",
    "zeta_log_deriv_at_minus1",
    "completed_log_deriv_2_to_minus1",
    "completed_log_deriv_minus1_to_2",
    "gamma_factor_log_deriv",
    "zeta_value_at_minus1",
    "l_value_at_minus1",
    "l_value_at_0",
    "quadratic_l_log_deriv_at0",
    "odd_l_log_deriv_at1_from_at0",
    "riemann_zeta_deriv_at_minus1",
]

EULER_GAMMA = 0.57721566490153286060651209008240243

MAX_TERMS = 1 << 16
_BERNOULLI_TERMS = 10


class PrecisionError(ArithmeticError):
    """Requested accuracy is not reachable within the term budget."""


@dataclass(frozen=True)
class LSeriesValue:
    value: float
    precision: float
    source: str = "Computed"

    def __post_init__(self):
        if self.source not in ("Computed", "Supplied"):
            raise ValueError("source must be 'Computed' or 'Supplied'")

    def __float__(self):
        return float(self.value)

    @classmethod
    def supplied(cls, value: float, precision: float = 0.0) -> "LSeriesValue":
        return cls(float(value), precision, "Supplied")


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n with B_1 = -1/2."""
    B = [Fraction(1)]
    for m in range(1, n + 1):
        B.append(-sum(math.comb(m + 1, k) * B[k] for k in range(m)) / (m + 1))
    return B[n]


def _check_precision(prec: float):
    if not prec > 0:
        raise ValueError("prec must be positive")


def _hurwitz_em(s: float, a: float, M: int, J: int = _BERNOULLI_TERMS):
    """(value, s-derivative, error bound) of zeta(s, a) by Euler-Maclaurin.

    At s == 1 the pole term is replaced by its finite part: -log x for the
    value and (log x)^2 / 2 for the derivative.  Those parts are only
    meaningful inside a character sum whose weights add to zero.
    """
    head_v = []
    head_d = []
    for n in range(M):
        x = n + a
        t = x ** (-s)
        head_v.append(t)
        head_d.append(-math.log(x) * t)
    x = M + a
    L = math.log(x)
    xs = x ** (-s)
    if s == 1:
        tail_v = [-L, 0.5 * xs]
        tail_d = [0.5 * L * L, -0.5 * L * xs]
    else:
        pole = x ** (1 - s) / (s - 1)
        tail_v = [pole, 0.5 * xs]
        tail_d = [-L * pole - pole / (s - 1), -0.5 * L * xs]
    poch = s  # (s)_{2j-1}
    dpoch = 1.0
    for j in range(1, J + 2):
        if j > 1:
            k = 2 * j - 3
            dpoch = dpoch * (s + k) * (s + k + 1) + poch * ((s + k + 1) + (s + k))
            poch = poch * (s + k) * (s + k + 1)
        c = float(bernoulli(2 * j)) / math.factorial(2 * j)
        p = x ** (-s - 2 * j + 1)
        term_v = c * poch * p
        term_d = c * (dpoch * p - poch * L * p)
        if j <= J:
            tail_v.append(term_v)
            tail_d.append(term_d)
        else:
            err_v = 2 * abs(term_v)
            err_d = 2 * (abs(c * dpoch * p) + abs(term_v) * L)
    value = math.fsum(head_v + tail_v)
    deriv = math.fsum(head_d + tail_d)
    # each term carries a few ulps; fsum adds no further loss
    rounding = 2 * 2.2e-16 * (math.fsum(map(abs, head_v)) + math.fsum(map(abs, head_d)) + 1.0)
    return value, deriv, max(err_v, err_d) + rounding


def hurwitz_zeta(s: float, a: float, prec: float = 1e-12, start: int = 8):
    """Hurwitz zeta(s, a) and its s-derivative; returns (value, deriv, err)."""
    _check_precision(prec)
    if a <= 0:
        raise ValueError("a must be positive")
    M = start
    while True:
        v, d, err = _hurwitz_em(s, a, M)
        if err <= prec:
            return v, d, err
        if M >= MAX_TERMS:
            raise PrecisionError(f"Hurwitz zeta at s={s}, a={a}: error {err:.2e} > {prec:.2e}")
        M *= 2


def dirichlet_l(s: float, d: int, prec: float = 1e-12):
    """L(s, chi_d) and L'(s, chi_d) for the Kronecker character of discriminant d.

    d = 1 gives the Riemann zeta function.  Returns (value, deriv, err).
    """
    q = abs(d)
    if q == 1:
        return hurwitz_zeta(s, 1.0, prec)
    chars = [(a, kronecker_symbol(d, a)) for a in range(1, q + 1)]
    chars = [(a, c) for a, c in chars if c]
    scale = q ** (-s)
    per = prec / (scale * len(chars) * (1 + math.log(q)))
    vals, ders, errs = [], [], []
    for a, c in chars:
        v, dv, e = hurwitz_zeta(s, a / q, per)
        vals.append(c * v)
        ders.append(c * dv)
        errs.append(e)
    S = math.fsum(vals)
    Sd = math.fsum(ders)
    value = scale * S
    deriv = scale * (Sd - math.log(q) * S)
    err = scale * math.fsum(errs) * (1 + math.log(q))
    return value, deriv, err


def _log_deriv(s: float, d: int, prec: float) -> tuple[float, float]:
    # error of v'/v given absolute errors on v and v'
    target = prec
    while True:
        v, dv, e = dirichlet_l(s, d, target)
        ratio = dv / v
        bound = e * (1 + abs(ratio)) / (abs(v) - e)
        if bound <= prec:
            return ratio, bound
        if target < 1e-16:
            raise PrecisionError(f"log-derivative of L(s, chi_{d}) at s={s} not reachable")
        target /= 10


@lru_cache(maxsize=256)
def zeta_log_deriv_at2(field: NumberFieldData, prec: float = 1e-10) -> LSeriesValue:
    """zeta_F'(2)/zeta_F(2) with zeta_F = zeta * L(chi_{d_F}) in degree two."""
    _check_precision(prec)
    parts = [1] if field.is_rational else [1, field.discriminant]
    share = prec / len(parts)
    total, bound = 0.0, 0.0
    for d in parts:
        r, b = _log_deriv(2.0, d, share)
        total += r
        bound += b
    return LSeriesValue(total, prec)


def gamma_factor_log_deriv(s: float, degree: int) -> float:
    """Log-derivative of (pi^{-s/2} Gamma(s/2))^degree."""
    from scipy.special import digamma

    return degree * 0.5 * (float(digamma(s / 2)) - math.log(math.pi))


def _gamma_at2(n: int) -> float:
    return -0.5 * (EULER_GAMMA + math.log(math.pi)) * n


def _gamma_at_minus1(n: int) -> float:
    return -0.5 * (EULER_GAMMA + math.log(4 * math.pi)) * n + n


def completed_log_deriv_2_to_minus1(value_at2: float, field: NumberFieldData) -> float:
    """Map zeta_F'/zeta_F(2) to zeta_F'/zeta_F(-1)."""
    n = field.degree
    completed2 = value_at2 + _gamma_at2(n)
    completed_m1 = -(math.log(field.discriminant) + completed2)
    return completed_m1 - _gamma_at_minus1(n)


def completed_log_deriv_minus1_to_2(value_at_m1: float, field: NumberFieldData) -> float:
    """Inverse of :func:`completed_log_deriv_2_to_minus1`."""
    n = field.degree
    completed_m1 = value_at_m1 + _gamma_at_minus1(n)
    completed2 = -(math.log(field.discriminant) + completed_m1)
    return completed2 - _gamma_at2(n)


def zeta_log_deriv_at_minus1(field: NumberFieldData, prec: float = 1e-10) -> LSeriesValue:
    at2 = zeta_log_deriv_at2(field, prec)
    return LSeriesValue(completed_log_deriv_2_to_minus1(at2.value, field), prec)


def _b2(x: Fraction) -> Fraction:
    return x * x - x + Fraction(1, 6)


def l_value_at_minus1(d: int) -> Fraction:
    """L(-1, chi_d) = -B_{2,chi}/2; d = 1 gives zeta(-1)."""
    if d == 1:
        return -bernoulli(2) / 2
    if not is_fundamental_discriminant(d):
        raise ValueError(f"{d} is not a fundamental discriminant")
    q = abs(d)
    B2chi = q * sum(kronecker_symbol(d, a) * _b2(Fraction(a, q)) for a in range(1, q + 1))
    return -B2chi / 2


def zeta_value_at_minus1(field: NumberFieldData) -> Fraction:
    value = l_value_at_minus1(1)
    if not field.is_rational:
        value *= l_value_at_minus1(field.discriminant)
    return value


def l_value_at_0(disc: int) -> Fraction:
    """L(0, chi_d) = -(1/|d|) sum chi(a) a for a nonprincipal character."""
    if not is_fundamental_discriminant(disc):
        raise ValueError(f"{disc} is not a fundamental discriminant")
    q = abs(disc)
    return -Fraction(sum(kronecker_symbol(disc, a) * a for a in range(1, q + 1)), q)


def quadratic_l_log_deriv_at0(disc: int, prec: float = 1e-10) -> LSeriesValue:
    """L'(0, chi)/L(0, chi) for an imaginary quadratic discriminant, via log Gamma."""
    _check_precision(prec)
    if disc >= 0 or not is_fundamental_discriminant(disc):
        raise ValueError(f"{disc} is not a negative fundamental discriminant")
    q = abs(disc)
    L0 = l_value_at_0(disc)
    assert L0 != 0, "odd primitive characters have L(0) != 0"
    terms = [kronecker_symbol(disc, a) * math.lgamma(a / q) for a in range(1, q)]
    dL0 = math.fsum(terms) - math.log(q) * float(L0)
    # lgamma is accurate to a few ulps, so the error is far below any usable prec
    err = 8 * q * 2.2e-16 * (1 + max(abs(t) for t in terms)) / float(abs(L0))
    if err > prec:
        raise PrecisionError(f"cannot reach {prec:.1e} in double precision")
    return LSeriesValue(dL0 / float(L0), prec)


def odd_l_log_deriv_at1_from_at0(disc: int, ratio_at0: float) -> float:
    """L'/L(1) from L'/L(0) for an odd character, through the completed L-function."""
    return -ratio_at0 - math.log(abs(disc)) + EULER_GAMMA + math.log(2 * math.pi)


def riemann_zeta_deriv_at_minus1(prec: float = 1e-10) -> float:
    """zeta'(-1), obtained from the s = 2 series and the functional equation."""
    Q = NumberFieldData()
    ratio = zeta_log_deriv_at_minus1(Q, prec).value
    return ratio * float(l_value_at_minus1(1))
