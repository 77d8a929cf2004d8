"""Archimedean special functions.

Legendre functions of the second kind, the archimedean Whittaker function
near s = 0, Laurent constants of Gamma-type expressions, and a numerical
Kronecker limit formula.  Each quantity is produced by two independent
routes that are compared inside the function or in the verification suite.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import mpmath
import numpy as np
from scipy import integrate, special

from .lfunc import EULER_GAMMA, riemann_zeta_deriv_at_minus1

__all__ = [
    "RouteDisagreement",
    "LaurentConstant",
    "laurent_constant",
    "legendre_q",
    "legendre_q_integral_route",
    "legendre_q_hyper_route",
    "legendre_q_integral",
    "legendre_endpoint_terms",
    "green_residue_constant",
    "arch_whittaker",
    "arch_whittaker_analytic",
    "arch_whittaker_deriv0",
    "holproj_constant",
    "holproj_constant_numeric",
    "HOLPROJ_CLOSED",
    "GAMMA_RATIO_CLOSED",
    "gamma_ratio_deriv_numeric",
    "LEGENDRE_TOL",
    "holproj_constant_by_quadrature",
    "gamma_ratio_deriv",
    "log_abs_delta",
    "eisenstein_fourier",
    "eisenstein_lattice_sum",
    "scattering_laurent_constant",
    "kronecker_limit_sides",
    "kronecker_limit_residual",
    "closed_scattering_constant",
]

LEGENDRE_TOL = 1e-9


class RouteDisagreement(ArithmeticError):
    """Two independent evaluations of the same quantity differ beyond tolerance."""


@dataclass(frozen=True)
class LaurentConstant:
    value: float
    pole_order: int
    residue: float = 0.0

    def __post_init__(self):
        if self.pole_order not in (0, 1):
            raise ValueError("only simple poles are supported")
        if self.pole_order == 0 and self.residue != 0:
            raise ValueError("a regular point has zero residue")


def laurent_constant(f: Callable[[float], float], at: float = 0.0, residue: float | None = None,
                     pole_order: int = 1, h: float = 1e-3) -> LaurentConstant:
    """Constant Laurent coefficient of f at ``at`` by symmetric Richardson extrapolation.

    With a simple pole the residue, if not supplied, is estimated from the
    odd part of f.  Symmetric samples cancel odd powers, so the two-step
    Richardson combination is accurate to O(h^4).
    """
    if pole_order not in (0, 1):
        raise ValueError("higher-order poles are not supported")
    fp1, fm1 = f(at + h), f(at - h)
    fp2, fm2 = f(at + 2 * h), f(at - 2 * h)
    if pole_order == 0:
        res = 0.0
    elif residue is None:
        # odd part: res/h + c1 h + ...; Richardson on two steps
        o1 = (fp1 - fm1) / 2 * h
        o2 = (fp2 - fm2) / 2 * (2 * h)
        res = (4 * o1 - o2) / 3
    else:
        res = residue
    e1 = (fp1 + fm1) / 2
    e2 = (fp2 + fm2) / 2
    return LaurentConstant((4 * e1 - e2) / 3, pole_order, res)


# -- Legendre Q_s -----------------------------------------------------------

def legendre_q_integral_route(s: float, t: float) -> float:
    """Q_s(t) = int_0^inf (t + sqrt(t^2-1) cosh u)^(-1-s) du."""
    if t <= 1:
        raise ValueError("t must exceed 1")
    w = math.sqrt(t * t - 1)
    f = lambda u: (t + w * math.cosh(u)) ** (-1 - s)
    # integrand ~ (w e^u / 2)^(-1-s); cut where it is negligible
    upper = (745 / (1 + s)) if s > 0 else 700
    upper = min(upper, 60 / (1 + s) + abs(math.log(w)) + 5)
    val, err = integrate.quad(f, 0, upper, epsabs=1e-14, epsrel=1e-13, limit=200)
    tail = (2 / w) ** (1 + s) * math.exp(-(1 + s) * upper) / (1 + s)
    return val + tail


def _hyp_aa2a(a: float, z: float, w: float | None = None) -> float:
    """F(a, a; 2a; z) for 0 <= z < 1; ``w`` = 1 - z may be passed to keep accuracy near 1."""
    if z <= 0.5:
        term, total, n = 1.0, 1.0, 0
        while True:
            term *= (a + n) ** 2 / ((2 * a + n) * (n + 1)) * z
            n += 1
            total += term
            if n > (a - 1) ** 2 and abs(term) * z / (1 - z) < 1e-17 * abs(total):
                return total
    # logarithmic case c = a + b, expanded in 1 - z
    if w is None:
        w = 1 - z
    lw = math.log(w)
    pref = math.exp(special.gammaln(2 * a) - 2 * special.gammaln(a))
    coef, total, n = 1.0, 0.0, 0
    small = 0
    while True:
        term = coef * (2 * special.digamma(n + 1) - 2 * special.digamma(a + n) - lw) * w**n
        total += term
        if abs(term) < 1e-17 * abs(total):
            small += 1
            if small >= 3 and n > 2 * a:
                return pref * total
        else:
            small = 0
        coef *= ((a + n) / (n + 1)) ** 2
        n += 1


def _q_hyper(s: float, tm1: float) -> float:
    # parametrized by t - 1 so that points very close to t = 1 stay exact
    a = s + 1
    tp1 = 2 + tm1
    z = 2 / tp1
    logc = s * math.log(2) + 2 * special.gammaln(a) - special.gammaln(2 * a) - a * math.log(tp1)
    return math.exp(logc) * _hyp_aa2a(a, z, tm1 / tp1)


def legendre_q_hyper_route(s: float, t: float) -> float:
    """Q_s(t) through the Gauss hypergeometric series in 2/(t+1)."""
    if t <= 1:
        raise ValueError("t must exceed 1")
    if s < 0:
        raise ValueError("s must be >= 0")
    return _q_hyper(s, t - 1)


def legendre_q(s: float, t: float, tol: float = LEGENDRE_TOL) -> float:
    """Q_s(t) for s >= 0, t > 1; both routes must agree within ``tol``."""
    if s < 0:
        raise ValueError("s must be >= 0")
    hyp = legendre_q_hyper_route(s, t)
    quad = legendre_q_integral_route(s, t)
    if abs(hyp - quad) > tol:
        raise RouteDisagreement(f"Q_{s}({t}): hypergeometric {hyp!r} vs integral {quad!r}")
    return hyp


def legendre_q_integral(s: float) -> float:
    """int_1^inf Q_s(t) dt, with t = 1 + e^y to tame both ends."""
    if s <= 0:
        raise ValueError("s must be positive")
    f = lambda y: _q_hyper(s, math.exp(y)) * math.exp(y)
    left, _ = integrate.quad(f, -60, 0, epsabs=1e-13, epsrel=1e-12, limit=200)
    # past Y the integrand is within a relative 1e-12 of its leading power e^{-s y}
    Y = 30.0 / min(s, 1.0) + 10
    mid, _ = integrate.quad(f, 0, Y, epsabs=1e-13, epsrel=1e-12, limit=400)
    a = s + 1
    lead = math.exp(s * math.log(2) + 2 * special.gammaln(a) - special.gammaln(2 * a))
    # Q_s(t) ~ lead * t^{-s-1}; the neglected tail then integrates to lead * T^{-s} / s
    T = 1 + math.exp(Y)
    tail = lead * T ** (-s) / s
    # the region y < -60 contributes below e^{-60} * 60
    return left + mid + tail


def legendre_endpoint_terms(s: float, tm1: float) -> float:
    """(t^2 - 1) Q_s'(t) at t = 1 + tm1, through the contiguous-function derivative."""
    a = s + 1
    tp1 = 2 + tm1
    z, w = 2 / tp1, tm1 / tp1
    C = math.exp(s * math.log(2) + 2 * special.gammaln(a) - special.gammaln(2 * a))
    # F(a+1, a+1; 2a+1; z) = (1-z)^{-1} F(a, a; 2a+1; z) removes the pole at z = 1
    F0 = _hyp_aa2a(a, z, w)
    F1 = float(special.hyp2f1(a, a, 2 * a + 1, z))
    return C * tp1 ** (1 - a) * (-a * w * F0 - a * z / 2 * F1)


def green_residue_constant(s_values=(0.5, 1.0, 2.0), tol: float = 1e-6):
    """(residue scale, integral constant) = (1, -1), both re-derived numerically.

    The integral of g_s is ((t^2-1)Q_s')|_1^inf / (s(s+1)); the endpoint terms
    are evaluated numerically and must give 0 and -1.  The residue (relative
    to the inverse volume) and the constant term of 1/(s(s+1)) are then read
    off by Richardson extrapolation.
    """
    for s in s_values:
        lo = legendre_endpoint_terms(s, 1e-12)
        hi = legendre_endpoint_terms(s, 10 ** (8 / s))
        if abs(lo + 1) > tol or abs(hi) > tol:
            raise RouteDisagreement(f"endpoint limits at s={s}: {lo}, {hi}")
    lc = laurent_constant(lambda s: 1 / (s * (s + 1)), residue=None)
    if abs(lc.residue - 1) > tol or abs(lc.value + 1) > tol:
        raise RouteDisagreement(f"Laurent data of 1/(s(s+1)): {lc.residue}, {lc.value}")
    return 1, -1


# -- archimedean Whittaker ----------------------------------------------------

def _whittaker_a_regularized(s: float, a: float) -> float:
    """W_a(s, 1, u) for u > 0 through the subtracted integral (valid for s > 0)."""
    e = s / 2 + 1
    c = (2 * a) ** e
    g = lambda t: math.exp(-2 * math.pi * t) * ((t + 2 * a) ** e - c) * t ** (s / 2 - 1)
    I, _ = integrate.quad(g, 0, np.inf, epsabs=1e-14, epsrel=1e-12, limit=200)
    bracket = I + c * (2 * math.pi) ** (-s / 2) * special.gamma(s / 2)
    pref = math.pi ** (s + 2) * s / (special.gamma(s / 2 + 2) * special.gamma(s / 2 + 1))
    return -math.exp(-2 * math.pi * a) * pref * bracket


def arch_whittaker(a: float, s: float, u: float = 1.0) -> float:
    """W_1(s, d*(a), u) = a^{-s/2} W_a(s, 1, u/a), by regularized quadrature (s > 0)."""
    if a <= 0:
        raise ValueError("a must be positive")
    if u <= 0:
        return 0.0
    if s == 0:
        return arch_whittaker_deriv0(a, u)[0]
    return a ** (-s / 2) * _whittaker_a_regularized(s, a)


def arch_whittaker_analytic(a: float, s: float, u: float = 1.0) -> float:
    """Same function through Tricomi's U, valid for all s near 0."""
    if u <= 0:
        return 0.0
    val = (
        -2 * mpmath.pi ** (s + 2) * (2 * a) ** (s + 1) * mpmath.exp(-2 * mpmath.pi * a)
        * mpmath.hyperu(s / 2, s + 2, 4 * mpmath.pi * a) / mpmath.gamma(s / 2 + 2)
    )
    return float(a ** (-s / 2) * val)


def arch_whittaker_deriv0(a: float, u: float = 1.0) -> tuple[float, float]:
    """(W_1(0, d*(a), u), W_1'(0, d*(a), u)) in closed form."""
    if a <= 0:
        raise ValueError("a must be positive")
    if u <= 0:
        return 0.0, 0.0
    ea = math.exp(-2 * math.pi * a)
    W0 = -4 * math.pi**2 * a * ea
    W1 = -(math.pi / 2 * ea + 2 * math.pi**2 * (math.log(math.pi) + EULER_GAMMA - 1) * a * ea)
    return W0, W1


# -- holomorphic projection and Gamma ratios --------------------------------

def _holproj_gamma(s: float) -> float:
    c = 2 * math.pi**2 * (math.log(math.pi) + EULER_GAMMA - 1)
    fp = 4 * math.pi
    return math.pi / 2 * fp ** (-s) * special.gamma(s) + c * fp ** (-s - 1) * special.gamma(s + 1)


HOLPROJ_CLOSED = -0.5 * (1 + math.log(4))
GAMMA_RATIO_CLOSED = 1 - EULER_GAMMA - math.log(4 * math.pi)


def holproj_constant_numeric() -> float:
    """Laurent constant at 0 of the Gamma combination (residue pi/2 removed), over pi."""
    return laurent_constant(_holproj_gamma, residue=math.pi / 2).value / math.pi


def holproj_constant(tol: float = 1e-7) -> float:
    """Coefficient c with pr' W'(0, g) = c W(0, g)."""
    num = holproj_constant_numeric()
    if abs(num - HOLPROJ_CLOSED) > tol:
        raise RouteDisagreement(f"holomorphic projection constant {num} vs {HOLPROJ_CLOSED}")
    return HOLPROJ_CLOSED


def holproj_constant_by_quadrature() -> float:
    """Same coefficient from y-integrals of the closed-form W0, W0' themselves.

    With g(y) = e^{-2 pi y} W0'(y), the constant term at s = 0 of
    int_0^inf y^{s-1} g(y) dy is int_0^1 (g(y) - g(0))/y dy + int_1^inf g(y)/y dy;
    it is divided by the same transform of W0, which is regular at s = 0.
    """
    g = lambda y: math.exp(-2 * math.pi * y) * arch_whittaker_deriv0(y)[1]
    h = lambda y: math.exp(-2 * math.pi * y) * arch_whittaker_deriv0(y)[0]
    g0 = g(1e-300)  # limit at y -> 0+
    opts = dict(epsabs=1e-14, epsrel=1e-13, limit=200)
    head, _ = integrate.quad(lambda y: (g(y) - g0) / y if y > 0 else 0.0, 0, 1, **opts)
    tail, _ = integrate.quad(lambda y: g(y) / y, 1, math.inf, **opts)
    norm, _ = integrate.quad(lambda y: h(y) / y if y > 0 else -4 * math.pi**2, 0, math.inf, **opts)
    return (head + tail) / norm


def gamma_ratio_deriv_numeric(h: float = 1e-5) -> float:
    """Central difference at 0 of log Gamma(2s+2) - s log(4 pi) - log Gamma(s+2)."""
    logr = lambda s: math.lgamma(2 * s + 2) - s * math.log(4 * math.pi) - math.lgamma(s + 2)
    # the ratio is 1 at s = 0, so its derivative equals that of its log
    return (logr(h) - logr(-h)) / (2 * h)


def gamma_ratio_deriv(h: float = 1e-5, tol: float = 1e-8) -> float:
    """d/ds of Gamma(2s+2) / ((4 pi)^s Gamma(s+2)) at s = 0."""
    fd = gamma_ratio_deriv_numeric(h)
    if abs(fd - GAMMA_RATIO_CLOSED) > tol:
        raise RouteDisagreement(f"Gamma ratio derivative {fd} vs {GAMMA_RATIO_CLOSED}")
    return GAMMA_RATIO_CLOSED


# -- Kronecker limit formula -------------------------------------------------

def log_abs_delta(tau: complex) -> float:
    """log |Delta(tau)| from q prod (1 - q^n)^24, truncated with a tail bound."""
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half plane")
    q = cmath.exp(2j * math.pi * tau)
    aq = abs(q)
    total = [math.log(aq)]
    qn = q
    n = 1
    while True:
        total.append(24 * math.log(abs(1 - qn)))
        n += 1
        qn *= q
        # |log|1 - x|| <= 2|x| for |x| <= 1/2
        if 24 * 2 * abs(qn) / (1 - aq) < 1e-17:
            break
    return math.fsum(total)


def _bessel_k(nu: float, x: float) -> float:
    return float(special.kv(nu, x))


def _xi(s):
    return mpmath.pi ** (-s / 2) * mpmath.gamma(s / 2) * mpmath.zeta(s)


def _scattering(s):
    return _xi(2 * s - 1) / _xi(2 * s)


def _sigma(n: int, e: float) -> float:
    return sum(d**e for d in range(1, n + 1) if n % d == 0)


def _nonconstant(tau: complex, s: float, eps: float = 1e-18) -> float:
    x, y = tau.real, tau.imag
    total = []
    n = 1
    while True:
        arg = 2 * math.pi * n * y
        term = n ** (s - 0.5) * _sigma(n, 1 - 2 * s) * _bessel_k(s - 0.5, arg) * 2 * math.cos(2 * math.pi * n * x)
        total.append(term)
        # K decays like exp(-arg); stop once the next terms are negligible
        if math.exp(-arg) * n ** abs(s) < eps:
            break
        n += 1
    return 2 * math.sqrt(y) * math.fsum(total)


def eisenstein_fourier(tau: complex, s: float) -> float:
    """E(tau, s) = sum over Gamma_inf \\ SL_2(Z) of Im(g tau)^s, via its Fourier-Bessel expansion."""
    y = tau.imag
    return y**s + float(_scattering(s)) * y ** (1 - s) + _nonconstant(tau, s) / float(_xi(2 * s))


def eisenstein_lattice_sum(tau: complex, s: float, R: int = 200) -> float:
    """Direct sum over coprime (c, d) with max(|c|, |d|) <= R (slow, for checks)."""
    y = tau.imag
    total = []
    for c in range(-R, R + 1):
        for d in range(-R, R + 1):
            if (c, d) != (0, 0) and math.gcd(c, d) == 1:
                total.append(y**s / abs(c * tau + d) ** (2 * s))
    return 0.5 * math.fsum(total)


def scattering_laurent_constant() -> float:
    """Constant term at s = 1 of (pi/3) xi(2s-1)/xi(2s), from numeric xi values."""
    mpmath.mp.dps = 30
    try:
        f = lambda h: (mpmath.pi / 3) * _scattering(1 + mpmath.mpf(h))
        lc = laurent_constant(lambda h: float(f(h) - 1 / mpmath.mpf(h)), pole_order=0, h=1e-4)
        return lc.value
    finally:
        mpmath.mp.dps = 15


def closed_scattering_constant(prec: float = 1e-12) -> float:
    """2 - 2 log(4 pi) - 24 zeta'(-1), with zeta'(-1) from the lfunc module."""
    return 2 - 2 * math.log(4 * math.pi) - 24 * riemann_zeta_deriv_at_minus1(prec)


def kronecker_limit_sides(tau: complex) -> tuple[float, float]:
    """(-log|Delta(tau)^2 Im(tau)^12|, 4 pi lim_{s->1} (E(tau, s) - phi(s)))."""
    y = tau.imag
    lhs = -2 * log_abs_delta(tau) - 12 * math.log(y)
    # at s = 1: y^s -> y, phi(s)(y^{1-s} - 1) -> -(3/pi) log y, xi(2) = pi/6
    nonconst = _nonconstant(tau, 1.0) * 6 / math.pi
    offset = 3 / math.pi * (scattering_laurent_constant() - closed_scattering_constant())
    rhs = 4 * math.pi * (y - 3 / math.pi * math.log(y) + nonconst + offset)
    return lhs, rhs


def kronecker_limit_residual(tau: complex, prec: float = 1e-6) -> float:
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half plane")
    if prec < 1e-6:
        raise ValueError("prec must be >= 1e-6")
    lhs, rhs = kronecker_limit_sides(tau)
    return abs(lhs - rhs)
