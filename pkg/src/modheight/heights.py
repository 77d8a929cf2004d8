"""Height evaluators for quaternionic Shimura curves and CM points.

All inputs are validated through :mod:`modheight.numberfield`; the analytic
ingredients come from :mod:`modheight.lfunc` and the per-place coefficients
from :mod:`modheight.local_nonarch`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import lfunc
from .lfunc import EULER_GAMMA, LSeriesValue
from .local_nonarch import local_term_coefficient
from .numberfield import FieldSpecError, NumberFieldData, RamificationSet

__all__ = [
    "AT_MINUS_ONE",
    "AT_TWO",
    "BREAKDOWN_TOL",
    "KRY_TOL",
    "HeightResult",
    "modular_height",
    "modular_height_via_s2",
    "vigneras_degree",
    "cm_height",
    "kry_height",
    "kry_local_coefficient",
]

AT_MINUS_ONE = "AtMinusOne"
AT_TWO = "AtTwo"
BREAKDOWN_TOL = 1e-12
KRY_TOL = 1e-9


@dataclass(frozen=True)
class HeightResult:
    value: float
    breakdown: dict = field(default_factory=dict)
    route: str = AT_MINUS_ONE

    def __post_init__(self):
        if self.route not in (AT_MINUS_ONE, AT_TWO):
            raise ValueError(f"unknown route {self.route!r}")
        total = math.fsum(self.breakdown.values())
        if abs(total - self.value) > BREAKDOWN_TOL:
            raise ArithmeticError(f"breakdown sums to {total}, value is {self.value}")

    def to_dict(self) -> dict:
        return {"value": self.value, "breakdown": dict(self.breakdown), "route": self.route}

    @classmethod
    def from_dict(cls, d: dict) -> "HeightResult":
        return cls(float(d["value"]), {k: float(v) for k, v in d["breakdown"].items()}, d["route"])


def _check_ram(F: NumberFieldData, ram: RamificationSet):
    if ram.field != F:
        raise FieldSpecError("ramification set belongs to a different field")


def _local_terms(ram: RamificationSet) -> dict:
    return {
        f"local {P}": float(local_term_coefficient(P.norm)) * P.log_norm
        for P in ram.places
    }


def _result(terms: dict, route: str) -> HeightResult:
    return HeightResult(math.fsum(terms.values()), terms, route)


def modular_height(F: NumberFieldData, ram: RamificationSet, prec: float = 1e-10) -> HeightResult:
    """Height through the log-derivative of the Dedekind zeta function at s = -1."""
    _check_ram(F, ram)
    zl = lfunc.zeta_log_deriv_at_minus1(F, prec)
    terms = {"zeta": -zl.value, "degree": -0.5 * F.degree}
    terms.update(_local_terms(ram))
    return _result(terms, AT_MINUS_ONE)


def modular_height_via_s2(F: NumberFieldData, ram: RamificationSet, prec: float = 1e-10) -> HeightResult:
    """Height through the log-derivative at s = 2 plus discriminant and Gamma constants."""
    _check_ram(F, ram)
    zl = lfunc.zeta_log_deriv_at2(F, prec)
    terms = {
        "zeta": zl.value,
        "discriminant": math.log(F.discriminant),
        "degree": -(EULER_GAMMA + math.log(2 * math.pi) - 0.5) * F.degree,
    }
    terms.update(_local_terms(ram))
    return _result(terms, AT_TWO)


def vigneras_degree(F: NumberFieldData, ram: RamificationSet, class_number: int | None = None) -> Fraction:
    """Degree of the Hodge bundle, exact: 4 h (-2)^{-n} zeta_F(-1) prod (N_v - 1)."""
    _check_ram(F, ram)
    h = F.class_number if class_number is None else class_number
    if not isinstance(h, int) or h < 1:
        raise FieldSpecError("class number must be a positive integer")
    n = F.degree
    deg = 4 * h * Fraction(1, (-2) ** n) * lfunc.zeta_value_at_minus1(F)
    for P in ram.places:
        deg *= P.norm - 1
    if deg <= 0:
        raise ArithmeticError(f"nonpositive degree {deg}")
    return deg


def cm_height(F: NumberFieldData, l_ratio, d_B: int, d_EF: int) -> float:
    """CM-point height -L'/L(0) + (1/2) log(d_B / d_EF).

    ``l_ratio`` is the log-derivative at 0 of the relative L-function, either
    an :class:`LSeriesValue` or a plain float (treated as supplied).  The
    caller asserts that no place ramifies in both the CM extension and the
    quaternion algebra.
    """
    for name, v in (("d_B", d_B), ("d_EF", d_EF)):
        if not isinstance(v, int) or v < 1:
            raise FieldSpecError(f"{name} must be a positive integer (got {v!r})")
    if not isinstance(l_ratio, LSeriesValue):
        l_ratio = LSeriesValue.supplied(l_ratio)
    return -l_ratio.value + 0.5 * math.log(Fraction(d_B, d_EF))


def kry_local_coefficient(p: int) -> Fraction:
    return Fraction(p + 1, 4 * (p - 1))


def kry_height(ram: RamificationSet, prec: float = 1e-10) -> float:
    """Height in the normalization of Kudla-Rapoport-Yang, for F = Q.

    Cross-checked against :func:`modular_height` shifted by half of log d_B.
    """
    F = ram.field
    if not F.is_rational:
        raise FieldSpecError("the KRY normalization is defined over Q only")
    if len(ram.places) < 2:
        raise FieldSpecError("need at least two ramified primes")
    zl = lfunc.zeta_log_deriv_at_minus1(F, prec)
    local = math.fsum(float(kry_local_coefficient(P.p)) * math.log(P.p) for P in ram.places)
    value = -zl.value - 0.5 + local
    other = modular_height(F, ram, prec).value - 0.5 * math.log(ram.d_B)
    if abs(value - other) > KRY_TOL:
        raise ArithmeticError(f"KRY relation fails: {value} vs {other}")
    return value
