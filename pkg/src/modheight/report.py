"""Check records and reports shared by every identity suite."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import LogMultiple, Surd, parse_exact

__all__ = ["Check", "VerificationReport", "exact_check", "float_check"]


def _encode(x):
    if isinstance(x, LogMultiple):
        return f"({x.coeff})*log({x.base})"
    if isinstance(x, (Surd, Fraction, int)):
        return str(x)
    return float(x)


def _decode(x):
    if isinstance(x, str):
        if x.endswith(")") and "*log(" in x:
            coeff, _, base = x.rpartition("*log(")
            return LogMultiple(parse_exact(coeff[1:-1]), int(base[:-1]))
        return parse_exact(x)
    return x


@dataclass(frozen=True)
class Check:
    label: str
    lhs: object
    rhs: object
    abs_error: float
    tolerance: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "lhs": _encode(self.lhs),
            "rhs": _encode(self.rhs),
            "abs_error": self.abs_error,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Check":
        return cls(d["label"], _decode(d["lhs"]), _decode(d["rhs"]), d["abs_error"], d["tolerance"], d["pass"])


def exact_check(label: str, lhs, rhs) -> Check:
    """Zero-tolerance comparison of exact values (Surd, Fraction or LogMultiple)."""
    diff = lhs - rhs
    ok = bool(diff == 0)
    err = abs(float(diff))
    if not ok and err == 0.0:
        err = math.ulp(0.0)  # nonzero difference below float resolution
    return Check(label, lhs, rhs, err, 0.0, ok)


def float_check(label: str, lhs: float, rhs: float, tol: float, relative: bool = False) -> Check:
    err = abs(float(lhs) - float(rhs))
    bound = tol * abs(float(rhs)) if relative else tol
    ok = math.isfinite(err) and err <= bound
    return Check(label, float(lhs), float(rhs), err, bound, ok)


@dataclass
class VerificationReport:
    suite: str
    checks: list[Check] = field(default_factory=list)
    versions: dict = field(default_factory=dict)

    def __post_init__(self):
        self.checks = sorted(self.checks, key=lambda c: c.label)

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self):
        return self.overall

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def merge(self, other: "VerificationReport", suite: str | None = None) -> "VerificationReport":
        return VerificationReport(suite or self.suite, self.checks + other.checks, self.versions or other.versions)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "checks": [c.to_dict() for c in self.checks],
            "overall": self.overall,
            "versions": self.versions,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        return cls(d["suite"], [Check.from_dict(c) for c in d["checks"]], d.get("versions", {}))
