"""Exact arithmetic in real quadratic extensions Q(sqrt D).

Local formulas carry factors |d_v|^{k/2} = N^{-delta*k/2}, which leave Q when
delta*k is odd.  Everything else in the local computations is rational, so
values live in Q(sqrt D) for D the squarefree part of N.  `Surd` is that
field, with a float fallback whenever an operand is inexact.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational

__all__ = ["Surd", "half_power", "to_exact", "parse_exact", "squarefree_decomposition", "LogMultiple"]


def squarefree_decomposition(n: int) -> tuple[int, int]:
    """Return (c, D) with n = c**2 * D and D squarefree."""
    if n <= 0:
        raise ValueError("n must be positive")
    c, D = 1, 1
    m = n
    q = 2
    while q * q <= m:
        e = 0
        while m % q == 0:
            m //= q
            e += 1
        c *= q ** (e // 2)
        if e % 2:
            D *= q
        q += 1
    D *= m
    return c, D


class Surd:
    """a + b*sqrt(D) with a, b rational and D squarefree (D == 1 means b == 0)."""

    __slots__ = ("a", "b", "D")

    def __init__(self, a=0, b=0, D: int = 1):
        a = Fraction(a)
        b = Fraction(b)
        if D < 1:
            raise ValueError("radicand must be a positive squarefree integer")
        if D == 1:
            a, b = a + b, Fraction(0)
        if b == 0:
            D = 1
        self.a, self.b, self.D = a, b, D

    # -- coercion -----------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, Surd):
            return other
        if isinstance(other, (int, Rational)):
            return Surd(other)
        return None

    def _common(self, other: "Surd") -> int:
        if self.D == 1:
            return other.D
        if other.D == 1 or other.D == self.D:
            return self.D
        raise ValueError(f"cannot combine sqrt({self.D}) and sqrt({other.D}) exactly")

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if self.b != 0:
            raise ValueError(f"{self} is irrational")
        return self.a

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.D)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return float(self) + other
        D = self._common(o)
        return Surd(self.a + o.a, self.b + o.b, D)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.D)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return float(self) - other
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return float(self) * other
        D = self._common(o)
        return Surd(self.a * o.a + self.b * o.b * D, self.a * o.b + self.b * o.a, D)

    __rmul__ = __mul__

    def inverse(self) -> "Surd":
        norm = self.a * self.a - self.b * self.b * self.D
        if norm == 0:
            raise ZeroDivisionError("division by zero Surd")
        return Surd(self.a / norm, -self.b / norm, self.D)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return float(self) / other
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return other / float(self)
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return float(self) ** k
        if k < 0:
            return self.inverse() ** (-k)
        out = Surd(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented if not isinstance(other, float) else float(self) == other
        return self.a == o.a and self.b == o.b and (self.b == 0 or self.D == o.D)

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.D))

    def sign(self) -> int:
        # exact sign of a + b sqrt(D)
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 D
        return sa if self.a * self.a > self.b * self.b * self.D else sb

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __repr__(self):
        return f"Surd({self})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt({self.D})"
        return f"{self.a} + {self.b}*sqrt({self.D})"


_SURD_RE = re.compile(
    r"^\s*(?:(?P<a>-?\d+(?:/\d+)?)\s*\+\s*)?(?P<b>-?\d+(?:/\d+)?)\*sqrt\((?P<D>\d+)\)\s*$"
)


def parse_exact(text: str) -> Surd:
    """Inverse of ``str(Surd)``."""
    m = _SURD_RE.match(text)
    if m:
        return Surd(Fraction(m["a"] or 0), Fraction(m["b"]), int(m["D"]))
    return Surd(Fraction(text.strip()))


def half_power(N: int, k: int) -> Surd:
    """N**(k/2) as an exact element of Q(sqrt N)."""
    if k % 2 == 0:
        return Surd(Fraction(N) ** (k // 2))
    c, D = squarefree_decomposition(N)
    # N^(k/2) = N^((k-1)/2) * c * sqrt(D)
    return Surd(0, Fraction(N) ** ((k - 1) // 2) * c, D)


def to_exact(x):
    """Promote int/Fraction to Surd; leave floats (and Surds) alone."""
    if isinstance(x, Surd):
        return x
    if isinstance(x, (int, Rational)):
        return Surd(x)
    return x


class LogMultiple:
    """coeff * log(base) with an exact coefficient; used for derivative identities."""

    __slots__ = ("coeff", "base")

    def __init__(self, coeff, base: int):
        self.coeff = to_exact(coeff)
        self.base = base

    def __float__(self):
        return float(self.coeff) * math.log(self.base)

    def _check(self, other):
        if isinstance(other, LogMultiple):
            if other.base != self.base:
                raise ValueError("log bases differ")
            return other.coeff
        if other == 0:
            return Surd(0)
        raise TypeError("can only combine LogMultiple values with the same base")

    def __add__(self, other):
        return LogMultiple(self.coeff + self._check(other), self.base)

    __radd__ = __add__

    def __sub__(self, other):
        return LogMultiple(self.coeff - self._check(other), self.base)

    def __neg__(self):
        return LogMultiple(-self.coeff, self.base)

    def __mul__(self, k):
        if isinstance(k, LogMultiple):
            raise TypeError("product of two logarithms is not a LogMultiple")
        return LogMultiple(self.coeff * k, self.base)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, LogMultiple):
            return self.base == other.base and self.coeff == other.coeff
        if other == 0:
            return self.coeff == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.coeff, self.base))

    def __repr__(self):
        return f"({self.coeff})*log({self.base})"
