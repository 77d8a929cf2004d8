"""Base fields (Q or a real quadratic field) and their finite places."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

__all__ = [
    "FieldSpecError",
    "ParityError",
    "NumberFieldData",
    "FinitePlace",
    "RamificationSet",
    "parse_field",
    "render_field",
    "places_above",
    "kronecker_symbol",
    "is_prime",
    "is_squarefree",
    "is_fundamental_discriminant",
]


class FieldSpecError(ValueError):
    """Malformed field specification or place selector."""


class ParityError(ValueError):
    """Ramification set with |Sigma_f| + [F:Q] even, or a repeated place."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for q in range(3, math.isqrt(n) + 1, 2):
        if n % q == 0:
            return False
    return True


def is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    q = 2
    while q * q <= n:
        if n % (q * q) == 0:
            return False
        q += 1
    return True


def is_fundamental_discriminant(d: int) -> bool:
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return is_squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def _jacobi(a: int, n: int) -> int:
    # n odd positive
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker_symbol(d: int, n: int) -> int:
    """Kronecker symbol (d/n) for n >= 1."""
    if n < 1:
        raise ValueError("n must be positive")
    result = 1
    while n % 2 == 0:
        n //= 2
        if d % 2 == 0:
            return 0
        if d % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * _jacobi(d, n)


@dataclass(frozen=True)
class NumberFieldData:
    """Q (D = 1) or Q(sqrt D) with D > 1 squarefree; h_F is user-supplied."""

    D: int = 1
    class_number: int = 1

    def __post_init__(self):
        if self.D != 1 and (self.D <= 1 or not is_squarefree(self.D)):
            raise FieldSpecError(f"D = {self.D} must be a squarefree integer > 1")
        if self.class_number < 1:
            raise FieldSpecError("class number must be a positive integer")
        if self.D == 1 and self.class_number != 1:
            raise FieldSpecError("Q has class number 1")

    @property
    def degree(self) -> int:
        return 1 if self.D == 1 else 2

    @property
    def is_rational(self) -> bool:
        return self.D == 1

    @property
    def discriminant(self) -> int:
        if self.D == 1:
            return 1
        return self.D if self.D % 4 == 1 else 4 * self.D

    def __str__(self):
        return render_field(self)

    def to_dict(self) -> dict:
        return {
            "field": render_field(self),
            "degree": self.degree,
            "d_F": self.discriminant,
            "h_F": self.class_number,
        }


_FIELD_RE = re.compile(r"^\s*Q\s*(?:\(\s*sqrt\s*\(?\s*(\d+)\s*\)?\s*\))?\s*$")


def parse_field(spec: str, class_number: int = 1) -> NumberFieldData:
    """Parse ``Q`` or ``Q(sqrt D)``."""
    m = _FIELD_RE.match(spec)
    if not m:
        raise FieldSpecError(f"malformed field spec {spec!r}; expected 'Q' or 'Q(sqrt D)'")
    if m.group(1) is None:
        return NumberFieldData(1, class_number)
    D = int(m.group(1))
    if D <= 1:
        raise FieldSpecError(f"D = {D} must be > 1")
    if not is_squarefree(D):
        raise FieldSpecError(f"D = {D} is not squarefree")
    return NumberFieldData(D, class_number)


def render_field(F: NumberFieldData) -> str:
    return "Q" if F.D == 1 else f"Q(sqrt {F.D})"


@dataclass(frozen=True, order=True)
class FinitePlace:
    """A finite place: residue characteristic p, residue degree f, ramification e."""

    p: int
    f: int = 1
    e: int = 1
    diff_val: int = 0
    label: str = ""

    def __post_init__(self):
        if not is_prime(self.p):
            raise FieldSpecError(f"{self.p} is not prime")
        if self.f not in (1, 2) or self.e not in (1, 2) or self.e * self.f > 2:
            raise FieldSpecError("need e, f in {1, 2} with e*f <= 2")
        if self.e == 1 and self.diff_val != 0:
            raise FieldSpecError("unramified places have trivial local different")

    @property
    def norm(self) -> int:
        return self.p ** self.f

    @property
    def log_norm(self) -> float:
        # f * log p, not log(p**f)
        return self.f * math.log(self.p)

    @property
    def kind(self) -> str:
        if self.e == 2:
            return "ram"
        if self.f == 2:
            return "inert"
        return self.label or "split"

    def __str__(self):
        tag = "" if self.kind == "split" and not self.label else f":{self.kind}"
        return f"{self.p}{tag}"


def _v_p(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def places_above(F: NumberFieldData, p: int) -> list[FinitePlace]:
    if not is_prime(p):
        raise FieldSpecError(f"{p} is not prime")
    if F.is_rational:
        return [FinitePlace(p)]
    dF = F.discriminant
    chi = kronecker_symbol(dF, p)
    if chi == 1:
        return [FinitePlace(p, label="split1"), FinitePlace(p, label="split2")]
    if chi == -1:
        return [FinitePlace(p, f=2)]
    return [FinitePlace(p, e=2, diff_val=_v_p(dF, p))]


def select_place(F: NumberFieldData, token: str) -> FinitePlace:
    """Resolve ``p`` or ``p:split1|split2|inert|ram`` to a place of F."""
    token = token.strip()
    p_txt, _, sel = token.partition(":")
    try:
        p = int(p_txt)
    except ValueError:
        raise FieldSpecError(f"bad place token {token!r}") from None
    places = places_above(F, p)
    if not sel:
        if len(places) > 1:
            raise FieldSpecError(
                f"{p} splits in {render_field(F)}; choose {p}:split1 or {p}:split2"
            )
        return places[0]
    for P in places:
        if P.kind == sel:
            return P
    kinds = ", ".join(P.kind for P in places)
    raise FieldSpecError(f"{p} has no place of type {sel!r} in {render_field(F)} (available: {kinds})")


@dataclass(frozen=True)
class RamificationSet:
    """Finite ramification Sigma_f of the quaternion algebra over F."""

    field: NumberFieldData
    places: tuple[FinitePlace, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "places", tuple(sorted(self.places)))
        if len(set(self.places)) != len(self.places):
            raise ParityError("duplicate places in ramification set")
        if (len(self.places) + self.field.degree) % 2 == 0:
            raise ParityError(
                f"|Sigma_f| + [F:Q] = {len(self.places)} + {self.field.degree} is even; "
                "the ramification set must have odd total size"
            )

    @property
    def d_B(self) -> int:
        return math.prod(P.norm for P in self.places)

    @classmethod
    def parse(cls, F: NumberFieldData, text: str) -> "RamificationSet":
        tokens = [t for t in text.split(",") if t.strip()] if text else []
        return cls(F, tuple(select_place(F, t) for t in tokens))

    def __str__(self):
        return ",".join(str(P) for P in self.places)


def local_different_abs(place: FinitePlace) -> Fraction:
    """|d_v| = N_v^{-v(d_v)} for the local different (v-adic valuation)."""
    # N(d_v) = p^{v_p(d_F)} and N_v = p at ramified places
    return Fraction(1, place.norm ** place.diff_val)
