"""Brute-force local densities by counting points of quaternion orders mod p^k.

Two models are supported, both with N = p:

* ``matrix``: M_2(Z_p) with the determinant as reduced norm;
* ``division``: O_E + O_E j with O_E = Z_p[t], t^2 - eps*t - c irreducible mod p,
  and q(y1 + y2 j) = Nm(y1) - p*Nm(y2).

Counting never enumerates all p^{4k} quadruples.  The norm splits as a
difference of two binary pieces, so we tabulate each piece by enumeration
over (Z/p^k)^2 and convolve the two histograms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .exact import Surd, half_power
from .local_nonarch import DIVISION, MATRIX, LocalWhittakerSpec
from .numberfield import is_prime
from .report import VerificationReport, exact_check

__all__ = [
    "OracleError",
    "OrderModel",
    "count_quadric",
    "density",
    "whittaker_oracle",
    "hecke_coset_count",
    "hecke_cosets",
    "sublattice_count_brute",
    "unit_volume_check",
    "PAIR_BUDGET",
    "STABILITY_BUDGET",
]

# cap on (Z/p^k)^2 enumeration when tabulating a binary form
PAIR_BUDGET = 3 * 10**8
# depth-stability (k = m + 1) is re-counted only below this many pairs
STABILITY_BUDGET = 2 * 10**7
_ROW_CHUNK = 1 << 22


class OracleError(RuntimeError):
    pass


def _nonresidue(p: int) -> int:
    return next(c for c in range(2, p) if pow(c, (p - 1) // 2, p) == p - 1)


@dataclass(frozen=True)
class OrderModel:
    kind: str
    p: int
    eps: int = field(init=False)
    c: int = field(init=False)

    def __post_init__(self):
        if self.kind not in (MATRIX, DIVISION):
            raise ValueError(f"kind must be {MATRIX!r} or {DIVISION!r}")
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.p == 2:
            eps, c = 1, -1  # t^2 - t + 1, discriminant -3
        else:
            eps, c = 0, _nonresidue(self.p)
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "c", c)

    def binary_norm(self, y0, y1):
        return y0 * y0 + self.eps * y0 * y1 - self.c * y1 * y1

    def reduced_norm(self, x) -> int:
        x1, x2, x3, x4 = x
        if self.kind == MATRIX:
            return x1 * x4 - x2 * x3
        return self.binary_norm(x1, x2) - self.p * self.binary_norm(x3, x4)

    def multiply(self, x, y):
        """Product in the order (integers, no reduction)."""
        if self.kind == MATRIX:
            a, b, c, d = x
            e, f, g, h = y
            return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
        # j y = conj(y) j and j^2 = p, so Nrd(y2 j) = -p Nm(y2)
        mul = lambda u, v: (
            u[0] * v[0] + self.c * u[1] * v[1],
            u[0] * v[1] + u[1] * v[0] + self.eps * u[1] * v[1],
        )
        conj = lambda u: (u[0] + self.eps * u[1], -u[1])
        y1, y2 = (x[0], x[1]), (x[2], x[3])
        z1, z2 = (y[0], y[1]), (y[2], y[3])
        a = mul(y1, z1)
        b = mul(y2, conj(z2))
        c = mul(y1, z2)
        d = mul(y2, conj(z1))
        return (a[0] + self.p * b[0], a[1] + self.p * b[1], c[0] + d[0], c[1] + d[1])


def _histogram(fn, mod: int) -> np.ndarray:
    """h[t] = #{(u, v) in (Z/mod)^2 : fn(u, v) = t mod mod}."""
    if mod * mod > PAIR_BUDGET:
        raise OracleError(f"enumeration of {mod}^2 pairs exceeds the budget")
    v = np.arange(mod, dtype=np.int64)
    hist = np.zeros(mod, dtype=np.int64)
    rows = max(1, _ROW_CHUNK // mod)
    for start in range(0, mod, rows):
        u = np.arange(start, min(start + rows, mod), dtype=np.int64)[:, None]
        vals = fn(u, v[None, :]) % mod
        hist += np.bincount(vals.ravel(), minlength=mod)
    return hist


@lru_cache(maxsize=None)
def _product_hist(p: int, k: int) -> np.ndarray:
    mod = p**k
    return _histogram(lambda u, v: (u * v) % mod, mod)


@lru_cache(maxsize=None)
def _norm_hist(model: OrderModel, k: int) -> np.ndarray:
    mod = model.p**k
    return _histogram(lambda u, v: model.binary_norm(u % mod, v) % mod, mod)


@lru_cache(maxsize=None)
def _value_hist(model: OrderModel, k: int):
    """(first, second) with q = first - second, as histograms mod p^k."""
    mod = model.p**k
    if model.kind == MATRIX:
        f = _product_hist(model.p, k)
        return f, f
    g = _norm_hist(model, k)
    second = np.zeros(mod, dtype=np.int64)
    np.add.at(second, (model.p * np.arange(mod, dtype=np.int64)) % mod, g)
    return g, second


def _dot(a: np.ndarray, b: np.ndarray) -> int:
    # object dtype keeps the products as Python ints
    return int(np.dot(a.astype(object), b.astype(object)))


def _count_exact_value(model: OrderModel, k: int, value: int) -> int:
    """#{x in (Z/p^k)^4 : q(x) = value mod p^k}."""
    mod = model.p**k
    first, second = _value_hist(model, k)
    # q = A - B = value  <=>  A = value + B
    idx = (value + np.arange(mod, dtype=np.int64)) % mod
    return _dot(first[idx], second)


def count_quadric(model: OrderModel, k: int, m: int, target: int = 0, units_only: bool = False) -> int:
    """#{x in (Z/p^k)^4 : q(x) = target mod p^m}, optionally with q(x) a unit mod p."""
    if m < 0 or k < m:
        raise ValueError(f"need k >= m >= 0 (got k={k}, m={m})")
    p = model.p
    if units_only and k == 0:
        raise ValueError("units need depth k >= 1")
    if units_only and m >= 1 and target % p == 0:
        return 0
    mod_k, mod_m = p**k, p**m
    total = 0
    for lift in range(target % mod_m, mod_k, mod_m):
        if units_only and lift % p == 0:
            continue
        total += _count_exact_value(model, k, lift)
    return total


def density(model: OrderModel, m: int, target: int, units_only: bool, check_depth: bool = True) -> Fraction:
    """Haar proportion of the order with q(x) = target mod p^m (m >= 1)."""
    p = model.p
    k = max(m, 1)
    d = Fraction(count_quadric(model, k, m, target, units_only), p ** (4 * k))
    if check_depth and p ** (2 * (k + 1)) <= STABILITY_BUDGET:
        d2 = Fraction(count_quadric(model, k + 1, m, target, units_only), p ** (4 * (k + 1)))
        if d2 != d:
            raise OracleError(f"density not stable in depth at p={p}, m={m}")
    return d


def _shell_volume(model: OrderModel, delta: int, r: int, n: int, units_only: bool) -> Fraction:
    """vol{x in support : q(x) - a in p^{n-delta}} for a = p^r."""
    p = model.p
    order_vol = Fraction(1, p ** (2 * delta)) * (Fraction(1, p) if model.kind == DIVISION else 1)
    m = n - delta
    if m <= 0:
        if r < m:
            return Fraction(0)
        return order_vol * (density(model, 0, 0, True) if units_only else 1)
    if r < 0:
        return Fraction(0)
    return order_vol * density(model, m, p**r, units_only)


def whittaker_oracle(spec: LocalWhittakerSpec, support: str = "auto"):
    """Local Whittaker value from counted shell volumes, exact at integer s >= 0.

    ``support`` selects the Schwartz function: "order" is the maximal order,
    "units" its unit group; "auto" uses the order for the matrix algebra and
    the units for the division algebra.
    """
    N, delta, r = spec.N, spec.delta, spec.r
    if not is_prime(N):
        raise ValueError("the oracle covers N = p only")
    s = spec.s
    if not isinstance(s, int) or s < 0:
        raise ValueError("the oracle needs an integer s >= 0")
    if not spec.u_unit:
        return Surd(0)
    model = OrderModel(spec.algebra, N)
    if support == "auto":
        support = "order" if spec.algebra == MATRIX else "units"
    units_only = support == "units"
    sign = 1 if spec.algebra == MATRIX else -1  # Weil index of the norm form
    n0 = max(r + delta + 1, 0)
    V = [_shell_volume(model, delta, r, n, units_only) for n in range(n0 + 2)]
    if V[n0 + 1] * N != V[n0]:
        raise OracleError(f"shell volumes not yet geometric at n={n0} (N={N}, delta={delta}, r={r})")
    Nf = Fraction(N)
    head = sum((Nf ** (-n * (s - 1)) * V[n] for n in range(n0)), Fraction(0))
    # (1 - N^-s) * sum_{n >= n0} N^{-n(s-1)} V_n0 N^{n0-n} collapses to one term
    value = (1 - Nf ** (-s)) * head + V[n0] * Nf ** (-n0 * (s - 1))
    return sign * half_power(N, -delta) * value


def hecke_cosets(p: int, r: int):
    """Hermite representatives [[a, b], [0, d]] with ad = p^r, 0 <= b < a."""
    if r < 0:
        raise ValueError("r must be >= 0")
    reps = []
    for i in range(r + 1):
        a, d = p**i, p ** (r - i)
        reps.extend(((a, b), (0, d)) for b in range(a))
    return reps


def hecke_coset_count(p: int, r: int) -> int:
    return len(hecke_cosets(p, r))


def sublattice_count_brute(p: int, r: int) -> int:
    """Subgroups of index p^r in (Z/p^r)^2, i.e. sublattices of Z^2 of index p^r."""
    mod = p**r
    elems = [(x, y) for x in range(mod) for y in range(mod)]
    seen = set()
    for g1 in elems:
        for g2 in elems:
            if g2 < g1:
                continue
            H = frozenset(((i * g1[0] + j * g2[0]) % mod, (i * g1[1] + j * g2[1]) % mod) for i in range(mod) for j in range(mod))
            if len(H) == mod:
                seen.add(H)
    return len(seen)


def unit_volume_check(p: int, depths=(1, 2)) -> VerificationReport:
    """Norm-one densities of both orders against the volumes used in the Siegel-Weil constants."""
    checks = []
    for k in depths:
        M = OrderModel(MATRIX, p)
        D = OrderModel(DIVISION, p)
        sl2 = Fraction(count_quadric(M, k, k, 1), p ** (3 * k))
        checks.append(exact_check(f"SL2 density p={p} k={k}", Surd(sl2), Surd(1 - Fraction(1, p * p))))
        d1 = Fraction(count_quadric(D, k, k, 1), p ** (3 * k)) / p  # vol(O_D) = 1/N
        checks.append(exact_check(f"norm-one division density p={p} k={k}", Surd(d1), Surd(Fraction(1, p) * (1 + Fraction(1, p)))))
    return VerificationReport("unit-volume", checks)
