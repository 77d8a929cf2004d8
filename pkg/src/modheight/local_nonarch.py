"""Closed-form local quantities at a finite place.

All values are exact elements of Q(sqrt N) (as `Surd`) when the evaluation
point s is rational with |d|^s landing in that field, and floats otherwise.
Quantities that are multiples of log N are returned as `LogMultiple`, so the
cancellation and assembly identities can be checked with zero tolerance.

Notation: |d| = N^-delta is the absolute value of the local different and
|a| = N^-r.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import LogMultiple, Surd, half_power
from .numberfield import is_prime
from .report import VerificationReport, exact_check, float_check

__all__ = [
    "MATRIX",
    "DIVISION",
    "UnsupportedClosedForm",
    "LocalWhittakerSpec",
    "npow",
    "whittaker_split",
    "whittaker_nonsplit",
    "whittaker",
    "whittaker_split_deriv_combo",
    "deriv_combo_fd_check",
    "nonsplit_unit_volume",
    "nonsplit_integral",
    "nonsplit_integral_check",
    "siegel_weil_whittaker",
    "wall_crossing_pair",
    "fourier_inversion_check",
    "intertwining_w_value",
    "averaged_kbar_w",
    "averaged_kbar_sum",
    "averaged_j_w",
    "component_weights",
    "dual_graph_weights",
    "hecke_hodge_defect",
    "hecke_hodge_defect_zhang",
    "cancellation_split",
    "alpha_constant",
    "alpha_assembly",
    "local_term_coefficient",
    "local_zeta_log_deriv_at2",
    "intertwining_series_check",
    "complete_bipartite",
    "projective_plane_incidence",
]

MATRIX = "matrix"
DIVISION = "division"


class UnsupportedClosedForm(ValueError):
    """No closed form is available here; use padic_oracle.whittaker_oracle."""


def _check_N(N: int):
    if N < 2:
        raise ValueError(f"N = {N} must be a prime power >= 2")
    p = next(q for q in range(2, N + 1) if N % q == 0)
    m = N
    while m % p == 0:
        m //= p
    if m != 1 or not is_prime(p):
        raise ValueError(f"N = {N} is not a prime power")


def npow(N: int, e):
    """N**e, exact whenever e is an integer or half-integer."""
    if isinstance(e, float):
        return float(N) ** e
    e = Fraction(e)
    if e.denominator == 1:
        return Surd(Fraction(N) ** e.numerator)
    if e.denominator == 2:
        return half_power(N, e.numerator)
    return float(N) ** float(e)


def _geom(N: int, step, count: int):
    """sum_{n < count} N**(n*step)."""
    return sum((npow(N, n * step) for n in range(count)), Surd(0))


def _s_value(s):
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    return float(s)


@dataclass(frozen=True)
class LocalWhittakerSpec:
    N: int
    delta: int = 0
    r: int = 0
    u_unit: bool = True
    algebra: str = MATRIX
    s: object = 0

    def __post_init__(self):
        _check_N(self.N)
        if self.delta < 0:
            raise ValueError("delta must be >= 0")
        if self.algebra not in (MATRIX, DIVISION):
            raise ValueError(f"algebra must be {MATRIX!r} or {DIVISION!r}")

    @property
    def abs_d(self) -> Fraction:
        return Fraction(1, self.N**self.delta)

    @property
    def abs_a(self) -> Fraction:
        return Fraction(self.N) ** (-self.r)

    def at(self, s) -> "LocalWhittakerSpec":
        return LocalWhittakerSpec(self.N, self.delta, self.r, self.u_unit, self.algebra, s)


def whittaker_split(spec: LocalWhittakerSpec):
    N, dl, r = spec.N, spec.delta, spec.r
    if spec.algebra != MATRIX:
        raise ValueError("whittaker_split needs the matrix algebra")
    if not spec.u_unit or r < -dl:
        return Surd(0)
    if r < 0:
        raise UnsupportedClosedForm(
            f"no closed form for -delta <= r < 0 (r={r}); use padic_oracle.whittaker_oracle"
        )
    s = _s_value(spec.s)
    first = npow(N, -dl * (s + Fraction(3, 2))) * (1 - npow(N, -(s + 2))) * _geom(N, -(s + 1), r + 1)
    second = npow(N, Fraction(-5 * dl, 2)) * (1 - npow(N, -s)) * _geom(N, -(s - 1), dl)
    return first + second


def nonsplit_unit_volume(N: int, delta: int) -> Fraction:
    return Fraction(1, N ** (2 * delta)) * Fraction(1, N) * (1 - Fraction(1, N * N))


def whittaker_nonsplit(spec: LocalWhittakerSpec):
    N, dl, r = spec.N, spec.delta, spec.r
    if spec.algebra != DIVISION:
        raise ValueError("whittaker_nonsplit needs the division algebra")
    if not spec.u_unit or r < -dl:
        return Surd(0)
    s = _s_value(spec.s)
    scale = -half_power(N, -dl) * nonsplit_unit_volume(N, dl)
    top = r + dl if r < 0 else dl
    value = (1 - npow(N, -s)) * _geom(N, 1 - s, top + 1)
    if r == 0:
        # unit a: the norm-u fibres keep contributing past n = delta
        value = value + npow(N, (dl + 1) * (1 - s)) / (N - 1)
    return scale * value


def whittaker(spec: LocalWhittakerSpec):
    return whittaker_split(spec) if spec.algebra == MATRIX else whittaker_nonsplit(spec)


def local_zeta_log_deriv_at2(N: int) -> LogMultiple:
    """zeta_v'(2)/zeta_v(2) for zeta_v(s) = (1 - N^-s)^-1."""
    q = Fraction(1, N * N)
    return LogMultiple(-q / (1 - q), N)


def _bracket(N: int, r: int) -> Fraction:
    n = Fraction(N)
    return (r + 2) * n ** (-(r + 1)) - r * n ** (-(r + 2)) - (r + 2) / n + r


def whittaker_split_deriv_combo(N: int, delta: int, r: int) -> LogMultiple:
    """W'(0) - (1/2) log|a| W(0) for the split Whittaker function."""
    _check_N(N)
    if r < 0:
        raise UnsupportedClosedForm("derivative combination needs r >= 0")
    W0 = whittaker_split(LocalWhittakerSpec(N, delta, r, True, MATRIX, 0))
    d32 = half_power(N, -3 * delta)
    abs_d = Fraction(1, N**delta)
    n = Fraction(N)
    first = (-local_zeta_log_deriv_at2(N) - LogMultiple(delta, N)) * W0
    middle = LogMultiple(d32 * ((1 + 1 / n) / (2 * (1 - 1 / n))) * _bracket(N, r), N)
    last = LogMultiple(d32 * ((1 - abs_d) / (n - 1)), N)
    return first + middle + last


def deriv_combo_fd_check(N: int, delta: int, r: int, h: float = 1e-5, tol: float = 1e-6) -> VerificationReport:
    """Central difference of the closed form in s at 0 against the exact derivative combination."""
    spec = LocalWhittakerSpec(N, delta, r, True, MATRIX)
    fd = (float(whittaker_split(spec.at(h))) - float(whittaker_split(spec.at(-h)))) / (2 * h)
    # -(1/2) log|a| = (r/2) log N
    fd += 0.5 * r * math.log(N) * float(whittaker_split(spec.at(0)))
    combo = float(whittaker_split_deriv_combo(N, delta, r))
    return VerificationReport("deriv-combo", [float_check(f"deriv-combo-fd N={N} delta={delta} r={r}", combo, fd, tol)])


def nonsplit_integral(N: int, delta: int, s):
    """Integral over a of W(s, 1, u) for the division algebra."""
    d_half = half_power(N, -delta)
    w = lambda r: whittaker_nonsplit(LocalWhittakerSpec(N, delta, r, True, DIVISION, s))
    n = Fraction(N)
    total = w(1) / n + w(0) * (1 - 1 / n)
    for r in range(-delta, 0):
        total = total + w(r) * n ** (-r) * (1 - 1 / n)
    return d_half * total


def nonsplit_integral_check(N: int, delta: int, s_values=(1, 2, 3)) -> VerificationReport:
    _check_N(N)
    target = -nonsplit_unit_volume(N, delta)
    checks = [
        exact_check(f"nonsplit-integral N={N} delta={delta} s={s}", nonsplit_integral(N, delta, s), Surd(target))
        for s in s_values
    ]
    return VerificationReport("nonsplit-integral", checks)


def siegel_weil_whittaker(N: int, delta: int, r: int, algebra: str, u_unit: bool = True):
    """W(0) on the maximal order: orbital volume of the norm-a locus."""
    _check_N(N)
    if r < 0 or not u_unit:
        return Surd(0)
    d32 = half_power(N, -3 * delta)
    n = Fraction(N)
    abs_a = n ** (-r)
    base = d32 * (1 / n) * (1 + 1 / n)
    if algebra == DIVISION:
        return -base * abs_a
    if algebra == MATRIX:
        return base * (n - abs_a)
    raise ValueError(f"unknown algebra {algebra!r}")


def wall_crossing_pair(N: int, delta: int):
    """Coefficients of the matrix and division indicators whose Whittaker images sum to 1."""
    _check_N(N)
    c = half_power(N, 3 * delta) / (1 + Fraction(1, N))
    return c, -c


def fourier_inversion_check(N: int, delta: int) -> VerificationReport:
    """Values at w of the wall-crossing preimage against the volume of O."""
    c_plus, c_minus = wall_crossing_pair(N, delta)
    abs_d = Fraction(1, N**delta)
    rw_matrix = Surd(abs_d**2)  # Weil index +1 on the matrix algebra
    rw_division = Surd(-abs_d**2 / N)  # Weil index -1, vol(O_D) = |d|^2 / N
    lhs = c_plus * rw_matrix + c_minus * rw_division
    rhs = half_power(N, -delta)
    checks = [exact_check(f"fourier-inversion N={N} delta={delta}", lhs, rhs)]
    for r in range(0, 4):
        sw = c_plus * siegel_weil_whittaker(N, delta, r, MATRIX) + c_minus * siegel_weil_whittaker(
            N, delta, r, DIVISION
        )
        checks.append(exact_check(f"wall-crossing N={N} delta={delta} r={r}", sw, Surd(1)))
    return VerificationReport("fourier-inversion", checks)


def intertwining_w_value(N: int, delta: int):
    """(r(w)phi(0,u), c_phi(w,0,u)/r(w)phi(0,u)) for the nonsplit unit indicator."""
    _check_N(N)
    w_phi = -nonsplit_unit_volume(N, delta)
    ratio = Fraction(1 - N, 1 + N) if delta % 2 == 0 else Fraction(0)
    return w_phi, LogMultiple(ratio, N)


def averaged_kbar_w(N: int, delta: int) -> LogMultiple:
    """r(w)kbar(0,u) / r(w)phi(0,u)."""
    _check_N(N)
    n = Fraction(N)
    if delta % 2 == 0:
        return LogMultiple(-(n / (n + 1) + Fraction(delta, 2)), N)
    return LogMultiple(-Fraction(delta + 1, 2), N)


def averaged_kbar_sum(N: int, delta: int) -> LogMultiple:
    """Same ratio, summed shell by shell over the even valuations -delta <= 2i < 0."""
    n = Fraction(N)
    abs_d = n ** (-delta)
    total = (n - abs_d) / (n * n - 1)
    for i in range(-(delta // 2), 0):
        total += (n * n ** (2 * i) - abs_d) / (n * n - 1) * (1 - n**-2) * n ** (-2 * i)
    return LogMultiple(-n * total, N)


def averaged_j_w(N: int, delta: int = 0):
    """(r(w)l(0,u) / r(w)phi(0,u), integral of l(y,u) dy)."""
    _check_N(N)
    n = Fraction(N)
    ratio = -(n - 1) / (4 * (n + 1))
    integral = Fraction(1, 4) * n ** (-2 * delta) / n * (1 - 1 / n) ** 2
    return ratio, integral


def component_weights(N: int):
    """Solve A0 + A1 = 0 and (N+1)(A0 - A1) = 1/2."""
    _check_N(N)
    # Cramer on [[1, 1], [N+1, -(N+1)]] (A0, A1) = (0, 1/2)
    a11, a12, b1 = 1, 1, Fraction(0)
    a21, a22, b2 = N + 1, -(N + 1), Fraction(1, 2)
    det = a11 * a22 - a12 * a21
    A0 = (b1 * a22 - a12 * b2) / det
    A1 = (a11 * b2 - a21 * b1) / det
    return A0, A1


def dual_graph_weights(adjacency, even, root=0):
    """Weights a_i on the components of a regular dual graph.

    Solves sum_i a_i (C_i . C_j) = 1/V - [j == root] with sum_i a_i = 0, where
    C_i . C_i = -degree and C_i . C_j counts edges.  Returns (A_even, A_odd),
    the total weight on each side of the bipartition.
    """
    V = len(adjacency)
    deg = [sum(row) for row in adjacency]
    M = [[Fraction(-deg[i]) if i == j else Fraction(adjacency[i][j]) for j in range(V)] for i in range(V)]
    # the constant vector spans the kernel, so swap one equation for sum a_i = 0
    rows = [M[j][:] + [Fraction(1, V) - (1 if j == root else 0)] for j in range(V)]
    rows[-1] = [Fraction(1)] * V + [Fraction(0)]
    a = _solve(rows)
    A_even = sum(a[i] for i in range(V) if even[i])
    A_odd = sum(a[i] for i in range(V) if not even[i])
    return A_even, A_odd


def _solve(aug):
    n = len(aug)
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


def _sigma1(N: int, r: int) -> int:
    return sum(N**i for i in range(r + 1))


def hecke_hodge_defect_zhang(N: int, delta: int, r: int) -> LogMultiple:
    """Defect rebuilt from T(p^r)L - sigma_1(p^r)L summed over Hecke cosets."""
    n = Fraction(N)
    raw = -2 * sum(i * N ** (r - i) for i in range(r + 1)) + r * _sigma1(N, r)
    return LogMultiple(half_power(N, -3 * delta) * (1 - n**-2) * n ** (-r) * raw, N)


def hecke_hodge_defect(N: int, delta: int, r: int, u_unit: bool = True) -> LogMultiple:
    _check_N(N)
    if r < 0 or not u_unit:
        return LogMultiple(0, N)
    n = Fraction(N)
    value = LogMultiple(half_power(N, -3 * delta) * ((1 + 1 / n) / (1 - 1 / n)) * _bracket(N, r), N)
    zhang = hecke_hodge_defect_zhang(N, delta, r)
    if value != zhang:
        raise AssertionError(f"defect routes disagree at N={N}, delta={delta}, r={r}")
    return value


def cancellation_split(N: int, delta: int, r: int) -> VerificationReport:
    """Derivative combination minus half the Hecke defect leaves only the zeta and different terms."""
    combo = whittaker_split_deriv_combo(N, delta, r)
    lhs = combo - hecke_hodge_defect_zhang(N, delta, r) * Fraction(1, 2)
    W0 = whittaker_split(LocalWhittakerSpec(N, delta, r, True, MATRIX, 0))
    abs_d = Fraction(1, N**delta)
    rhs = (-local_zeta_log_deriv_at2(N) - LogMultiple(delta, N)) * W0 + LogMultiple(
        half_power(N, -3 * delta) * (1 - abs_d) / (N - 1), N
    )
    return VerificationReport("cancellation-split", [exact_check(f"cancellation N={N} delta={delta} r={r}", lhs, rhs)])


def alpha_assembly(N: int, delta: int) -> LogMultiple:
    """-2 kbar + 2 l log N + c, each divided by r(w)phi(0,u), minus the delta log N part."""
    _, c_ratio = intertwining_w_value(N, delta)
    j_ratio, _ = averaged_j_w(N, delta)
    total = averaged_kbar_w(N, delta) * -2 + LogMultiple(2 * j_ratio, N) + c_ratio
    return total - LogMultiple(delta, N)


def alpha_constant(N: int, deltas=(0, 1, 2, 3)) -> Fraction:
    _check_N(N)
    alpha = 1 - Fraction(N - 1, 2 * (N + 1))
    for dl in deltas:
        got = alpha_assembly(N, dl)
        if got != LogMultiple(alpha, N):
            raise AssertionError(f"assembly at N={N}, delta={dl} gives {got}, expected {alpha}")
    return alpha


def local_term_coefficient(N: int) -> Fraction:
    """Coefficient of log N contributed by a ramified place: (alpha + 2N^-2/(1-N^-2) + 1) / 2."""
    q = Fraction(1, N * N)
    return (alpha_constant(N) + 2 * q / (1 - q) + 1) / 2


def complete_bipartite(k: int):
    """Adjacency of K_{k,k} with the first k vertices on the even side."""
    V = 2 * k
    adj = [[1 if (i < k) != (j < k) else 0 for j in range(V)] for i in range(V)]
    return adj, [i < k for i in range(V)]


def projective_plane_incidence(p: int):
    """Point-line incidence graph of P^2(F_p): (p+1)-regular and bipartite."""
    pts = []
    for v in itertools.product(range(p), repeat=3):
        if any(v):
            first = next(x for x in v if x)
            inv = pow(first, -1, p)
            w = tuple(x * inv % p for x in v)
            if w not in pts:
                pts.append(w)
    k = len(pts)
    V = 2 * k
    adj = [[0] * V for _ in range(V)]
    for i, P in enumerate(pts):
        for j, L in enumerate(pts):
            if sum(a * b for a, b in zip(P, L)) % p == 0:
                adj[i][k + j] = adj[k + j][i] = 1
    return adj, [i < k for i in range(V)]


def _intertwining_series(N: int, delta: int, s: int) -> Fraction:
    # sum_n N^{n(1-s)} vol(D_n), vol(D_n) = N^{-2 floor((n-delta)/2)} |d q(j)|, v(q(j)) = 1
    n_ = Fraction(N)
    term = lambda n: n_ ** (n * (1 - s)) * n_ ** (-2 * ((n - delta) // 2)) * n_ ** (-delta - 1)
    head = sum((term(n) for n in range(delta)), Fraction(0))
    # from n = delta on, each pair of terms shrinks by N^{-2s}
    return head + (term(delta) + term(delta + 1)) / (1 - n_ ** (-2 * s))


def _intertwining_closed(N: int, delta: int, s):
    n_ = Fraction(N) if not isinstance(s, float) else float(N)
    if delta % 2 == 0:
        return n_**-1 * (1 + n_ ** (1 - s)) / (1 - n_ ** (-2 * s))
    return (1 + n_ ** (-1 - s)) / (1 - n_ ** (-2 * s))


def intertwining_series_check(N: int, delta: int, s_values=(1, 2, 3), h: float = 1e-5) -> VerificationReport:
    """Shell sum against its closed form, and the derivative ratio against a central difference."""
    checks = [
        exact_check(
            f"intertwining-series N={N} delta={delta} s={s}",
            Surd(_intertwining_series(N, delta, s)),
            Surd(_intertwining_closed(N, delta, s)),
        )
        for s in s_values
    ]

    def normalized(s):
        # (1 - N^{-2s}) / (1 + N^{-(s+1)}) times the shell sum, divided by |d q(j)|
        return (1 - N ** (-2 * s)) / (1 + N ** (-(s + 1))) * _intertwining_closed(N, delta, s) * N ** (delta + 1)

    fd = (math.log(normalized(h)) - math.log(normalized(-h))) / (2 * h)
    _, c_ratio = intertwining_w_value(N, delta)
    checks.append(float_check(f"intertwining-derivative N={N} delta={delta}", fd, float(c_ratio), 1e-8))
    return VerificationReport("intertwining", checks)
