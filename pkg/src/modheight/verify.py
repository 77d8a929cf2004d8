"""Identity suites: run fixed grids of checks and collect them into one report."""

from __future__ import annotations

import itertools
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace
from fractions import Fraction

import mpmath

from . import __version__, arch_numerics as arch, heights, local_nonarch as ln, padic_oracle as po
from .exact import LogMultiple, Surd
from .numberfield import NumberFieldData, RamificationSet, parse_field, places_above
from .report import Check, VerificationReport, exact_check, float_check

__all__ = ["SUITES", "BudgetError", "SuiteConfig", "run_suite", "ram_sets", "versions"]

SUITES = ("local-oracle", "local-identities", "archimedean", "global", "all")


class BudgetError(ValueError):
    """The requested grid needs more enumeration than allowed."""


@dataclass(frozen=True)
class SuiteConfig:
    # local-oracle grid (N = p)
    oracle_primes: tuple = (2, 3, 5)
    oracle_deltas: tuple = (0, 1, 2)
    oracle_rs: tuple = (0, 1, 2, 3, 4)
    oracle_s: tuple = (1, 2, 3)
    max_depth: int | None = None
    # local identities
    identity_primes: tuple = (2, 3, 5, 7)
    identity_deltas: tuple = (0, 1, 2, 3)
    identity_rs: tuple = (0, 1, 2, 3, 4, 5, 6)
    hecke_primes: tuple = (2, 3, 5)
    hecke_max_r: int = 5
    # archimedean
    legendre_s: tuple = (0.5, 1.0, 2.0)
    legendre_t: tuple = (1.1, 2.0, 10.0, 100.0)
    integral_s: tuple = (0.25, 0.5, 1.0, 2.0, 4.0)
    whittaker_a: tuple = (0.5, 1.0, 2.0)
    whittaker_s: tuple = (0.001, 0.3, 1.0)
    taus: tuple = (1j, 2j, complex(0.5, math.sqrt(3) / 2))
    # global
    fields: tuple = ("Q", "Q(sqrt 2)", "Q(sqrt 5)")
    height_primes: tuple = (2, 3, 5, 7, 11, 13)
    max_ramified: int = 3
    vigneras_samples: int = 20
    seed: int = 0
    prec: float = 1e-10
    threads: int = 1

    @classmethod
    def empty(cls) -> "SuiteConfig":
        """Every grid empty: suites produce no checks."""
        blank = {f.name: () for f in fields(cls) if f.type == "tuple"}
        return cls(**blank, hecke_max_r=-1, vigneras_samples=0)

    def with_primes(self, primes) -> "SuiteConfig":
        primes = tuple(primes)
        return replace(
            self,
            oracle_primes=primes,
            identity_primes=primes,
            hecke_primes=primes,
            height_primes=primes,
        )


def versions() -> dict:
    import numpy
    import scipy

    return {"modheight": __version__, "numpy": numpy.__version__, "scipy": scipy.__version__, "mpmath": mpmath.__version__}


def _map(fn, items, threads: int):
    items = list(items)
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(threads) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def _collect(name: str, parts) -> VerificationReport:
    checks: list[Check] = []
    for part in parts:
        checks.extend(part.checks if isinstance(part, VerificationReport) else part)
    return VerificationReport(name, checks, versions())


# -- local oracle --------------------------------------------------------------

def _oracle_depth(delta: int, r: int) -> int:
    # shells up to n0 + 1 = r + delta + 2, i.e. congruences mod p^(r + 2)
    return max(r + 2, 1)


def _check_budget(cfg: SuiteConfig):
    for p, dl, r in itertools.product(cfg.oracle_primes, cfg.oracle_deltas, cfg.oracle_rs):
        k = _oracle_depth(dl, r)
        if cfg.max_depth is not None and k > cfg.max_depth:
            raise BudgetError(f"grid point p={p}, delta={dl}, r={r} needs depth {k} > max depth {cfg.max_depth}")
        if p ** (2 * k) > po.PAIR_BUDGET:
            raise BudgetError(f"grid point p={p}, delta={dl}, r={r} needs {p}^{2 * k} pairs")


def _oracle_point(args) -> list[Check]:
    p, dl, r, s = args
    out = []
    for algebra, closed in ((ln.MATRIX, ln.whittaker_split), (ln.DIVISION, ln.whittaker_nonsplit)):
        spec = ln.LocalWhittakerSpec(p, dl, r, True, algebra, s)
        out.append(exact_check(f"oracle {algebra} N={p} delta={dl} r={r} s={s}", closed(spec), po.whittaker_oracle(spec)))
    return out


def _oracle_negative(args) -> list[Check]:
    # -delta <= r < 0: no split closed form; the division closed form still applies
    p, dl, r, s = args
    spec = ln.LocalWhittakerSpec(p, dl, r, True, ln.DIVISION, s)
    return [exact_check(f"oracle division N={p} delta={dl} r={r} s={s}", ln.whittaker_nonsplit(spec), po.whittaker_oracle(spec))]


def local_oracle(cfg: SuiteConfig) -> VerificationReport:
    _check_budget(cfg)
    grid = list(itertools.product(cfg.oracle_primes, cfg.oracle_deltas, cfg.oracle_rs, cfg.oracle_s))
    neg = [(p, dl, r, s) for p, dl, s in itertools.product(cfg.oracle_primes, cfg.oracle_deltas, cfg.oracle_s)
           for r in range(-dl, 0)]
    parts = _map(_oracle_point, grid, cfg.threads) + _map(_oracle_negative, neg, cfg.threads)
    for p in cfg.oracle_primes:
        parts.append(po.unit_volume_check(p, depths=(1, 2) if p < 5 else (1,)))
    return _collect("local-oracle", parts)


# -- local identities ------------------------------------------------------------

def _hecke_checks(p: int, r: int) -> list[Check]:
    sigma = sum(p**i for i in range(r + 1))
    checks = [exact_check(f"hecke-cosets p={p} r={r}", Surd(po.hecke_coset_count(p, r)), Surd(sigma))]
    if p**r <= 8:
        checks.append(exact_check(f"hecke-sublattices p={p} r={r}", Surd(po.sublattice_count_brute(p, r)), Surd(sigma)))
    return checks


def local_identities(cfg: SuiteConfig) -> VerificationReport:
    parts = []
    for N, dl, r in itertools.product(cfg.identity_primes, cfg.identity_deltas, cfg.identity_rs):
        parts.append(ln.cancellation_split(N, dl, r))
        parts.append([exact_check(f"defect-routes N={N} delta={dl} r={r}",
                                  ln.hecke_hodge_defect(N, dl, r), ln.hecke_hodge_defect_zhang(N, dl, r))])
    for N in cfg.identity_primes:
        alpha = 1 - Fraction(N - 1, 2 * (N + 1))
        parts.append([exact_check(f"alpha-assembly N={N} delta={dl}", ln.alpha_assembly(N, dl), LogMultiple(alpha, N))
                      for dl in cfg.identity_deltas])
        parts.append([exact_check(f"local-term N={N}", Surd(2 * ln.local_term_coefficient(N)),
                                  Surd(Fraction(3 * N - 1, 2 * (N - 1))))])
        A0, _ = ln.component_weights(N)
        graphs = [("K", ln.complete_bipartite(N + 1))]
        if N <= 3:
            graphs.append(("P2", ln.projective_plane_incidence(N)))
        for tag, (adj, even) in graphs:
            G0, _ = ln.dual_graph_weights(adj, even)
            parts.append([exact_check(f"dual-graph {tag} N={N}", Surd(G0), Surd(A0))])
        for dl in cfg.identity_deltas:
            parts.append([exact_check(f"kbar-shells N={N} delta={dl}", ln.averaged_kbar_sum(N, dl), ln.averaged_kbar_w(N, dl))])
    for N in [p for p in cfg.identity_primes if p <= 5]:
        for dl in [d for d in cfg.identity_deltas if d <= 2]:
            parts.append(ln.fourier_inversion_check(N, dl))
            parts.append(ln.nonsplit_integral_check(N, dl))
            parts.append(ln.intertwining_series_check(N, dl))
            for r in [r for r in cfg.identity_rs if r <= 4]:
                parts.append(ln.deriv_combo_fd_check(N, dl, r))
            parts.append(_siegel_weil_checks(N, dl, [r for r in cfg.identity_rs if r <= 4]))
    for p in cfg.hecke_primes:
        for r in range(cfg.hecke_max_r + 1):
            parts.append(_hecke_checks(p, r))
    return _collect("local-identities", parts)


def _siegel_weil_checks(N: int, delta: int, rs) -> list[Check]:
    checks = []
    for r in rs:
        checks.append(exact_check(
            f"siegel-weil matrix N={N} delta={delta} r={r}",
            ln.whittaker_split(ln.LocalWhittakerSpec(N, delta, r, True, ln.MATRIX, 0)),
            ln.siegel_weil_whittaker(N, delta, r, ln.MATRIX),
        ))
    checks.append(exact_check(
        f"siegel-weil division N={N} delta={delta} r=0",
        ln.whittaker_nonsplit(ln.LocalWhittakerSpec(N, delta, 0, True, ln.DIVISION, 0)),
        ln.siegel_weil_whittaker(N, delta, 0, ln.DIVISION),
    ))
    return checks


# -- archimedean -----------------------------------------------------------------

def _guard(label: str, fn) -> Check:
    """Run a self-checking routine; a raised disagreement becomes a failed check."""
    try:
        value = fn()
        return Check(label, value, value, 0.0, 0.0, True)
    except ArithmeticError:
        return Check(label, math.nan, math.nan, math.inf, 0.0, False)


def archimedean(cfg: SuiteConfig) -> VerificationReport:
    checks = []
    for s, t in itertools.product(cfg.legendre_s, cfg.legendre_t):
        checks.append(float_check(f"legendre-routes s={s} t={t}", arch.legendre_q_integral_route(s, t),
                                  arch.legendre_q_hyper_route(s, t), arch.LEGENDRE_TOL))
    for s in cfg.integral_s:
        checks.append(float_check(f"legendre-integral s={s}", arch.legendre_q_integral(s), 1 / (s * (s + 1)), 1e-6, relative=True))
    for s in cfg.legendre_s:
        checks.append(float_check(f"green-endpoint t->1 s={s}", arch.legendre_endpoint_terms(s, 1e-12), -1.0, 1e-6))
        checks.append(float_check(f"green-endpoint t->inf s={s}", arch.legendre_endpoint_terms(s, 10 ** (8 / s)), 0.0, 1e-6))
    if cfg.integral_s:
        checks.append(_guard("green-residue-constant", lambda: arch.green_residue_constant()[1]))
        checks.append(float_check("holproj laurent", arch.holproj_constant_numeric(), arch.HOLPROJ_CLOSED, 1e-7))
        checks.append(float_check("holproj quadrature", arch.holproj_constant_by_quadrature(), arch.HOLPROJ_CLOSED, 1e-7))
        checks.append(float_check("gamma-ratio-deriv", arch.gamma_ratio_deriv_numeric(), arch.GAMMA_RATIO_CLOSED, 1e-8))
    for a in cfg.whittaker_a:
        for s in cfg.whittaker_s:
            checks.append(float_check(f"arch-whittaker a={a} s={s}", arch.arch_whittaker(a, s),
                                      arch.arch_whittaker_analytic(a, s), 1e-7))
        h = 1e-5
        fd = (arch.arch_whittaker_analytic(a, h) - arch.arch_whittaker_analytic(a, -h)) / (2 * h)
        checks.append(float_check(f"arch-whittaker-deriv a={a}", arch.arch_whittaker_deriv0(a)[1], fd, 1e-5))
        checks.append(float_check(f"arch-whittaker-value a={a}", arch.arch_whittaker_deriv0(a)[0],
                                  arch.arch_whittaker_analytic(a, 0.0), 1e-7))
    for tau in cfg.taus:
        checks.append(float_check(f"eisenstein-fourier tau={_fmt_tau(tau)}", arch.eisenstein_fourier(tau, 3.0),
                                  arch.eisenstein_lattice_sum(tau, 3.0, 120), 1e-6))
    return _collect("archimedean", [checks])


def _fmt_tau(tau: complex) -> str:
    return f"{tau.real:.6g}{tau.imag:+.6g}i"


# -- global ------------------------------------------------------------------------

def ram_sets(F: NumberFieldData, primes, max_size: int):
    """All ramification sets over ``primes`` of size <= max_size with valid parity."""
    places = [P for p in primes for P in places_above(F, p)]
    for k in range(max_size + 1):
        if (k + F.degree) % 2 == 0:
            continue
        for combo in itertools.combinations(places, k):
            yield RamificationSet(F, combo)


def _random_fundamental(rng: random.Random) -> NumberFieldData:
    while True:
        D = rng.randint(2, 60)
        try:
            return NumberFieldData(D)
        except ValueError:
            continue


def global_suite(cfg: SuiteConfig) -> VerificationReport:
    checks = []
    for spec in cfg.fields:
        F = parse_field(spec)
        for ram in ram_sets(F, cfg.height_primes, cfg.max_ramified):
            a = heights.modular_height(F, ram, cfg.prec).value
            b = heights.modular_height_via_s2(F, ram, cfg.prec).value
            checks.append(float_check(f"dual-route {spec} [{ram}]", a, b, 1e-8))
    if "Q" in cfg.fields or cfg.height_primes:
        Q = NumberFieldData()
        for ram in ram_sets(Q, cfg.height_primes, len(cfg.height_primes)):
            if not ram.places:
                continue
            direct = heights.kry_height(ram, cfg.prec)
            shifted = heights.modular_height(Q, ram, cfg.prec).value - 0.5 * math.log(ram.d_B)
            checks.append(float_check(f"kry Q [{ram}]", direct, shifted, heights.KRY_TOL))
    if cfg.fields:
        Q = NumberFieldData()
        bk = heights.modular_height(Q, RamificationSet(Q), cfg.prec).value
        mpmath.mp.dps = 30
        glaisher = float(-1 + 12 * mpmath.log(mpmath.glaisher))  # zeta'(-1)/zeta(-1)
        mpmath.mp.dps = 15
        checks.append(float_check("bost-kuhn glaisher", bk, -glaisher - 0.5, 1e-8))
        two_three = RamificationSet.parse(Q, "2,3")
        checks.append(exact_check("vigneras Q [2,3]", Surd(heights.vigneras_degree(Q, two_three)), Surd(Fraction(1, 3))))
    rng = random.Random(cfg.seed)
    for i in range(cfg.vigneras_samples):
        F = NumberFieldData() if rng.random() < 0.25 else _random_fundamental(rng)
        options = list(ram_sets(F, (2, 3, 5, 7, 11), 3))
        ram = rng.choice(options)
        h = rng.randint(1, 4)
        deg = heights.vigneras_degree(F, ram, h)
        shortfall = 0.0 if deg > 0 else math.inf
        checks.append(Check(f"vigneras-positive #{i:02d} {F} [{ram}] h={h}", deg, Fraction(0), shortfall, 0.0, deg > 0))
    for tau in cfg.taus:
        res = arch.kronecker_limit_residual(tau)
        checks.append(float_check(f"kronecker tau={_fmt_tau(tau)}", res, 0.0, 1e-6))
    return _collect("global", [checks])


_RUNNERS = {
    "local-oracle": local_oracle,
    "local-identities": local_identities,
    "archimedean": archimedean,
    "global": global_suite,
}


def run_suite(name: str, config: SuiteConfig | None = None) -> VerificationReport:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    cfg = config or SuiteConfig()
    if name == "all":
        parts = [_RUNNERS[n](cfg) for n in SUITES[:-1]]
        return _collect("all", parts)
    return _RUNNERS[name](cfg)
