"""The twelve acceptance criteria, each at its stated tolerance.

Every test records one line in the terminal summary, e.g.
``criterion 6: PASS  Legendre integral (max rel err 2.1e-15)``.
"""

import itertools
import math
import random
import time
from fractions import Fraction

import mpmath

from conftest import ACCEPTANCE_LINES
from modheight import arch_numerics as arch, heights, lfunc, local_nonarch as ln, padic_oracle as po
from modheight.exact import LogMultiple
from modheight.local_nonarch import DIVISION, MATRIX, LocalWhittakerSpec
from modheight.numberfield import NumberFieldData, RamificationSet, parse_field
from modheight.verify import ram_sets

PRIMES_13 = (2, 3, 5, 7, 11, 13)


def record(n: int, title: str, ok: bool, detail: str):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_01_local_oracle_equivalence():
    for fn in (po._product_hist, po._norm_hist, po._value_hist):
        fn.cache_clear()
    start = time.perf_counter()
    total = bad = 0
    for p, dl, s in itertools.product((2, 3, 5), (0, 1, 2), (1, 2, 3)):
        for r in range(-dl, 5):
            pairs = [(DIVISION, ln.whittaker_nonsplit)]
            if r >= 0:
                pairs.append((MATRIX, ln.whittaker_split))
            for algebra, closed in pairs:
                spec = LocalWhittakerSpec(p, dl, r, True, algebra, s)
                total += 1
                bad += closed(spec) != po.whittaker_oracle(spec)
    elapsed = time.perf_counter() - start
    record(1, "local oracle equivalence, exact", bad == 0 and elapsed < 60,
           f"{total - bad}/{total} exact matches, {elapsed:.1f} s")


def test_criterion_02_derivative_finite_differences():
    start = time.perf_counter()
    worst = 0.0
    ok = True
    for N, dl, r in itertools.product((2, 3, 5), (0, 1, 2), range(5)):
        (c,) = ln.deriv_combo_fd_check(N, dl, r, h=1e-5, tol=1e-6).checks
        worst = max(worst, c.abs_error)
        ok &= c.passed
    elapsed = time.perf_counter() - start
    record(2, "derivative combination vs finite differences", ok and elapsed < 5,
           f"max err {worst:.1e}, tol 1e-6, {elapsed:.2f} s")


def test_criterion_03_cancellation_and_alpha():
    ok = True
    count = 0
    for N, dl, r in itertools.product((2, 3, 5, 7), range(4), range(7)):
        ok &= ln.cancellation_split(N, dl, r).overall
        count += 1
    for N in (2, 3, 5, 7):
        alpha = 1 - Fraction(N - 1, 2 * (N + 1))
        for dl in range(4):
            ok &= ln.alpha_assembly(N, dl) == LogMultiple(alpha, N)
        q = Fraction(1, N * N)
        ok &= ln.alpha_constant(N) + 2 * q / (1 - q) + 1 == Fraction(3 * N - 1, 2 * (N - 1))
    record(3, "cancellation, alpha uniformity and local term identity", ok, f"{count} cancellation cases, 16 alpha cases, exact")


def test_criterion_04_hecke_counts():
    ok = True
    for p, r in itertools.product((2, 3, 5), range(6)):
        reps = po.hecke_cosets(p, r)
        distinct = len(set(reps)) == len(reps)
        ok &= distinct and len(reps) == sum(p**i for i in range(r + 1))
        for dl in range(3):
            ok &= ln.hecke_hodge_defect(p, dl, r) == ln.hecke_hodge_defect_zhang(p, dl, r)
    ok &= po.sublattice_count_brute(2, 3) == 15 and po.sublattice_count_brute(3, 2) == 13
    record(4, "Hecke coset counts and defect routes", ok, "p in {2,3,5}, r <= 5, exact")


def test_criterion_05_nonsplit_integral():
    ok = True
    for N, dl in itertools.product((2, 3, 5), range(3)):
        values = {ln.nonsplit_integral(N, dl, s) for s in (1, 2, 3)}
        ok &= len(values) == 1 and ln.nonsplit_integral_check(N, dl).overall
    record(5, "nonsplit integral independent of s", ok, "N in {2,3,5}, delta in {0,1,2}, exact")


def test_criterion_06_legendre_integral():
    worst = 0.0
    for s in (0.25, 0.5, 1.0, 2.0, 4.0):
        target = 1 / (s * (s + 1))
        worst = max(worst, abs(arch.legendre_q_integral(s) - target) / target)
    end_err = 0.0
    for s in (0.5, 1.0, 2.0):
        end_err = max(end_err, abs(arch.legendre_endpoint_terms(s, 1e-12) + 1), abs(arch.legendre_endpoint_terms(s, 10 ** (8 / s))))
    record(6, "Legendre integral and endpoint limits", worst < 1e-6 and end_err < 1e-6,
           f"max rel err {worst:.1e}, endpoint err {end_err:.1e}")


def test_criterion_07_holproj_and_gamma_ratio():
    e1 = abs(arch.holproj_constant_numeric() - (-0.5 * (1 + math.log(4))))
    e2 = abs(arch.holproj_constant_by_quadrature() - (-0.5 * (1 + math.log(4))))
    e3 = abs(arch.gamma_ratio_deriv_numeric() - (1 - lfunc.EULER_GAMMA - math.log(4 * math.pi)))
    record(7, "holomorphic projection constant and Gamma-ratio derivative", max(e1, e2, e3) < 1e-7,
           f"Laurent {e1:.1e}, quadrature {e2:.1e}, Gamma ratio {e3:.1e}")


def test_criterion_08_dual_route():
    worst, count = 0.0, 0
    for spec in ("Q", "Q(sqrt 2)", "Q(sqrt 5)"):
        F = parse_field(spec)
        for R in ram_sets(F, PRIMES_13, 3):
            d = abs(heights.modular_height(F, R).value - heights.modular_height_via_s2(F, R).value)
            worst = max(worst, d)
            count += 1
    record(8, "dual-route modular height", worst < 1e-8, f"{count} cases, max diff {worst:.1e}")


def test_criterion_09_kry():
    Q = NumberFieldData()
    worst, count = 0.0, 0
    for R in ram_sets(Q, PRIMES_13, len(PRIMES_13)):
        if not R.places:
            continue
        local = math.fsum((P.p + 1) / (4 * (P.p - 1)) * math.log(P.p) for P in R.places)
        kry_display = -lfunc.zeta_log_deriv_at_minus1(Q).value - 0.5 + local
        shifted = heights.modular_height(Q, R).value - 0.5 * math.log(R.d_B)
        worst = max(worst, abs(kry_display - shifted), abs(heights.kry_height(R) - shifted))
        count += 1
    record(9, "KRY consistency", worst < 1e-9, f"{count} even sets, max diff {worst:.1e}")


def test_criterion_10_bost_kuhn():
    Q = NumberFieldData()
    h = heights.modular_height(Q, RamificationSet(Q)).value
    mpmath.mp.dps = 30
    glaisher_route = float(-(-1 + 12 * mpmath.log(mpmath.glaisher)) - mpmath.mpf(1) / 2)
    mpmath.mp.dps = 15
    err = abs(h - glaisher_route)
    record(10, "Bost-Kuhn number vs Glaisher constant", err < 1e-8 and abs(h + 2.48505) < 1e-5,
           f"value {h:.10f}, diff {err:.1e}")


def test_criterion_11_kronecker():
    start = time.perf_counter()
    taus = (1j, 2j, complex(0.5, math.sqrt(3) / 2))
    worst = max(arch.kronecker_limit_residual(t) for t in taus)
    elapsed = time.perf_counter() - start
    record(11, "Kronecker limit residual", worst < 1e-6 and elapsed < 30, f"max residual {worst:.1e}, {elapsed:.2f} s")


def test_criterion_12_vigneras():
    Q = NumberFieldData()
    exact = heights.vigneras_degree(Q, RamificationSet.parse(Q, "2,3"), 1)
    rng = random.Random(12)
    fields = [Q] + [parse_field(f"Q(sqrt {D})") for D in (2, 3, 5, 6, 7, 13, 17, 21)]
    positives = 0
    for _ in range(20):
        F = rng.choice(fields)
        R = rng.choice(list(ram_sets(F, (2, 3, 5, 7, 11), 3)))
        deg = heights.vigneras_degree(F, R, rng.randint(1, 5))
        positives += isinstance(deg, Fraction) and deg > 0
    ok = isinstance(exact, Fraction) and exact == Fraction(1, 3) and positives == 20
    record(12, "Vigneras degree exactness and positivity", ok, f"(Q,{{2,3}}) -> {exact}, {positives}/20 positive")
