"""Exit criteria, one test each.

Every test prints a single ``ACCEPTANCE <n> ... PASS|FAIL`` line, visible even
under output capture.
"""

import math
import random
import time

import pytest

from pifunc.analysis import (
    TABLE_ONE,
    LimitPolicy,
    asympt_linear,
    asympt_sqrt,
    check_doubling,
    check_h_reflection,
    check_pi_reflection,
    find_minimum,
    machin_pi_digits,
    matching_digits,
    pi_limit,
    ratio_convergence,
    ulp_distance,
)
from pifunc.backends import BigFixedBackend
from pifunc.bigfixed import frac_bits_for
from pifunc.cli import main
from pifunc.radical_core import pi_diff_estimate, pi_value


@pytest.fixture
def verdict(capsys):
    def report(number, title, ok, detail=""):
        with capsys.disabled():
            print(f"\nACCEPTANCE {number:>2} {title}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, f"criterion {number} failed: {detail}"

    return report


def test_01_table_one(verdict):
    t0 = time.perf_counter()
    worst = max(abs(pi_value(x, 50) - v) / v for x, v in TABLE_ONE)
    elapsed = time.perf_counter() - t0
    verdict(1, "Table-1 reproduction", worst <= 1e-6 and elapsed < 1.0, f"max rel dev {worst:.2e}, {elapsed * 1000:.1f} ms")


def test_02_viete_digits(verdict, capsys):
    t0 = time.perf_counter()
    code = main(["digits", "--count", "1000"])
    elapsed = time.perf_counter() - t0
    out = capsys.readouterr().out.strip()
    agree = matching_digits(out, machin_pi_digits(1000))
    ok = code == 0 and len(out.replace(".", "")) == 1000 and agree >= 998 and elapsed < 60
    verdict(2, "Viete digits vs Machin", ok, f"{agree}/1000 digits agree, {elapsed:.2f} s")


def test_03_doubling_identity(verdict):
    rng = random.Random(12345)
    worst = 0.0
    for _ in range(100):
        x = 10.0 - 9.0 * rng.random()
        i = rng.randint(0, 40)
        worst = max(worst, check_doubling(x, i).rel_residual)
    verdict(3, "doubling identity", worst <= 1e-12, f"max residual {worst:.2e}")


def test_04_reflection_identities(verdict):
    h_worst = max(ulp_distance(check_h_reflection(x, i)) for x in (1.5, 2.0, 3.0, 10.0) for i in range(21))
    p_worst = max(check_pi_reflection(x, i).rel_residual for x in (1.5, 2.0, 3.0) for i in range(31))
    ok = h_worst <= 4 and p_worst <= 1e-10
    verdict(4, "reflection identities", ok, f"h: {h_worst:.0f} ulp, Pi: max residual {p_worst:.2e}")


def test_05_ratio_limit(verdict):
    worst = max(abs(ratio_convergence(x, 40).lhs - math.sqrt(2 * x)) for x in (1.5, 2.0, 3.0, 20.0))
    verdict(5, "ratio limit", worst <= 1e-6, f"max |lhs - sqrt(2x)| {worst:.2e}")


def test_06_estimator_coherence(verdict):
    worst = 0.0
    for x in (1.5, 2.0, 5.0, 20.0):
        n = pi_limit(x).iterations
        a, b = pi_value(x, n), pi_diff_estimate(x, n)
        worst = max(worst, abs(a - b) / a)
    verdict(6, "estimator coherence", worst <= 1e-9, f"max rel disagreement {worst:.2e}")


def test_07_minimum(verdict):
    t0 = time.perf_counter()
    res = find_minimum()
    elapsed = time.perf_counter() - t0
    certified = all(pi_limit(res.x_star + dx).value >= res.value for dx in (-1e-3, 1e-3))
    ok = (
        abs(res.x_star - 1.19005) <= 5e-3
        and abs(res.value - 2.31383) <= 1e-3
        and certified
        and elapsed < 5
    )
    verdict(7, "minimum", ok, f"x* = {res.x_star:.7f}, value = {res.value:.7f}, {elapsed * 1000:.0f} ms")


def test_08_asymptotic_order(verdict):
    def e(x):
        return abs(pi_limit(x).value / asympt_sqrt(x) - 1)

    ratios = [e(2 * x) * (2 * x) ** 2 / (e(x) * x**2) for x in (10, 20, 40, 80)]
    lin = abs(asympt_linear(80) / asympt_sqrt(80) - 1)
    ok = all(0.3 <= r <= 3 for r in ratios) and lin <= 1e-3
    verdict(8, "asymptotic order", ok, f"ratios {[round(r, 3) for r in ratios]}, linear vs sqrt {lin:.1e}")


def test_09_error_bound_honesty(verdict):
    rng = random.Random(99)
    worst = 0.0
    count = 0
    for _ in range(50):
        x = 50.0 - 48.99 * rng.random()
        est = pi_limit(x)
        if not est.converged:
            continue
        count += 1
        gap = abs(pi_value(x, est.iterations + 20) - est.value)
        worst = max(worst, gap / est.error_bound)
    verdict(9, "error-bound honesty", count == 50 and worst <= 1, f"max gap/bound {worst:.3f} over {count} estimates")


def test_10_backend_cross_validation(verdict):
    worst = 0.0
    for x, _ in TABLE_ONE:
        b = BigFixedBackend(frac_bits_for(x, 50, 30))
        d = pi_value(x, 50)
        worst = max(worst, abs(d - float(pi_value(x, 50, b))) / d)
    verdict(10, "backend cross-validation", worst <= 1e-13, f"max rel diff {worst:.2e}")
