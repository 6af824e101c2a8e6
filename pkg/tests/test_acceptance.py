"""Acceptance criteria, one test per criterion.

Each test records a single PASS/FAIL line in ``LINES``; the conftest hook
prints them after the run.  ``python tests/test_acceptance.py`` runs the
same checks without pytest and prints the lines directly.
"""

import math
import random
import sys
import time
from fractions import Fraction
from itertools import product
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from tests_acceptance_registry import LINES  # noqa: E402

from slicepressure import kernels  # noqa: E402
from slicepressure.arith import coprime_slopes, make_slope  # noqa: E402
from slicepressure.automaton import build_overlap_automaton, count_via_paths, overlap_growth, strong_connectivity  # noqa: E402
from slicepressure.cocycle import count_via_cocycle  # noqa: E402
from slicepressure.dimension import dimension_report, fourier_nondecay, jensen_bound  # noqa: E402
from slicepressure.gibbs import build_gibbs_system, mu_bar_mass, variation_bound_check, weak_gibbs_constants  # noqa: E402
from slicepressure.oracle import overlap_count_exact, selfsim_residual  # noqa: E402
from slicepressure.simplex import check_contraction, contractive_words, max_contraction_tau  # noqa: E402
from slicepressure.subshift import (  # noqa: E402
    admissible_words,
    build_line_subshift,
    corner_touch_words,
    geometric_words,
    pressure_gap_check,
    spectral_pressure,
    word_index,
)


def _warm_up():
    # compile the numba kernels outside the timed regions
    kernels.enumerate_values(np.array([0, 1, 2]), 2)
    kernels.class_counts(np.array([0, 1, 1]))
    kernels.value_histogram(np.array([0, 1, 2]), 2)
    kernels.power_iterate(np.eye(2) + 1, 10, 1e-6)
    kernels.contraction_ratios(np.ones((4, 4)), np.full((1, 4), 0.25), np.full((1, 4), 0.25))
    kernels.count_flagged_blocks(np.zeros((1, 3), dtype=np.int64), np.zeros(64, dtype=np.bool_))


_warm_up()


def _record(num: int, title: str, checks: list[tuple[str, bool]], elapsed: float, budget: float | None):
    if budget is not None:
        checks = checks + [(f"runtime {elapsed:.2f}s < {budget:g}s", elapsed < budget)]
    ok = all(c for _, c in checks)
    detail = "; ".join(name if c else f"NOT MET: {name}" for name, c in checks)
    LINES[num] = f"[{'PASS' if ok else 'FAIL'}] criterion {num:>2} {title}: {detail}"
    assert ok, LINES[num]


def test_criterion_01_triple_counting():
    t0 = time.perf_counter()
    agree = True
    for slope in coprime_slopes(5):
        aut = build_overlap_automaton(slope)
        for n in range(1, 9):
            agree &= overlap_count_exact(slope, n) == count_via_paths(aut, n) == count_via_cocycle(slope, n)
    half = make_slope(1, 2)
    one = build_overlap_automaton(make_slope(1, 1))
    spots = count_via_cocycle(half, 1) == 3 and count_via_cocycle(half, 2) == 13
    fives = all(count_via_paths(one, n) == 5**n == overlap_count_exact(make_slope(1, 1), n) for n in range(1, 7))
    _record(
        1,
        "triple-equality counting",
        [("oracle = paths = cocycle, q<=5, n<=8", agree), ("N1=3, N2=13 at 1/2", spots), ("N_n = 5^n at 1/1, n<=6", fives)],
        time.perf_counter() - t0,
        30,
    )


def test_criterion_02_growth():
    t0 = time.perf_counter()
    one = overlap_growth(build_overlap_automaton(make_slope(1, 1)))
    half = overlap_growth(build_overlap_automaton(make_slope(1, 2)))
    target = math.log((5 + math.sqrt(17)) / 2)
    _record(
        2,
        "growth rates",
        [
            ("N(1/1) = log 5 exactly", one.lower == one.upper == math.log(5)),
            (f"|N(1/2) - log((5+sqrt17)/2)| <= 1e-9 (mid {half.mid:.12f})", abs(half.mid - target) <= 1e-9 and half.contains(target)),
        ],
        time.perf_counter() - t0,
        1,
    )


def test_criterion_03_connectivity():
    t0 = time.perf_counter()
    slopes = coprime_slopes(50)
    ok = all(strong_connectivity(build_overlap_automaton(s)) for s in slopes)
    _record(3, "strong connectivity", [(f"all {len(slopes)} slopes with q<=50", ok)], time.perf_counter() - t0, 10)


def test_criterion_04_contractivity():
    t0 = time.perf_counter()
    words = contractive_words(3)
    tau = max_contraction_tau()
    sampled = all(check_contraction(z, count=1000, seed=i, slack=1e-10) for i, z in enumerate(words))
    _record(
        4,
        "contractivity census",
        [
            (f"exactly 24 of 64 contractive (found {len(words)})", len(words) == 24),
            (f"tau = {tau:.6f} in (0,1)", 0 < tau < 1),
            ("1000 sampled pairs per contractive word, slack 1e-10", sampled),
        ],
        time.perf_counter() - t0,
        30,
    )


def test_criterion_05_pressure():
    t0 = time.perf_counter()
    slopes = coprime_slopes(12)
    gaps = all(pressure_gap_check(s).ok for s in slopes)
    p1 = spectral_pressure(make_slope(1, 1))
    _record(
        5,
        "pressure inequality",
        [(f"N <= P for all {len(slopes)} slopes with q<=12", gaps), ("P(1/1) = log 5 within 1e-9", abs(p1.mid - math.log(5)) <= 1e-9)],
        time.perf_counter() - t0,
        120,
    )


def test_criterion_06_jensen():
    t0 = time.perf_counter()
    ok = all(jensen_bound(s, n).ok for s in coprime_slopes(5) for n in range(1, 9))
    j = jensen_bound(make_slope(1, 2), 2)
    inst = abs(j.lhs - 1.8892) < 5e-5 and abs(j.rhs - 1.8295) < 5e-5 and j.ok
    _record(
        6,
        "Jensen chain",
        [("H_n >= n log 9 - log N_n - 1e-9, q<=5, n<=8", ok), (f"H2 = {j.lhs:.4f} >= {j.rhs:.4f} at 1/2", inst)],
        time.perf_counter() - t0,
        None,
    )


def test_criterion_07_dimension():
    t0 = time.perf_counter()
    d1 = dimension_report(make_slope(1, 1)).dim_lower
    d2 = dimension_report(make_slope(1, 2)).dim_lower
    reports = [dimension_report(s) for s in coprime_slopes(12)]
    below = all(r.dim_lower < 1 for r in reports)
    bias = all(r.dim_lower <= r.dim_estimate + 0.02 for r in reports if r.slope.q <= 5)
    _record(
        7,
        "dimension bounds",
        [
            (f"dim_lower(1/1) = {d1:.6f} = 0.848002 +- 1e-5", abs(d1 - 0.848002) <= 1e-5),
            (f"dim_lower(1/2) = {d2:.6f} = 0.980350 +- 1e-3", abs(d2 - 0.980350) <= 1e-3),
            (f"dim_lower < 1 on all {len(reports)} slopes with q<=12", below),
            ("dim_lower <= dim_estimate + 0.02 for q<=5", bias),
        ],
        time.perf_counter() - t0,
        None,
    )


def test_criterion_08_fourier():
    t0 = time.perf_counter()
    checks = []
    for p, q in [(1, 1), (1, 2), (1, 3), (2, 3)]:
        fw = fourier_nondecay(make_slope(p, q), 20)
        checks.append((f"{p}/{q}: dev {fw.max_deviation:.1e} < 1e-9, |mu^(q)| = {fw.magnitude:.4f} > 1e-3", fw.nondecay and fw.magnitude > 1e-3))
    _record(8, "Fourier non-decay", checks, time.perf_counter() - t0, 5)


def test_criterion_09_gibbs():
    t0 = time.perf_counter()
    systems = [build_gibbs_system(s) for s in coprime_slopes(5)]
    perron_ok = all(abs(g.perron_value.mid - math.log(3)) <= 1e-9 / 3 and g.perron_value.contains(math.log(3)) for g in systems)
    additive = all(
        mu_bar_mass(g, w) == mu_bar_mass(g, w + (0,)) + mu_bar_mass(g, w + (1,))
        for g in systems
        for n in range(0, 5)
        for w in product((0, 1), repeat=n)
    )
    g_half = build_gibbs_system(make_slope(1, 2))
    rng = random.Random(7)
    words = [tuple(rng.randint(0, 1) for _ in range(rng.randint(1, 20))) for _ in range(1000)]
    variation = all(variation_bound_check(g_half, w) for w in words)
    seq = dict(weak_gibbs_constants(g_half, 20))
    tail = [seq[n] for n in range(8, 21)]
    trend = all(b <= a + 1e-12 for a, b in zip(tail, tail[1:]))
    scalar = all(abs(v) < 1e-12 for _, v in weak_gibbs_constants(build_gibbs_system(make_slope(1, 1)), 20))
    _record(
        9,
        "Gibbs machinery",
        [
            ("Perron value 3 +- 1e-9 for q<=5", perron_ok),
            ("cylinder additivity exact", additive),
            ("variation bound on 1000 random words, length<=20", variation),
            (f"log C_n/n non-increasing on [8,20] at 1/2 ({tail[0]:.4f} -> {tail[-1]:.4f})", trend),
            ("log C_n/n = 0 at 1/1", scalar),
        ],
        time.perf_counter() - t0,
        None,
    )


def test_criterion_10_subshift():
    t0 = time.perf_counter()
    equal = True
    corner_match = True
    mismatches = 0
    for slope in coprime_slopes(5):
        s = build_line_subshift(slope)
        for n in range(1, 9):
            lang = np.zeros(4**n, dtype=bool)
            for z in admissible_words(s, n):
                lang[word_index(z)] = True
            equal &= bool(np.array_equal(lang, geometric_words(slope, n, closed=True)))
            diff = lang & ~geometric_words(slope, n, closed=False)
            corners = corner_touch_words(slope, n)
            mismatches += int(diff.sum())
            corner_match &= int(diff.sum()) == int(corners.sum()) and bool(np.array_equal(diff, corners))
    _record(
        10,
        "subshift cross-validation",
        [
            ("admissible = closed-square test, n<=8, q<=5", equal),
            (f"{mismatches} open-square mismatches = corner-touch words", corner_match),
        ],
        time.perf_counter() - t0,
        60,
    )


def test_criterion_11_selfsim():
    t0 = time.perf_counter()
    n = 12
    worst = 0.0
    for slope in coprime_slopes(3):
        for gen in range(0, 5):
            for k in range(2**gen):
                interval = (Fraction(k, 2**gen), Fraction(k + 1, 2**gen))
                worst = max(worst, selfsim_residual(slope, interval, n))
    _record(
        11,
        "self-similarity",
        [(f"max residual {worst:.2e} <= 2^-(n-2) at n=12, generation<=4, q<=3", worst <= 2.0 ** -(n - 2))],
        time.perf_counter() - t0,
        None,
    )


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted((k, v) for k, v in globals().items() if k.startswith("test_criterion_")):
        try:
            fn()
        except AssertionError:
            failed += 1
    for num in sorted(LINES):
        print(LINES[num])
    sys.exit(1 if failed else 0)
