"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines as they complete. Tolerances are fixed here, not tuned at runtime.
"""

import math
import time

import numpy as np
import pytest
from scipy.special import erf

from tomonoise import (
    Coherent,
    ComplexAmplitude,
    Fock,
    Intensity,
    Phase,
    RealField,
    added_noise_analytic,
    empirical_comparison,
    empirical_kernel_variance,
    estimate_complex,
    estimate_mean,
    heterodyne_phase_variance,
    intensity_variance_direct,
    kernel_monomial,
    kernel_observable,
    noise_ratio_coherent,
    normal_moment,
    phase_kernel_distribution,
    sample_homodyne,
    simulate_heterodyne,
    square_kernel_monomial,
    sweep,
)


def report(label: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f"  [{detail}]" if detail else ""
    print(f"acceptance: {label}: {status}{suffix}")
    assert ok, f"{label}{suffix}"


def test_criterion_1_kernel_algebra():
    t0 = time.perf_counter()
    xs = np.linspace(-5.0, 5.0, 1000)
    worst = 0.0
    for eta in (0.5, 0.7, 1.0):
        for phi in (0.0, math.pi / 3.0, math.pi / 2.0):
            for n in range(11):
                for m in range(11 - n):
                    direct = kernel_monomial(n, m, eta, xs, phi) ** 2
                    reduced = square_kernel_monomial(n, m, eta, xs, phi)
                    # normalized by the grid supremum: the direct square has
                    # exact zeros, so pointwise relative error is ill-defined
                    scale = max(np.abs(direct).max(), 1.0)
                    worst = max(worst, float(np.abs(reduced - direct).max() / scale))
    elapsed = time.perf_counter() - t0
    report(
        "1 square-kernel identity, n+m <= 10",
        worst < 1e-9 and elapsed < 5.0,
        f"max normalized error {worst:.2e}, {elapsed:.1f}s",
    )


def test_criterion_2_unbiasedness():
    t0 = time.perf_counter()
    states = [Coherent(1.0), Coherent(2.0), Fock(0), Fock(1), Fock(3)]
    failures = []
    seed = 2000
    for state in states:
        want_n = normal_moment(state, 1, 1).real
        want_x = normal_moment(state, 0, 1).real
        want_a = normal_moment(state, 0, 1)
        for eta in (0.6, 1.0):
            seed += 1
            data = sample_homodyne(state, eta, 10**6, seed)
            est_n = estimate_mean(data, Intensity())
            if abs(est_n.value - want_n) > 4 * est_n.stderr:
                failures.append((state, eta, "intensity"))
            est_x = estimate_mean(data, RealField())
            if abs(est_x.value - want_x) > 4 * est_x.stderr:
                failures.append((state, eta, "real_field"))
            est_a = estimate_complex(data)
            spread = math.sqrt((est_a.noise_plus + est_a.noise_minus) / data.n)
            if abs(est_a.value - want_a) > 4 * spread:
                failures.append((state, eta, "complex_amplitude"))
    elapsed = time.perf_counter() - t0
    report(
        "2 estimator unbiasedness at 4 standard errors",
        not failures and elapsed < 60.0,
        f"{len(states) * 2 * 3} checks, {elapsed:.1f}s" + (f", failures {failures}" if failures else ""),
    )


def test_criterion_3_intensity_variance():
    state = Coherent(2.0)
    v1 = empirical_kernel_variance(sample_homodyne(state, 1.0, 10**6, 3001), Intensity())
    v05 = empirical_kernel_variance(sample_homodyne(state, 0.5, 10**6, 3002), Intensity())
    d1 = intensity_variance_direct(state, 1.0)
    d05 = intensity_variance_direct(state, 0.5)
    dn1 = math.sqrt(v1 / d1)
    dn05 = math.sqrt(v05 / d05)
    ok = (
        abs(v1 / 16.5 - 1) < 0.02
        and abs(v05 / 26.0 - 1) < 0.02
        and d1 == 4.0
        and d05 == 8.0
        and abs(dn1 / noise_ratio_coherent(Intensity(), 4.0, 1.0) - 1) < 0.02
        and abs(dn05 / noise_ratio_coherent(Intensity(), 4.0, 0.5) - 1) < 0.02
    )
    report(
        "3 intensity kernel variance and ratio",
        ok,
        f"var(eta=1) {v1:.3f} vs 16.5, var(eta=.5) {v05:.3f} vs 26, direct {d1}/{d05}",
    )


def test_criterion_4_field_and_amplitude_ratios():
    dx = empirical_comparison(RealField(), Coherent(2.0), 1.0, 10**6, 4001).ratio_linear
    da = empirical_comparison(ComplexAmplitude(), Coherent(3.0), 1.0, 10**6, 4002).ratio_linear
    exact_na = all(
        added_noise_analytic(ComplexAmplitude(), Coherent(2.0), eta) == 2.0
        for eta in (0.25, 0.5, 1.0)
    )
    ok = (
        abs(dx / math.sqrt(10.0) - 1) < 0.02
        and abs(da / math.sqrt(10.0) - 1) < 0.02
        and exact_na
    )
    report(
        "4 real-field and amplitude noise ratios",
        ok,
        f"dx {dx:.4f}, da {da:.4f}, sqrt(10) {math.sqrt(10):.4f}, N[a] exact {exact_na}",
    )


def test_criterion_5_intensity_ratio_minimum():
    grid = np.linspace(0.25, 4.0, 76)  # step 0.05
    vals = np.array([noise_ratio_coherent(Intensity(), g, 1.0) for g in grid])
    imin = int(np.argmin(vals))
    ok = abs(grid[imin] - 1.0) <= 0.05 + 1e-12 and abs(vals[imin] - math.sqrt(3.0)) <= 1e-12
    report(
        "5 intensity ratio minimum at nbar = 1/eta",
        ok,
        f"argmin {grid[imin]:.2f}, value {vals[imin]:.15f} vs sqrt(3)",
    )


def test_criterion_6_phase_high_intensity():
    t0 = time.perf_counter()
    nbar = 64.0
    data = sample_homodyne(Coherent(math.sqrt(nbar)), 1.0, 10**7, 6001)
    w = kernel_observable(Phase(), 1.0, data.x, data.phi)
    tomo = float(np.var(w))
    het = heterodyne_phase_variance(simulate_heterodyne(Coherent(math.sqrt(nbar)), 1.0, 10**7, 6002))
    ratio = math.sqrt(tomo / het)
    elapsed = time.perf_counter() - t0
    ok = (
        abs(tomo / (math.pi**2 / 12.0) - 1) < 0.03
        and abs(het / (1.0 / (2.0 * nbar)) - 1) < 0.03
        and abs(ratio / (math.pi * math.sqrt(nbar / 6.0)) - 1) < 0.05
        and elapsed < 120.0
    )
    report(
        "6 bright-state phase noise",
        ok,
        f"tomo {tomo:.4f} vs {math.pi ** 2 / 12:.4f}, het {het:.6f} vs {1 / 128:.6f}, "
        f"ratio {ratio:.3f} vs {math.pi * math.sqrt(nbar / 6):.3f}, {elapsed:.1f}s",
    )


def test_criterion_7_phase_low_intensity_ordering():
    etas = (0.2, 0.6, 1.0)
    nbars = (0.5, 1.0, 2.0, 4.0, 8.0)
    rows = sweep([Phase()], nbars, etas, "empirical", n=10**6, seed=7001)
    curve = {(r.eta, r.nbar): r.ratio_linear for r in rows}
    ordered = all(
        curve[(etas[0], nb)] < curve[(etas[1], nb)] < curve[(etas[2], nb)] for nb in nbars
    )
    detail = "; ".join(
        f"nbar {nb:g}: " + "/".join(f"{curve[(e, nb)]:.3f}" for e in etas) for nb in nbars
    )
    report("7 phase ratio curves strictly ordered in eta", ordered, detail)


def _bin_averaged(fn, edges):
    t, wts = np.polynomial.legendre.leggauss(24)
    lo, hi = edges[:-1], edges[1:]
    pts = 0.5 * (lo + hi)[:, None] + 0.5 * (hi - lo)[:, None] * t[None, :]
    return (fn(pts) @ wts) * 0.5


def test_criterion_8_erf_argument_resolution():
    # candidate scalings for the analytic phase-kernel density of a coherent
    # state: sqrt(2 eta) |beta| cos w (convolution route, the frozen choice)
    # versus sqrt(2) |beta| cos w / sqrt(eta)
    bins = 64
    results = {}
    for eta, seed in ((0.5, 8001), (1.0, 8002)):
        data = sample_homodyne(Coherent(1.0), eta, 10**7, seed)
        hist = phase_kernel_distribution(data, bins)
        cand_a = _bin_averaged(
            lambda u: (1 + erf(math.sqrt(2 * eta) * np.cos(u))) / (2 * math.pi), hist.edges
        )
        cand_b = _bin_averaged(
            lambda u: (1 + erf(math.sqrt(2.0) * np.cos(u) / math.sqrt(eta))) / (2 * math.pi),
            hist.edges,
        )
        floor = math.sqrt(hist.densities.max() / (data.n * hist.widths[0]))
        results[eta] = (
            float(np.abs(hist.densities - cand_a).max()),
            float(np.abs(hist.densities - cand_b).max()),
            float(np.abs(cand_a - cand_b).max()),
            floor,
        )
    da, db, sep, floor = results[0.5]
    ok_discriminate = sep > 5 * floor and da < 5 * floor and db > 5 * floor
    da1, db1, sep1, floor1 = results[1.0]
    ok_consistent = sep1 < 1e-12 and da1 < 5 * floor1
    report(
        "8 phase-density scaling resolved to sqrt(2 eta) |beta| cos w",
        ok_discriminate and ok_consistent,
        f"eta=0.5: winner {da:.5f}, loser {db:.5f}, separation {sep:.5f}, 5x floor {5 * floor:.5f}; "
        f"eta=1: dev {da1:.5f}",
    )


def test_criterion_9_closed_form_table_point():
    t0 = time.perf_counter()
    rows = sweep(
        [Intensity(), RealField(), ComplexAmplitude(), Phase()], [4.0], [1.0], "analytic"
    )
    got = {r.observable: r.ratio_linear for r in rows}
    want = {
        "intensity": math.sqrt(4.125),
        "real_field": math.sqrt(10.0),
        "complex_amplitude": math.sqrt(5.0),
        "phase": math.pi * math.sqrt(2.0 / 3.0),
    }
    elapsed = time.perf_counter() - t0
    worst = max(abs(got[k] / want[k] - 1.0) for k in want)
    report(
        "9 closed-form ratios at eta=1, nbar=4 to 12 digits",
        worst < 1e-12 and elapsed < 1.0,
        f"max relative deviation {worst:.2e}, {elapsed * 1000:.0f}ms",
    )
