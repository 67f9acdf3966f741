"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines as
they complete.  The Monte Carlo criterion is the long pole (a few
minutes of sampling); everything else is seconds.
"""

import math
import time

from conclab.amenability import (
    FolnerCandidate,
    boundary_ratio,
    folner_chain,
    near_invariant_vector,
    translation_displacement,
)
from conclab.experiments import load_config, render_csv, run_experiment
from conclab.freegroup import (
    count_inclusion_exceptions,
    designated_candidate,
    evaluate_A2_claim,
    restricted_norm,
    verify_A1_separation,
)
from conclab.groups import Cyclic, FreeGroup, Heisenberg, Lattice
from conclab.montecarlo import estimate_cylinder_measure, estimate_tube_profile
from conclab.permutations import equicontinuity_counterexample
from conclab.sphere import (
    DEFAULT_LEVY,
    SphereQuery,
    cap_measure,
    exponential_decay_ratio,
    recursive_tube_lower_bound,
    tube_measure,
)
from conclab.streams import SampleStream

MC_SAMPLES = 1_000_000

GRID_N = (5, 10, 50, 200, 1000)
GRID_EPS = (0.1, 0.3, 0.5)


def _grid_points():
    points = []
    for n in GRID_N:
        for k in (1, 3, 10, math.ceil(n / 4)):
            for eps in GRID_EPS:
                points.append((n, k, eps))
    return points


def _report(name: str, ok: bool, detail: str = ""):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def test_criterion_1_tube_oracle_agreement():
    started = time.time()
    passed = 0
    total = 0
    worst = 0.0
    pairs = sorted({(n, k) for n in GRID_N for k in (1, 3, 10, math.ceil(n / 4))})
    results = {}
    for stream_id, (n, k) in enumerate(pairs):
        estimates = estimate_tube_profile(
            n, n + k, GRID_EPS, SampleStream(20260801, stream_id), MC_SAMPLES
        )
        for eps, est in zip(GRID_EPS, estimates):
            results[(n, k, eps)] = est
    for n, k, eps in _grid_points():
        est = results[(n, k, eps)]
        exact = tube_measure(SphereQuery(n, n + k, eps)).value
        # z-test sigma: the estimate's own s.e., floored by the s.e. the
        # exact proportion would produce (the estimate s.e. is 0 at 0 hits)
        sigma = max(est.std_error, math.sqrt(exact * (1.0 - exact) / MC_SAMPLES))
        total += 1
        deviation = abs(est.mean - exact)
        if deviation <= 4.0 * sigma:
            passed += 1
            if sigma > 0:
                worst = max(worst, deviation / sigma)
    elapsed = time.time() - started
    _report(
        "criterion 1 (tube MC agreement)",
        passed >= 58 and total == 60 and elapsed <= 600.0,
        f"{passed}/60 within 4 sigma, worst z={worst:.2f}, {elapsed:.0f}s",
    )


def test_criterion_2_ratio_vanishes():
    ratios = []
    for n in (100, 200, 400, 800, 1600):
        k = math.ceil(math.sqrt(n))
        ratios.append(exponential_decay_ratio(n, k, 0.2, 0.1).ratio)
    strictly_decreasing = all(b < a for a, b in zip(ratios, ratios[1:]))
    drop = ratios[0] / ratios[-1]
    _report(
        "criterion 2 (decay ratio along sqrt codimension)",
        strictly_decreasing and drop >= 10.0,
        f"ratios {ratios[0]:.3e} .. {ratios[-1]:.3e}, drop {drop:.2e}x",
    )


def test_criterion_3_bound_dominance():
    violations = 0
    for n, k, eps in _grid_points():
        q = SphereQuery(n, n + k, eps)
        bounds = recursive_tube_lower_bound(q, DEFAULT_LEVY)
        exact = tube_measure(q).value
        if not (
            bounds.simplified.value <= bounds.product.value * (1 + 1e-12) + 1e-15
            and bounds.product.value <= exact * (1 + 1e-12) + 1e-15
        ):
            violations += 1
    _report(
        "criterion 3 (simplified <= product <= exact)",
        violations == 0,
        f"{violations} violations over 60 grid points, defaults c1={DEFAULT_LEVY.c1:.6g} c2={DEFAULT_LEVY.c2}",
    )


def test_criterion_4_cylinder_product_identity():
    grid = [
        (4, 0.8, 0.25),
        (4, 1.2, 0.4),
        (5, 0.6, 0.3),
        (5, 1.5, 0.45),
        (6, 1.0, 0.3),
        (6, 2.0, 0.2),
        (7, 0.9, 0.35),
        (8, 1.1, 0.3),
        (8, 2.5, 0.5),
        (10, 1.3, 0.25),
    ]
    misses = []
    for index, (n, cap_radius, eps) in enumerate(grid):
        est = estimate_cylinder_measure(
            n, cap_radius, eps, SampleStream(777, index), MC_SAMPLES
        )
        product = (
            cap_measure(n, cap_radius).value
            * tube_measure(SphereQuery(n, n + 1, eps)).value
        )
        sigma = max(est.std_error, math.sqrt(product * (1 - product) / MC_SAMPLES))
        if abs(est.mean - product) > 4.0 * sigma:
            misses.append((n, cap_radius, eps))
    _report(
        "criterion 4 (cylinder factorization)",
        not misses,
        f"10 points at 1e6 samples, misses: {misses}",
    )


def test_criterion_5_low_mass_branch():
    inclusion_exceptions = count_inclusion_exceptions(8)
    report = verify_A1_separation(100_000, 6, SampleStream(31415, 1))
    margin_ok = abs(report.certificate.margin - 1.0 / 6.0) <= 1e-12
    _report(
        "criterion 5 (low-mass branch: inclusion, chain, certificate)",
        inclusion_exceptions == 0 and report.chain_violations == 0 and margin_ok,
        f"ball-8 inclusion exceptions {inclusion_exceptions}, "
        f"chain violations {report.chain_violations}/100000, "
        f"margin {report.certificate.margin:.12f} at eps=1/12",
    )


def test_criterion_6_high_mass_branch():
    candidate = designated_candidate()
    candidate_min = min(restricted_norm({-i}, candidate) for i in (1, 2, 3, 4))
    candidate_ok = abs(candidate_min - math.sqrt(2.0) / 3.0) <= 1e-12
    report = evaluate_A2_claim(100_000, 6, SampleStream(31415, 2))
    recorded = report.candidate_meets_stated_bound is False and report.stated_bound == 1.0 / 6.0
    _report(
        "criterion 6 (high-mass branch: candidate and pigeonhole)",
        candidate_ok and report.pigeonhole_exceptions == 0 and recorded,
        f"candidate min {candidate_min:.12f} (sqrt(2)/3), "
        f"pigeonhole exceptions {report.pigeonhole_exceptions}/100000, "
        f"stated 1/6 bound met by candidate: {report.candidate_meets_stated_bound}, "
        f"fraction of samples below 1/6: {report.fraction_below_one_sixth:.3f}",
    )


def test_criterion_7_displacement_identity():
    checked = 0
    worst = 0.0

    def check(group, g, elements):
        nonlocal checked, worst
        K = frozenset(elements)
        cand = FolnerCandidate(group, K, (g,))
        f = near_invariant_vector(cand)
        direct = translation_displacement(group, g, f) ** 2
        translated = {group.multiply(g, k) for k in K}
        set_side = len(translated ^ K) / len(K)
        worst = max(worst, abs(direct - set_side))
        checked += 1
        assert abs(direct - set_side) <= 1e-12

    z = Lattice(1)
    for n in range(1, 21):
        box = [(i,) for i in range(n)]
        for g in ((1,), (-1,), (2,)):
            check(z, g, box)
    z2 = Lattice(2)
    for n in range(1, 11):
        box = [(i, j) for i in range(n) for j in range(n)]
        for g in ((1, 0), (0, 1), (-1, 0), (0, -1)):
            check(z2, g, box)
    h = Heisenberg()
    for n in range(1, 6):
        box = h.folner_set(n)
        for g in ((1, 0, 0), (0, 1, 0), (-1, 0, 0), (0, -1, 0), (0, 0, 1)):
            check(h, g, box)
    z12 = Cyclic(12)
    for n in range(1, 13):
        for g in (1, 5):
            check(z12, g, list(range(n)))
    z7 = Cyclic(7)
    for n in range(1, 8):
        for g in (1, 2, 3):
            check(z7, g, list(range(n)))
    f2 = FreeGroup()
    for radius in range(0, 5):
        ball = f2.ball(radius)
        for text in ("a", "b", "A", "B", "ab", "Ba"):
            check(f2, f2.parse_element(text), ball)

    z_ratios_exact = all(
        boundary_ratio(c) == 2.0 / (i + 1)
        for i, c in enumerate(folner_chain(Lattice(1), 50))
    )
    _report(
        "criterion 7 (displacement identity and Z box ratio)",
        checked >= 200 and z_ratios_exact,
        f"{checked} (g, K) pairs across 5 group families, worst gap {worst:.2e}, "
        f"Z box ratios equal 2/n exactly: {z_ratios_exact}",
    )


def test_criterion_8_hamming_counterexample():
    bad = []
    for n in range(4, 201, 2):
        row = equicontinuity_counterexample(n)
        if not (
            row.phi_before == 2.0 / n
            and row.phi_after == 1.0
            and row.amplification == n / 2.0
        ):
            bad.append(n)
    _report(
        "criterion 8 (metric counterexample exactness)",
        not bad,
        f"phi = 2/n, translated phi = 1, amplification = n/2 exact for all even n <= 200; "
        f"failures: {bad}",
    )


def test_criterion_9_deterministic_outputs():
    small = {
        "tube": {
            "samples": 20000,
            "grid": {"n": [20, 40], "k": [2], "epsilon": [0.3], "C": [0.1]},
        },
        "free-group": {"samples": 2000, "ball_radius": 5},
        "folner": {"length": 20},
        "hamming": {"max_n": 40},
        "fibre": {"samples": 20000},
    }
    problems = []
    for name, patch in small.items():
        cfg = load_config(name, patch)
        first = render_csv(run_experiment(name, cfg), cfg)
        second = render_csv(run_experiment(name, cfg), cfg)
        if first != second:
            problems.append(f"{name}: rerun differs")
        if name in ("tube", "fibre"):
            cfg2 = load_config(name, patch, {"workers": 2})
            parallel = render_csv(run_experiment(name, cfg2), cfg2)
            if first != parallel:
                problems.append(f"{name}: parallel differs")
    _report(
        "criterion 9 (byte-identical CSV, serial and parallel)",
        not problems,
        f"5 experiments rerun, grid experiments also at workers=2; problems: {problems}",
    )
