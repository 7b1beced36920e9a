"""Acceptance gate: one test per exit criterion, printed pass/fail lines.

Run with -s to see the per-criterion report.
"""

import math

import numpy as np
import pytest

from sdpinfer.bounds import (
    ChernoffInputs,
    RateInputs,
    epsilon_rate,
    stage2_error_bound,
    stage2_error_bound_hoeffding,
    validate_chernoff_monte_carlo,
)
from sdpinfer.certificate import SignedLaplacian, expected_signed_laplacian, kkt_check, lambda2, signed_laplacian
from sdpinfer.cli import main as cli_main
from sdpinfer.generate import observe_edges, observe_nodes, sample_labels
from sdpinfer.graphs import complete_graph, graph_stats, grid_graph, random_regular_graph
from sdpinfer.pipeline import SweepSpec, run_sweep, run_trial
from sdpinfer.sdp import SolverConfig, brute_force_max, brute_force_maximizers, objective, round_solution, solve_sdp


def report(num: int, name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {num} {name}: {status}{suffix}")
    assert ok, f"criterion {num} ({name}) failed{suffix}"


def noiseless_family(n):
    side = int(round(math.sqrt(n)))
    return [
        ("complete", complete_graph(n)),
        ("grid", grid_graph(side, side)),
        ("regular", random_regular_graph(n, 6, seed=n)),
    ]


def test_criterion_1_noiseless_exactness():
    failures = 0
    total = 0
    for n in (16, 64, 100):
        for name, g in noiseless_family(n):
            y = sample_labels(n, "balanced")
            for t in range(50):
                res = run_trial(g, y, 0.0, 0.0, seed=t, with_oracle=False)
                total += 1
                if res.k_hat_final != n or not res.certified:
                    failures += 1
    report(1, "noiseless exactness", failures == 0, f"{total - failures}/{total} trials exact+certified")


def random_small_instance(idx, rng):
    n = int(rng.integers(4, 13))
    kind = idx % 3
    if kind == 0:
        g = complete_graph(n)
    elif kind == 1:
        rows = int(rng.integers(2, 4))
        cols = max(2, n // rows)
        g = grid_graph(rows, cols)
    else:
        d = 3 if (n * 3) % 2 == 0 else 2
        g = random_regular_graph(n, d, seed=idx)
    y = sample_labels(g.n, "random", seed=idx)
    p = (0.0, 0.1, 0.3)[idx % 3]
    return g, y, p


def test_criterion_2_oracle_equivalence():
    rng = np.random.default_rng(2024)
    dominance_violations = 0
    certificate_violations = 0
    certified_count = 0
    for idx in range(500):
        g, y, p = random_small_instance(idx, rng)
        a = observe_edges(g, y, p, seed=10_000 + idx)
        sol = solve_sdp(a, SolverConfig(seed=idx))
        _, best = brute_force_max(a)
        if sol.objective < best - 1e-6:
            dominance_violations += 1
        y_hat = round_solution(sol)
        if kkt_check(a, y_hat).certified:
            certified_count += 1
            maximizers, value = brute_force_maximizers(a, atol=1e-6)
            attained = objective(a, y_hat)
            unique = len(maximizers) == 1 and np.array_equal(maximizers[0], y_hat)
            if abs(attained - value) > 1e-6 or not unique:
                certificate_violations += 1
    report(
        2,
        "oracle equivalence",
        dominance_violations == 0 and certificate_violations == 0 and certified_count > 0,
        f"dominance violations {dominance_violations}, certificate violations "
        f"{certificate_violations}, certified {certified_count}/500",
    )


def test_criterion_3_certificate_identities():
    rng = np.random.default_rng(3)
    worst_kernel = 0.0
    worst_slack = 0.0
    for _ in range(1000):
        n = int(rng.integers(2, 15))
        a = rng.integers(-1, 2, size=(n, n)).astype(float)
        a = np.triu(a, 1)
        a = a + a.T
        y = rng.choice([-1.0, 1.0], size=n)
        lap = signed_laplacian(a, y).matrix
        worst_kernel = max(worst_kernel, float(np.abs(lap @ y).max(initial=0.0)))
        worst_slack = max(worst_slack, abs(float(np.sum(lap * np.outer(y, y)))))
    report(
        3,
        "certificate identities",
        worst_kernel <= 1e-9 and worst_slack <= 1e-9,
        f"max |L(y)y| {worst_kernel:.2e}, max |<L,yy^T>| {worst_slack:.2e}",
    )


def test_criterion_4_expectation_eigenvalue_bound():
    family = [
        complete_graph(5),
        complete_graph(10),
        complete_graph(16),
        grid_graph(3, 4),
        grid_graph(4, 4),
        grid_graph(1, 8),
        random_regular_graph(12, 2, seed=1),
        random_regular_graph(12, 3, seed=2),
        random_regular_graph(16, 4, seed=3),
        random_regular_graph(20, 3, seed=4),
    ]
    violations = 0
    checks = 0
    min_slack = math.inf
    for g in family:
        stats = graph_stats(g, "exact")
        y = sample_labels(g.n, "balanced")
        for p in (0.0, 0.1, 0.25, 0.4):
            lam = lambda2(SignedLaplacian(matrix=expected_signed_laplacian(g, y, p), y=y.astype(float)))
            bound = (1 - 2 * p) * stats.cheeger**2 / (4 * stats.delta_max)
            slack = lam - bound
            min_slack = min(min_slack, slack)
            checks += 1
            if slack < -1e-9:
                violations += 1
    report(4, "expectation eigenvalue bound", violations == 0, f"{checks} checks, min slack {min_slack:.3e}")


def test_criterion_5_mixed_chernoff_validity():
    trials = 100_000
    violations = 0
    points = 0
    for r in (0.5, 0.7, 0.9):
        for m_frac in (0.0, 0.5, 1.0):
            for n in (40, 100):
                for t_frac in (0.05, 0.1, 0.2):
                    ci = ChernoffInputs(n=n, m=int(round(m_frac * n)), r=r, t=t_frac * n)
                    emp, bound = validate_chernoff_monte_carlo(ci, trials, seed=points)
                    points += 1
                    if emp > bound + 3 * math.sqrt(bound / trials):
                        violations += 1
    report(5, "mixed Chernoff validity", violations == 0, f"{points} grid points")


@pytest.fixture(scope="module")
def figure1_sweep():
    spec = SweepSpec(
        family="complete",
        n=100,
        p_grid=tuple(round(0.05 * i, 2) for i in range(1, 9)),
        q=0.1,
        trials=200,
        base_seed=606,
        k_fracs=(0.8, 0.9, 1.0),
    )
    return run_sweep(spec)


def test_criterion_6_figure1_trend(figure1_sweep):
    trials = 200
    by_k: dict[int, list] = {}
    for row in figure1_sweep.rows:
        by_k.setdefault(row.k_threshold, []).append(row)
    ok = True
    details = []
    for k, rows in sorted(by_k.items()):
        rows = sorted(rows, key=lambda r: r.p)
        emp = [r.empirical_prob for r in rows]
        inversions = []
        for a, b in zip(emp, emp[1:]):
            if b > a:
                se = math.sqrt((a * (1 - a) + b * (1 - b)) / trials)
                inversions.append((b - a, 2 * se))
        if len(inversions) > 1 or any(gap > allowance for gap, allowance in inversions):
            ok = False
        details.append(f"k={k}: {len(inversions)} inversions")
    # nested thresholds at fixed p
    by_p: dict[float, dict[int, float]] = {}
    for row in figure1_sweep.rows:
        by_p.setdefault(row.p, {})[row.k_threshold] = row.empirical_prob
    for probs in by_p.values():
        ks = sorted(probs)
        for lo, hi in zip(ks, ks[1:]):
            if probs[lo] < probs[hi]:
                ok = False
                details.append("nested-threshold violation")
    report(6, "figure-1 trend", ok, "; ".join(details))


def test_criterion_7_stage2_rate():
    trials = 10_000
    n = 100
    ok = True
    details = []
    y = sample_labels(n, "balanced")
    for q in (0.1, 0.2, 0.3):
        errors = 0
        for s in range(trials):
            if float(observe_nodes(y, q, seed=s) @ y) < 0:
                errors += 1
        emp = errors / trials
        bound = min(stage2_error_bound(n, q), stage2_error_bound_hoeffding(n, q))
        sigma = math.sqrt(bound * (1 - bound) / trials)
        if emp > bound + 3 * sigma:
            ok = False
        details.append(f"q={q}: emp {emp:.2e} bound {bound:.2e}")
    report(7, "stage-2 rate", ok, "; ".join(details))


def test_criterion_8_remark1_consistency():
    rng = np.random.default_rng(8)
    worst = 0.0
    third_terms_zero = True
    for _ in range(100):
        n = int(rng.integers(4, 400))
        delta = int(rng.integers(1, n))
        phi = float(rng.uniform(0.1, delta))
        p = float(rng.uniform(0.0, 0.5))
        full = epsilon_rate(RateInputs(n=n, k=n, p=p, phi=phi, delta_max=delta))
        o2p = 1 - 2 * p
        denom = 512 * p * (1 - p) * delta**3 + 11 * o2p * (1 - p) * delta * phi**2
        two_term = n * math.exp(-(o2p**2) * phi**4 / denom) + n * math.exp(
            -2 * o2p**2 / delta * (phi**2 / (16 * delta)) ** 2
        )
        rel = abs(full - two_term) / max(1e-300, abs(two_term))
        worst = max(worst, rel)
        # the (n-k) coefficient annihilates the third term at k = n
        if full > two_term + 1e-15 * two_term:
            third_terms_zero = False
    report(8, "remark-1 consistency", worst <= 1e-12 and third_terms_zero, f"max rel diff {worst:.2e}")


def test_criterion_9_cli_determinism(tmp_path, capsys):
    spec = tmp_path / "sweep.txt"
    spec.write_text(
        "family complete\nn 16\np_grid 0.05,0.2,0.35\nq 0.1\ntrials 20\nseed 77\nk_fracs 0.8,1.0\n"
    )
    outputs = []
    for tag in ("a", "b"):
        csv_path = tmp_path / f"{tag}.csv"
        svg_path = tmp_path / f"{tag}.svg"
        code = cli_main(["simulate", "--spec", str(spec), "--csv", str(csv_path), "--plot", str(svg_path)])
        assert code == 0
        outputs.append((csv_path.read_bytes(), svg_path.read_bytes()))
    capsys.readouterr()
    same = outputs[0] == outputs[1]
    report(9, "CLI determinism", same, "byte-identical CSV and SVG across repeated invocations")
