import math

import numpy as np
import pytest

from sdpinfer.generate import sample_labels
from sdpinfer.graphs import complete_graph, grid_graph
from sdpinfer.pipeline import (
    SimRow,
    SimulationTable,
    SweepSpec,
    build_graph,
    emit_csv,
    emit_plot,
    parse_sweep_spec,
    read_csv_table,
    run_sweep,
    run_trial,
    table_to_csv,
)
from sdpinfer.sdp import SolverConfig


def test_noiseless_trial_recovers_everything():
    g = grid_graph(3, 3)
    y = sample_labels(9, "balanced")
    res = run_trial(g, y, 0.0, 0.0, seed=5)
    assert res.k_hat_final == 9
    assert res.k_hat_stage1 == 9
    assert res.sign_correct
    assert res.certified
    assert res.brute_force_gap == pytest.approx(0.0, abs=1e-6)


def test_trial_deterministic():
    g = complete_graph(10)
    y = sample_labels(10, "balanced")
    a = run_trial(g, y, 0.2, 0.1, seed=11)
    b = run_trial(g, y, 0.2, 0.1, seed=11)
    assert a == b


def test_trial_stage1_at_least_half():
    g = complete_graph(8)
    y = sample_labels(8, "balanced")
    for seed in range(30):
        res = run_trial(g, y, 0.4, 0.3, seed=seed)
        assert res.k_hat_stage1 >= 4
        if res.sign_correct:
            assert res.k_hat_final == res.k_hat_stage1


def test_trial_certified_implies_zero_oracle_gap():
    g = complete_graph(10)
    y = sample_labels(10, "balanced")
    seen_certified = 0
    for seed in range(40):
        res = run_trial(g, y, 0.15, 0.1, seed=seed)
        if res.certified:
            seen_certified += 1
            assert res.brute_force_gap == pytest.approx(0.0, abs=1e-6)
    assert seen_certified > 0


def test_stage2_failure_rate_matches_enumeration():
    # n=4, p=0: stage 1 is perfect, so sign errors come from w alone:
    # wrong iff 3 or 4 of the 4 node signs flip
    g = complete_graph(4)
    y = sample_labels(4, "all_plus")
    q, trials = 0.49, 3000
    wrong = 0
    for seed in range(trials):
        res = run_trial(g, y, 0.0, q, seed=seed)
        assert res.k_hat_stage1 == 4
        if not res.sign_correct:
            wrong += 1
    target = 4 * q**3 * (1 - q) + q**4
    se = math.sqrt(target * (1 - target) / trials)
    assert abs(wrong / trials - target) <= 4 * se


def test_stage2_error_within_bounds():
    from sdpinfer.bounds import stage2_error_bound, stage2_error_bound_hoeffding

    n, q, trials = 30, 0.2, 2000
    y = sample_labels(n, "balanced")
    from sdpinfer.generate import observe_nodes

    wrong = sum(float(observe_nodes(y, q, seed=s) @ y) < 0 for s in range(trials))
    bound = min(stage2_error_bound(n, q), stage2_error_bound_hoeffding(n, q))
    assert wrong / trials <= bound + 3 * math.sqrt(max(bound, 1e-12) / trials) + 3 / trials


def test_build_graph_families():
    assert build_graph("complete", 5).m == 10
    assert build_graph("grid", 9).n == 9
    g = build_graph("regular", 10, d=3, seed=1)
    assert np.all(g.degrees() == 3)
    with pytest.raises(ValueError):
        build_graph("grid", 10)
    with pytest.raises(ValueError):
        build_graph("mystery", 10)


def small_sweep(trials=5, p_grid=(0.05, 0.35)):
    return SweepSpec(
        family="complete",
        n=12,
        p_grid=p_grid,
        q=0.1,
        trials=trials,
        base_seed=123,
        k_fracs=(0.8, 1.0),
        solver=SolverConfig(max_sweeps=200),
    )


def test_sweep_shape_and_determinism():
    t1 = run_sweep(small_sweep())
    t2 = run_sweep(small_sweep())
    assert t1.rows == t2.rows
    assert len(t1) == 2 * 2  # p cells x k thresholds
    for row in t1.rows:
        assert 0.0 <= row.empirical_prob <= 1.0
        assert row.trials == 5


def test_sweep_nested_thresholds():
    table = run_sweep(small_sweep(trials=20))
    by_p = {}
    for row in table.rows:
        by_p.setdefault(row.p, {})[row.k_threshold] = row.empirical_prob
    for probs in by_p.values():
        ks = sorted(probs)
        for lo, hi in zip(ks, ks[1:]):
            assert probs[lo] >= probs[hi]


def test_sweep_single_trial_probabilities_are_binary():
    table = run_sweep(small_sweep(trials=1))
    assert all(row.empirical_prob in (0.0, 1.0) for row in table.rows)


def test_sweep_noise_trend():
    table = run_sweep(small_sweep(trials=30))
    full = {row.p: row.empirical_prob for row in table.rows if row.k_threshold == 12}
    assert full[0.05] >= full[0.35]


def test_csv_round_trip(tmp_path):
    table = run_sweep(small_sweep())
    path = tmp_path / "out.csv"
    emit_csv(table, str(path))
    back = read_csv_table(str(path))
    assert table_to_csv(back) == path.read_text()
    assert len(back) == len(table)


def test_csv_empty_table(tmp_path):
    path = tmp_path / "empty.csv"
    emit_csv(SimulationTable(), str(path))
    assert path.read_text().strip().count("\n") == 0  # header only


def test_csv_line_count(tmp_path):
    table = SimulationTable(
        rows=[
            SimRow("complete", 4, 0.1, 0.0, 4, 10, 0, 0.9, 3.8, 0.5),
            SimRow("complete", 4, 0.2, 0.0, 4, 10, 0, 0.7, 3.5, 0.3),
        ]
    )
    path = tmp_path / "two.csv"
    emit_csv(table, str(path))
    assert len(path.read_text().splitlines()) == 3


def test_csv_io_error():
    with pytest.raises(OSError):
        emit_csv(SimulationTable(), "/nonexistent-dir/out.csv")


def test_plot_deterministic_bytes(tmp_path):
    table = run_sweep(small_sweep())
    p1, p2 = tmp_path / "a.svg", tmp_path / "b.svg"
    emit_plot(table, str(p1))
    emit_plot(table, str(p2))
    assert p1.read_bytes() == p2.read_bytes()
    assert b"<svg" in p1.read_bytes()


def test_plot_single_cell(tmp_path):
    table = SimulationTable(rows=[SimRow("complete", 4, 0.1, 0.0, 4, 10, 0, 0.9, 3.8, 0.5)])
    path = tmp_path / "one.svg"
    emit_plot(table, str(path))
    assert path.stat().st_size > 0


def test_plot_empty_table_rejected(tmp_path):
    with pytest.raises(ValueError):
        emit_plot(SimulationTable(), str(tmp_path / "no.svg"))


def test_parse_sweep_spec():
    text = """
    # demo sweep
    family complete
    n 12
    p_grid 0.05,0.35
    q 0.1
    trials 5
    seed 123
    k_fracs 0.8,1.0
    max_sweeps 200
    """
    spec = parse_sweep_spec(text)
    assert spec == small_sweep()


def test_parse_sweep_spec_missing_key():
    with pytest.raises(ValueError):
        parse_sweep_spec("family complete\nn 10\n")
