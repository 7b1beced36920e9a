"""End-to-end trials and Monte-Carlo sweeps.

A trial runs generator -> SDP -> rounding -> sign decision -> certificate
and scores recovery against the known ground truth.  A sweep aggregates
trials over a (p, k-threshold) grid and emits CSV and figure reports.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, replace

import numpy as np

from sdpinfer import bounds
from sdpinfer.certificate import kkt_check
from sdpinfer.generate import observe_edges, observe_nodes, sample_labels
from sdpinfer.graphs import EXACT_CHEEGER_MAX_N, Graph, complete_graph, graph_stats, grid_graph, random_regular_graph
from sdpinfer.rng import STREAM_TRIAL, derive_seed
from sdpinfer.sdp import BRUTE_FORCE_MAX_N, SolverConfig, brute_force_max, objective, round_solution, solve_sdp

ORACLE_DEFAULT_MAX_N = 12  # past this, per-trial enumeration dominates runtime


@dataclass(frozen=True)
class TrialResult:
    trial_seed: int
    k_hat_stage1: int  # agreement with y* up to global sign
    sign_correct: bool
    k_hat_final: int  # agreement of the sign-corrected output with y*
    certified: bool
    sdp_objective: float
    solver_converged: bool
    brute_force_gap: float | None  # combinatorial optimum minus attained value


@dataclass(frozen=True)
class SweepSpec:
    family: str  # complete | grid | regular
    n: int
    p_grid: tuple[float, ...]
    q: float
    trials: int
    base_seed: int
    k_fracs: tuple[float, ...] = (0.8, 0.9, 1.0)
    d: int = 6  # regular family only
    label_mode: str = "balanced"
    solver: SolverConfig = SolverConfig()


@dataclass(frozen=True)
class SimRow:
    family: str
    n: int
    p: float
    q: float
    k_threshold: int
    trials: int
    failures: int
    empirical_prob: float
    mean_k_hat: float
    theorem_bound: float


@dataclass
class SimulationTable:
    rows: list[SimRow] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)


def build_graph(family: str, n: int, d: int = 6, seed: int = 0) -> Graph:
    if family == "complete":
        return complete_graph(n)
    if family == "grid":
        side = int(round(n**0.5))
        if side * side != n:
            raise ValueError(f"grid family needs a square n, got {n}")
        return grid_graph(side, side)
    if family == "regular":
        return random_regular_graph(n, d, seed)
    raise ValueError(f"unknown graph family {family!r}")


def run_trial(
    g: Graph,
    y_star: np.ndarray,
    p: float,
    q: float,
    seed: int,
    cfg: SolverConfig = SolverConfig(),
    with_oracle: bool | None = None,
) -> TrialResult:
    """One full two-stage run on a fresh observation, scored against y*."""
    y_star = np.asarray(y_star, dtype=np.int64)
    a = observe_edges(g, y_star, p, seed)
    w = observe_nodes(y_star, q, seed)

    sol = solve_sdp(a, replace(cfg, seed=derive_seed(cfg.seed, STREAM_TRIAL, seed)))
    y_hat = round_solution(sol)

    # stage 2: pick the orientation agreeing with the node observations
    score = float(w @ y_hat)
    y_final = y_hat if score >= 0 else -y_hat

    agree = int(np.sum(y_hat == y_star))
    k_stage1 = max(agree, g.n - agree)
    k_final = int(np.sum(y_final == y_star))
    sign_correct = k_final == k_stage1

    report = kkt_check(a, y_final)

    gap = None
    if with_oracle is None:
        with_oracle = g.n <= ORACLE_DEFAULT_MAX_N
    if with_oracle:
        if g.n > BRUTE_FORCE_MAX_N:
            raise ValueError(f"oracle gap needs n <= {BRUTE_FORCE_MAX_N}, got n={g.n}")
        _, best = brute_force_max(a)
        gap = best - objective(a, y_final)

    return TrialResult(
        trial_seed=seed,
        k_hat_stage1=k_stage1,
        sign_correct=sign_correct,
        k_hat_final=k_final,
        certified=report.certified,
        sdp_objective=sol.objective,
        solver_converged=sol.converged,
        brute_force_gap=gap,
    )


def run_sweep(spec: SweepSpec) -> SimulationTable:
    """Seeded Monte-Carlo sweep over the p-grid, scored at each k-threshold.

    Per-trial failures are counted per cell and never abort the sweep.
    """
    g = build_graph(spec.family, spec.n, spec.d, seed=spec.base_seed)
    y_star = sample_labels(spec.n, spec.label_mode, seed=spec.base_seed)
    mode = "exact" if spec.n <= EXACT_CHEEGER_MAX_N else "spectral"
    stats = graph_stats(g, mode)

    table = SimulationTable()
    k_thresholds = sorted({int(np.ceil(frac * spec.n)) for frac in spec.k_fracs})
    for cell, p in enumerate(spec.p_grid):
        results: list[TrialResult] = []
        failures = 0
        for t in range(spec.trials):
            seed = derive_seed(spec.base_seed, STREAM_TRIAL, cell, t)
            try:
                results.append(run_trial(g, y_star, p, spec.q, seed, spec.solver, with_oracle=False))
            except Exception:
                failures += 1
        k_final = np.array([r.k_hat_final for r in results], dtype=np.float64)
        mean_k = float(k_final.mean()) if len(results) else 0.0
        for k in k_thresholds:
            emp = float(np.mean(k_final >= k)) if len(results) else 0.0
            bound = bounds.recovery_prob_bound(
                bounds.RateInputs(n=spec.n, k=k, p=p, phi=stats.cheeger, delta_max=stats.delta_max)
            )
            table.rows.append(
                SimRow(
                    family=spec.family,
                    n=spec.n,
                    p=p,
                    q=spec.q,
                    k_threshold=k,
                    trials=len(results),
                    failures=failures,
                    empirical_prob=emp,
                    mean_k_hat=mean_k,
                    theorem_bound=bound,
                )
            )
    return table


CSV_COLUMNS = [
    "family",
    "n",
    "p",
    "q",
    "k_threshold",
    "trials",
    "failures",
    "empirical_prob",
    "mean_k_hat",
    "theorem_bound",
]


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def table_to_csv(table: SimulationTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in table.rows:
        writer.writerow(
            [r.family, r.n, _fmt(r.p), _fmt(r.q), r.k_threshold, r.trials, r.failures,
             _fmt(r.empirical_prob), _fmt(r.mean_k_hat), _fmt(r.theorem_bound)]
        )
    return buf.getvalue()


def emit_csv(table: SimulationTable, path: str) -> None:
    try:
        with open(path, "w", newline="") as fh:
            fh.write(table_to_csv(table))
    except OSError as exc:
        raise OSError(f"failed to write CSV to {path}: {exc}") from exc


def read_csv_table(path: str) -> SimulationTable:
    table = SimulationTable()
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            table.rows.append(
                SimRow(
                    family=rec["family"],
                    n=int(rec["n"]),
                    p=float(rec["p"]),
                    q=float(rec["q"]),
                    k_threshold=int(rec["k_threshold"]),
                    trials=int(rec["trials"]),
                    failures=int(rec["failures"]),
                    empirical_prob=float(rec["empirical_prob"]),
                    mean_k_hat=float(rec["mean_k_hat"]),
                    theorem_bound=float(rec["theorem_bound"]),
                )
            )
    return table


def emit_plot(table: SimulationTable, path: str) -> None:
    """Recovery probability vs p, one curve per (family, n, k); SVG output.

    The theorem bound is overlaid dashed wherever it is nonvacuous.
    Output is byte-deterministic for identical tables.
    """
    if not table.rows:
        raise ValueError("cannot plot an empty table")
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with plt.rc_context({"svg.hashsalt": "sdpinfer"}):
        fig, ax = plt.subplots(figsize=(7, 5))
        groups: dict[tuple[str, int, int], list[SimRow]] = {}
        for r in table.rows:
            groups.setdefault((r.family, r.n, r.k_threshold), []).append(r)
        for (family, n, k), rows in sorted(groups.items()):
            rows = sorted(rows, key=lambda r: r.p)
            ps = [r.p for r in rows]
            ax.plot(ps, [r.empirical_prob for r in rows], marker="o", label=f"{family} n={n}, k>={k}")
            if any(r.theorem_bound > 0 for r in rows):
                ax.plot(ps, [r.theorem_bound for r in rows], linestyle="--", alpha=0.6,
                        label=f"bound k>={k}")
        ax.set_xlabel("edge noise p")
        ax.set_ylabel("empirical P(recovered >= k)")
        ax.set_ylim(-0.05, 1.05)
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=8)
        fig.tight_layout()
        try:
            fig.savefig(path, format="svg", metadata={"Date": None})
        except OSError as exc:
            raise OSError(f"failed to write plot to {path}: {exc}") from exc
        finally:
            plt.close(fig)


def parse_sweep_spec(text: str) -> SweepSpec:
    """Flat key-value sweep file: 'key value' per line, '#' comments.

    Keys: family, n, p_grid (comma-separated), q, trials, seed,
    k_fracs (comma-separated), d, label_mode, rank, max_sweeps, tol.
    """
    kv: dict[str, str] = {}
    for ln in text.splitlines():
        ln = ln.split("#", 1)[0].strip()
        if not ln:
            continue
        key, _, value = ln.partition(" ")
        if not value.strip():
            raise ValueError(f"malformed sweep spec line: {ln!r}")
        kv[key] = value.strip()
    try:
        solver = SolverConfig(
            rank=int(kv["rank"]) if "rank" in kv else None,
            max_sweeps=int(kv.get("max_sweeps", SolverConfig.max_sweeps)),
            tol_per_node=float(kv.get("tol", SolverConfig.tol_per_node)),
        )
        return SweepSpec(
            family=kv["family"],
            n=int(kv["n"]),
            p_grid=tuple(float(x) for x in kv["p_grid"].split(",")),
            q=float(kv["q"]),
            trials=int(kv["trials"]),
            base_seed=int(kv["seed"]),
            k_fracs=tuple(float(x) for x in kv.get("k_fracs", "0.8,0.9,1.0").split(",")),
            d=int(kv.get("d", 6)),
            label_mode=kv.get("label_mode", "balanced"),
            solver=solver,
        )
    except KeyError as exc:
        raise ValueError(f"sweep spec missing required key: {exc.args[0]}") from exc
