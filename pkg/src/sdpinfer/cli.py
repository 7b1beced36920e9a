"""Command-line interface.

Subcommands: generate, solve, certify, bound, simulate, oracle.  All
randomness is controlled by explicit --seed flags; repeated invocations
with identical flags produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from sdpinfer import bounds
from sdpinfer.certificate import kkt_check
from sdpinfer.generate import observe, read_observation, sample_labels, write_observation
from sdpinfer.pipeline import build_graph, emit_csv, emit_plot, parse_sweep_spec, run_sweep
from sdpinfer.sdp import SolverConfig, brute_force_max, round_solution, solve_sdp


def _labels_to_str(y: np.ndarray) -> str:
    return " ".join(f"{int(v):+d}" for v in y)


def _read_labels(path: str) -> np.ndarray:
    with open(path) as fh:
        vals = [int(tok) for tok in fh.read().split()]
    y = np.array(vals, dtype=np.int64)
    if not np.all(np.abs(y) == 1):
        raise ValueError(f"labels file {path} must contain only +1/-1 entries")
    return y


def cmd_generate(args: argparse.Namespace) -> int:
    g = build_graph(args.family, args.n, d=args.d, seed=args.seed)
    y = sample_labels(g.n, args.labels, seed=args.seed)
    obs = observe(g, y, args.p, args.q, args.seed)
    with open(args.out, "w") as fh:
        fh.write(write_observation(obs))
    if args.labels_out:
        with open(args.labels_out, "w") as fh:
            fh.write("\n".join(f"{int(v):+d}" for v in y) + "\n")
    print(f"wrote observation for {args.family} n={g.n} m={g.m} to {args.out}")
    return 0


def cmd_solve(args: argparse.Namespace) -> int:
    obs = read_observation(open(args.infile).read())
    cfg = SolverConfig(rank=args.rank, max_sweeps=args.max_sweeps, tol_per_node=args.tol, seed=args.seed)
    sol = solve_sdp(obs.a, cfg)
    y_hat = round_solution(sol)
    print(f"objective {sol.objective:.10g}")
    print(f"converged {str(sol.converged).lower()} sweeps {sol.iterations}")
    print(f"labels {_labels_to_str(y_hat)}")
    return 0


def cmd_certify(args: argparse.Namespace) -> int:
    obs = read_observation(open(args.infile).read())
    y_hat = _read_labels(args.labels)
    report = kkt_check(obs.a, y_hat, tol=args.tol)
    for key, value in report.as_record().items():
        print(f"{key} {value}")
    return 0


def cmd_bound(args: argparse.Namespace) -> int:
    if args.kind == "rate":
        ri = bounds.RateInputs(n=args.n, k=args.k, p=args.p, phi=args.phi, delta_max=args.delta_max)
        print(f"epsilon {bounds.epsilon_rate(ri):.10g}")
        print(f"recovery_prob_bound {bounds.recovery_prob_bound(ri):.10g}")
    elif args.kind == "chernoff":
        ci = bounds.ChernoffInputs(n=args.n, m=args.m, r=args.r, t=args.t)
        print(f"bound {bounds.mixed_chernoff_bound(ci):.10g}")
        if args.trials:
            emp, bnd = bounds.validate_chernoff_monte_carlo(ci, args.trials, args.seed)
            print(f"empirical {emp:.10g}")
    elif args.kind == "stage2":
        print(f"epsilon2 {bounds.stage2_error_bound(args.n, args.q):.10g}")
        print(f"epsilon2_hoeffding {bounds.stage2_error_bound_hoeffding(args.n, args.q):.10g}")
    elif args.kind == "expander":
        rep = bounds.expander_conditions(args.n, args.d, args.c, args.k)
        print(f"degree_log_ratio {rep.degree_log_ratio:.10g}")
        print(f"recover_gap_ratio {rep.recover_gap_ratio:.10g}")
        print(f"complement_gap_ratio {rep.complement_gap_ratio:.10g}")
        print(f"eps_term_spectral {rep.eps_term_spectral:.10g}")
        print(f"eps_term_recover {rep.eps_term_recover:.10g}")
        print(f"eps_term_complement {rep.eps_term_complement:.10g}")
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    spec = parse_sweep_spec(open(args.spec).read())
    table = run_sweep(spec)
    emit_csv(table, args.csv)
    print(f"wrote {len(table)} rows to {args.csv}")
    if args.plot:
        emit_plot(table, args.plot)
        print(f"wrote figure to {args.plot}")
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    obs = read_observation(open(args.infile).read())
    y, value = brute_force_max(obs.a)
    print(f"optimum {value:.10g}")
    print(f"labels {_labels_to_str(y)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sdpinfer", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="sample an observation from the generative model")
    gen.add_argument("--family", choices=["complete", "grid", "regular"], required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--d", type=int, default=6, help="degree for the regular family")
    gen.add_argument("--p", type=float, required=True)
    gen.add_argument("--q", type=float, required=True)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--labels", choices=["all_plus", "balanced", "random"], default="balanced")
    gen.add_argument("--out", required=True)
    gen.add_argument("--labels-out", default=None, help="also write the ground-truth labels")
    gen.set_defaults(func=cmd_generate)

    slv = sub.add_parser("solve", help="solve the SDP relaxation and round")
    slv.add_argument("--in", dest="infile", required=True)
    slv.add_argument("--rank", type=int, default=None)
    slv.add_argument("--tol", type=float, default=SolverConfig.tol_per_node)
    slv.add_argument("--max-sweeps", type=int, default=SolverConfig.max_sweeps)
    slv.add_argument("--seed", type=int, default=0)
    slv.set_defaults(func=cmd_solve)

    crt = sub.add_parser("certify", help="run the KKT dual certificate on a labeling")
    crt.add_argument("--in", dest="infile", required=True)
    crt.add_argument("--labels", required=True)
    crt.add_argument("--tol", type=float, default=None)
    crt.set_defaults(func=cmd_certify)

    bnd = sub.add_parser("bound", help="evaluate closed-form bounds")
    bnd_sub = bnd.add_subparsers(dest="kind", required=True)
    rate = bnd_sub.add_parser("rate")
    rate.add_argument("--n", type=int, required=True)
    rate.add_argument("--k", type=int, required=True)
    rate.add_argument("--p", type=float, required=True)
    rate.add_argument("--phi", type=float, required=True)
    rate.add_argument("--delta-max", type=int, required=True)
    chern = bnd_sub.add_parser("chernoff")
    chern.add_argument("--n", type=int, required=True)
    chern.add_argument("--m", type=int, required=True)
    chern.add_argument("--r", type=float, required=True)
    chern.add_argument("--t", type=float, required=True)
    chern.add_argument("--trials", type=int, default=0, help="also run Monte-Carlo validation")
    chern.add_argument("--seed", type=int, default=0)
    st2 = bnd_sub.add_parser("stage2")
    st2.add_argument("--n", type=int, required=True)
    st2.add_argument("--q", type=float, required=True)
    exp = bnd_sub.add_parser("expander")
    exp.add_argument("--n", type=int, required=True)
    exp.add_argument("--d", type=int, required=True)
    exp.add_argument("--c", type=float, required=True)
    exp.add_argument("--k", type=int, required=True)
    bnd.set_defaults(func=cmd_bound)

    sim = sub.add_parser("simulate", help="run a Monte-Carlo sweep from a spec file")
    sim.add_argument("--spec", required=True)
    sim.add_argument("--csv", required=True)
    sim.add_argument("--plot", default=None)
    sim.set_defaults(func=cmd_simulate)

    orc = sub.add_parser("oracle", help="brute-force combinatorial optimum (n <= 22)")
    orc.add_argument("--in", dest="infile", required=True)
    orc.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
