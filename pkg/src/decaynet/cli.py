"""Command-line front end.

Every subcommand writes one JSON report (stdout or ``--out``). Trajectories
and scaling tables also go to ``--csv`` when given. Exit status is 0 when all
asserted inequalities hold, 1 when one fails (named on stderr) and 2 for
usage errors.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from .beurling_norms import beurling_norm, beurling_star_norm, op_norm, schur_norm
from .config import ExperimentConfig, SpecError, make_graph, make_matrix, parse_r, parse_seed
from .covering_ops import covering_multiplicity, fusion_density, fusion_set_violations, maximal_disjoint_set, multiplicity_bound
from .errors import DecayError
from .graph_core import estimate_dimension, graph_metrics
from .inversion import agamma_scaling_study, inversion_verify
from .io import format_graph, read_sequence
from .powers_markov import as_sequence, conv_power_growth, markov_hop_report, power_trajectory
from .report import dumps, leq, norm_row, write_csv
from .stability import stability_transfer_report
from .verify import verify_all

TRAJECTORY_COLUMNS = ["n", "beurling_norm", "l2_pow", "bound_factor", "subexp_factor", "implied_C"]
STUDY_COLUMNS = ["gamma", "norm_A", "norm_Ainv_l2", "norm_Ainv_beurling", "bound_factor", "implied_C"]


class Outcome:
    def __init__(self, report: dict, failures=(), csv_rows=None, csv_columns=None, text=None):
        self.report = report
        self.text = text
        self.failures = list(failures)
        self.csv_rows = csv_rows
        self.csv_columns = csv_columns


def _config(args, experiment: str) -> ExperimentConfig:
    return ExperimentConfig(
        experiment=experiment,
        graph=getattr(args, "gen", None),
        matrix=getattr(args, "matrix", None),
        r=args.r,
        alpha=args.alpha,
        d=args.dim,
        n=args.n,
        seed=args.seed,
        out=args.out,
    )


def _graph(args):
    if not args.gen:
        raise SpecError("--gen is required")
    return make_graph(args.gen, seed=args.seed, dim=args.dim)


def _matrix(args, g):
    if not args.matrix:
        raise SpecError("--matrix is required")
    return make_matrix(args.matrix, g, seed=args.seed)


def cmd_gen(args) -> Outcome:
    g = _graph(args)
    report = {"graph": g.name, "num_vertices": g.num_vertices, "num_edges": g.num_edges, "diameter": g.diameter}
    return Outcome(report, text=format_graph(g))


def cmd_stats(args) -> Outcome:
    g = _graph(args)
    m = graph_metrics(g, args.dim)
    report = {"config": _config(args, "stats"), "graph": g.name, "num_vertices": g.num_vertices, "num_edges": g.num_edges}
    report.update(m.to_dict())
    report["dimension_estimate"] = estimate_dimension(g) if g.diameter >= 4 else None
    return Outcome(report)


def cmd_norm(args) -> Outcome:
    g = _graph(args)
    A = _matrix(args, g)
    cfg = _config(args, "norm")
    p = cfg.params(g)
    params = p.to_dict()
    rows = [
        norm_row("beurling_norm", params, beurling_norm(A, p)),
        norm_row("beurling_star_norm", params, beurling_star_norm(A, p)),
        norm_row("schur_norm", {}, schur_norm(A)),
        norm_row("op_norm", {"p": 1}, op_norm(A, 1)),
        norm_row("op_norm", {"p": "inf"}, op_norm(A, math.inf)),
    ]
    if args.spectral:
        rows.append(norm_row("op_norm", {"p": 2}, op_norm(A, 2)))
    return Outcome({"config": cfg, "rows": rows})


def cmd_cover(args) -> Outcome:
    g = _graph(args)
    N = args.n if args.n is not None else 1
    m = graph_metrics(g, args.dim)
    f = maximal_disjoint_set(g, N)
    failures = [f"fusion_set_validity: {p}" for p in fusion_set_violations(f)]
    mult = []
    for N2 in sorted({2 * N, 3 * N, max(2 * N, m.diameter)}):
        lo, hi = covering_multiplicity(f, N2)
        bound = multiplicity_bound(m.D0, N, N2)
        ok = lo >= 1 and leq(hi, bound)
        mult.append({"N2": N2, "min": lo, "max": hi, "bound": bound, "pass": ok})
        if not ok:
            failures.append(f"fusion_counting_multiplicity: N'={N2}: max {hi} > {bound} or min {lo} < 1")
    density = []
    top = m.diameter / N + 1
    for R in sorted({0.0, 1.0, 3.0, min(4.0, top), top}):
        count, upper, lower = fusion_density(f, f.vertices[0], R, m)
        ok = leq(count, upper) and (lower is None or leq(lower, count))
        density.append({"R": R, "count": count, "upper": upper, "lower": lower, "pass": ok})
        if not ok:
            failures.append(f"fusion_density: R={R}: count {count} outside [{lower}, {upper}]")
    report = {"config": _config(args, "cover"), "metrics": m, "fusion_set": f, "multiplicity": mult, "density": density}
    return Outcome(report, failures)


def cmd_stability(args) -> Outcome:
    g = _graph(args)
    A = _matrix(args, g)
    cfg = _config(args, "stability")
    rep = stability_transfer_report(A, cfg.params(g), matrix_id=args.matrix)
    failures = []
    for pair in rep["pairs"]:
        if not pair["within_m_bound"]:
            failures.append(f"size_stability_baseline: p={pair['p']} q={pair['q']} ratio {pair['ratio']} vs M bound {pair['m_bound']}")
        if pair["ratio_within_factor"] is False:
            failures.append(f"stability_transfer_ratio: p={pair['p']} q={pair['q']} ratio {pair['ratio']} > {pair['transfer_factor']}")
    rep["config"] = cfg
    return Outcome(rep, failures)


def cmd_invert(args) -> Outcome:
    cfg = _config(args, "invert")
    if args.gammas:
        gammas = [float(x) for x in args.gammas.split(",")]
        p = cfg.params()
        study = agamma_scaling_study(gammas, p, M=args.n)
        failures = []
        if not study["implied_C_non_divergent"]:
            failures.append("inverse_implied_constant: implied C grows more than 2x as gamma shrinks")
        if not study["weakened_bound_fails"]:
            failures.append("inverse_near_optimality: weakened exponent is not violated on the grid")
        study["config"] = cfg
        return Outcome(study, failures, study["rows"], STUDY_COLUMNS)
    g = _graph(args)
    A = _matrix(args, g)
    rep = inversion_verify(A, cfg.params(g))
    return Outcome({"config": cfg, "report": rep})


def cmd_power(args) -> Outcome:
    g = _graph(args)
    A = _matrix(args, g)
    cfg = _config(args, "power")
    n_max = args.n or 64
    tr = power_trajectory(A, cfg.params(g), n_max)
    failures = [] if tr.non_divergent else ["power_implied_constant: implied C grows more than 2x over the second half"]
    report = {
        "config": cfg,
        "n_max": n_max,
        "non_divergent": tr.non_divergent,
        "poly_below_subexp_from": tr.poly_below_subexp_from,
        "max_implied_C": max(tr.implied_C),
    }
    return Outcome(report, failures, tr.rows(), TRAJECTORY_COLUMNS)


def cmd_markov(args) -> Outcome:
    g = _graph(args)
    P = make_matrix(args.matrix or "lazy_walk:0.5", g, seed=args.seed)
    cfg = _config(args, "markov")
    n_max = args.n or 64
    rep = markov_hop_report(P, args.alpha, n_max, d=args.dim)
    failures = []
    rows = rep["rows"]
    if rep["nearest_neighbour"] and not all(r["beyond_reach_zero"] for r in rows):
        failures.append("markov_finite_speed: nonzero entry beyond distance n")
    if not all(r["entries_le_one"] for r in rows):
        failures.append("markov_stochastic: entry of P^n exceeds 1")
    if max(r["row_sum_error"] for r in rows) > 1e-10:
        failures.append("markov_stochastic: row sums of P^n drift beyond 1e-10")
    if not rep["non_divergent"]:
        failures.append("markov_implied_constant: implied C grows more than 2x over the second half")
    rep["config"] = cfg
    return Outcome(rep, failures)


def _parse_symbol(text: str) -> list[complex]:
    try:
        return [complex(x.replace(" ", "")) for x in text.split(",")]
    except ValueError as e:
        raise SpecError(f"bad symbol coefficients {text!r}") from e


def cmd_convpow(args) -> Outcome:
    if args.seq:
        a = read_sequence(args.seq)
    else:
        a = as_sequence(_parse_symbol(args.symbol or "0.5,0.5"), args.start)
    n_max = args.n or 256
    rep = conv_power_growth(a, args.alpha, n_max)
    failures = []
    if not rep["slope_ok"]:
        failures.append(f"conv_power_growth: slope {rep['slope']} > alpha + 1 + 0.1")
    if not rep["wiener_ratio_non_divergent"]:
        failures.append("conv_power_wiener: Wiener norm / n^(1+eps) grows more than 2x")
    rep["config"] = _config(args, "convpow")
    rep["start"] = a.start
    rep["coefficients"] = [{"re": z.real, "im": z.imag} for z in a.values.tolist()]
    rows = [{"n": i + 1, "wiener_norm": w, "weighted_sup": s} for i, (w, s) in enumerate(zip(rep["wiener_norms"], rep["weighted_sup"]))]
    return Outcome(rep, failures, rows, ["n", "wiener_norm", "weighted_sup"])


def cmd_verify_all(args) -> Outcome:
    summary = verify_all(args.seed)
    failures = [f"{a}: {v['failures']} of {v['checks']} checks failed" for a, v in summary["anchors"].items() if v["failures"]]
    return Outcome(summary, failures)


COMMANDS = {
    "gen": (cmd_gen, "generate a graph and write it in the edge-list format"),
    "stats": (cmd_stats, "diameter, doubling constant and density constants"),
    "norm": (cmd_norm, "Beurling, starred, Schur and operator norms of a matrix"),
    "cover": (cmd_cover, "greedy fusion set at radius --n with counting checks"),
    "stability": (cmd_stability, "optimal lower stability bounds and transfer table"),
    "invert": (cmd_invert, "inverse norms and bound factor, or the A_gamma scaling study"),
    "power": (cmd_power, "power trajectory with implied constants"),
    "markov": (cmd_markov, "hopping bound and finite-speed checks for P^n"),
    "convpow": (cmd_convpow, "growth of convolution powers of a finite symbol"),
    "verify-all": (cmd_verify_all, "run the full invariant battery"),
}


def _dim(text: str) -> float:
    d = float(text)
    if not d > 0:
        raise argparse.ArgumentTypeError("dimension must be positive")
    return d


def _seed(text: str) -> int:
    try:
        return parse_seed(text)
    except (SpecError, ValueError) as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _r(text: str) -> float:
    try:
        return parse_r(text)
    except (SpecError, ValueError) as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--gen", metavar="NAME:ARGS", help="path:M, circulant:N, lattice:d,L, random:n,p or file:PATH")
    common.add_argument("--matrix", metavar="NAME:ARGS", help="a_gamma_path:g, a_gamma_circulant:g, shift, lazy_walk:l, random_band:w[,seed] or file:PATH")
    common.add_argument("--r", type=_r, default=1.0, help="1 <= r <= inf")
    common.add_argument("--alpha", type=float, default=2.0)
    common.add_argument("--dim", type=_dim, default=None, help="declared dimension d (default: the generator's)")
    common.add_argument("--gamma", type=float, default=None)
    common.add_argument("--n", type=int, default=None)
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--out", metavar="PATH", default=None)
    common.add_argument("--csv", metavar="PATH", default=None)

    parser = argparse.ArgumentParser(prog="decaynet", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {name: sub.add_parser(name, parents=[common], help=text) for name, (_, text) in COMMANDS.items()}
    subs["norm"].add_argument("--spectral", action="store_true", help="also compute the l2 operator norm")
    subs["invert"].add_argument("--gammas", default=None, help="comma-separated gamma grid for the scaling study")
    subs["convpow"].add_argument("--symbol", default=None, help="comma-separated coefficients, e.g. 0.5,0.5j")
    subs["convpow"].add_argument("--start", type=int, default=0, help="index of the first coefficient")
    subs["convpow"].add_argument("--seq", default=None, help="sequence file with 'k re im' lines")
    return parser


def _apply_gamma(args) -> None:
    # --gamma fills in the A_gamma parameter when --matrix names the family without one
    if args.gamma is None or not args.matrix:
        return
    if args.matrix in ("a_gamma_path", "a_gamma_circulant"):
        args.matrix = f"{args.matrix}:{args.gamma}"


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    _apply_gamma(args)
    handler = COMMANDS[args.command][0]
    try:
        outcome = handler(args)
    except (SpecError, DecayError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    outcome.report["pass"] = not outcome.failures
    # gen emits the graph file itself; everything else emits JSON
    text = outcome.text if outcome.text is not None else dumps(outcome.report)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.csv and outcome.csv_rows is not None:
        Path(args.csv).write_text(write_csv(outcome.csv_rows, outcome.csv_columns))
    for failure in outcome.failures:
        print(f"FAIL {failure}", file=sys.stderr)
    return 1 if outcome.failures else 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
