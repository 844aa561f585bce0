"""Umbrella invariant suite over the standard graph and matrix battery."""

from __future__ import annotations

import math
from collections import OrderedDict

import numpy as np

from . import beurling_norms as bn
from .beurling_norms import BeurlingParams
from .covering_ops import (
    FusionSet,
    coarsened_norm,
    commutator_lipschitz_report,
    covering_multiplicity,
    fusion_density,
    fusion_set_violations,
    maximal_disjoint_set,
    multiplicity_bound,
    tail_schur_report,
)
from .graph_core import (
    Graph,
    gen_circulant,
    gen_lattice_box,
    gen_path,
    gen_random_connected,
    graph_metrics,
    weighted_tail_sums,
)
from .inversion import invert, inversion_verify
from .matrices import GraphMatrix, a_gamma, identity, lattice_translation, random_band, shift
from .powers_markov import conv_power, lazy_walk, markov_hop_report, matrix_power, power_submult_rows
from .report import Check, leq
from .stability import EXPONENTS, lower_stability_bound, stability_transfer_report

INF = math.inf


def standard_graphs(seed: int) -> list[Graph]:
    graphs = [
        gen_path(101),
        gen_path(256),
        gen_circulant(8),
        gen_circulant(64),
        gen_circulant(256),
        gen_lattice_box(2, 11),
    ]
    for i in range(3):
        graphs.append(gen_random_connected(40, 0.08, seed=seed * 1000 + i))
    return graphs


def standard_matrices(g: Graph, rng: np.random.Generator) -> list[tuple[str, GraphMatrix]]:
    """Random band matrices of several widths plus the structured families that live on ``g``."""
    out = [("identity", identity(g))]
    for width in (1, 2, 3, 5):
        for decay in (0.5, 2.0):
            out.append((f"band:{width}:{decay}", random_band(g, width, rng, decay=decay)))
    out.append(("band_real:2", random_band(g, 2, rng, complex_entries=False)))
    if g.name.startswith("path"):
        out.append(("a_gamma:0.1", a_gamma(g, 0.1)))
        out.append(("a_gamma:1", a_gamma(g, 1.0)))
    if g.name.startswith("circulant"):
        out.append(("a_gamma_circ:0.1", a_gamma(g, 0.1, wrap=True)))
        out.append(("shift", shift(g)))
    if g.name.startswith("lattice"):
        for k in (1, 3, 5):
            out.append((f"translation:{k}", lattice_translation(g, 11, 2, k)))
    out.append(("lazy_walk:0.5", lazy_walk(g, 0.5)))
    return out


def params_for(d: float) -> list[BeurlingParams]:
    return [
        BeurlingParams(1, 0.5, d),
        BeurlingParams(1, 1.0, d),
        BeurlingParams(2, d / 2 + 0.5, d),
        BeurlingParams(INF, d + 0.5, d),
        BeurlingParams(INF, d + 1.0, d),
        BeurlingParams(INF, d + 1.5, d),
    ]


def _check(anchor: str, op: str, inputs: dict, exact: float, bounds: list, passed: bool) -> Check:
    return Check(op, anchor, inputs, float(exact), [float(b) for b in bounds], bool(passed))


# graph level


def graph_checks(g: Graph, rng: np.random.Generator):
    m = graph_metrics(g)
    d, diam = m.d, m.diameter
    balls = g.ball_table
    # every real radius R in [0, diam]: ball size is constant on [k, k+1)
    for v in rng.choice(g.num_vertices, size=min(5, g.num_vertices), replace=False).tolist():
        R = np.arange(diam + 1)
        upper_ok = (balls[v] <= m.D1 * (R + 1.0) ** d * (1 + 1e-12)).all()
        right = np.minimum(R + 1.0, diam)
        lower_ok = (balls[v] >= m.D2 * (right + 1.0) ** d * (1 - 1e-12)).all()
        yield _check("ball_growth_normal", "growth_constants", {"graph": g.name, "v": v}, balls[v, -1], [m.D1, m.D2], upper_ok and lower_ok)
        k = np.arange(2 * diam + 1)
        ratio = (balls[v, np.minimum(k, diam)] / balls[v, k // 2]).max()
        yield _check("doubling_constant", "doubling_constant", {"graph": g.name, "v": v}, ratio, [m.D0], leq(ratio, m.D0))
    yield from fusion_checks(g, m, rng)


def fusion_checks(g: Graph, m, rng: np.random.Generator):
    for N in range(1, min(m.diameter, 6) + 1):
        f = maximal_disjoint_set(g, N)
        problems = fusion_set_violations(f)
        yield _check("fusion_set_validity", "maximal_disjoint_set", {"graph": g.name, "N": N}, len(problems), [0], not problems)
        for N2 in sorted({2 * N, 3 * N, m.diameter}):
            if N2 < 2 * N:
                continue
            lo, hi = covering_multiplicity(f, N2)
            bound = multiplicity_bound(m.D0, N, N2)
            yield _check(
                "fusion_counting_multiplicity", "covering_multiplicity",
                {"graph": g.name, "N": N, "N2": N2}, hi, [bound, lo], lo >= 1 and leq(hi, bound),
            )
        top = m.diameter / N + 1
        for v in rng.choice(g.num_vertices, size=min(3, g.num_vertices), replace=False).tolist():
            for R in sorted({0.0, 1.0, 2.5, 3.0, 4.0, top}):
                if R > top:
                    continue
                count, upper, lower = fusion_density(f, v, R, m)
                ok = leq(count, upper) and (lower is None or leq(lower, count))
                yield _check(
                    "fusion_density", "fusion_density", {"graph": g.name, "N": N, "v": v, "R": R},
                    count, [upper] + ([lower] if lower is not None else []), ok,
                )


# matrix level


def norm_checks(g: Graph, name: str, A: GraphMatrix, rng: np.random.Generator):
    m = graph_metrics(g)
    d, D1 = m.d, m.D1
    tag = {"graph": g.name, "matrix": name}
    h = bn.decay_envelope(A)
    mono = bool((np.diff(h) <= 0).all() and h[-1] == 0)
    yield _check("decay_envelope_monotone", "decay_envelope", tag, h[0], [], mono)

    # Schur chain
    schur = bn.schur_norm(A)
    base = bn.beurling_norm(A, BeurlingParams(1, 0.0, d))
    ops = [bn.op_norm(A, q) for q in EXPONENTS]
    ok = all(leq(o, schur, 1e-10) for o in ops) and leq(schur, d * D1 * base)
    yield _check("opnorm_schur_chain", "schur_norm", tag, max(ops), [schur, d * D1 * base], ok)

    for p in params_for(d):
        nB = bn.beurling_norm(A, p)
        ir = p.inv_r
        factor = (p.alpha - (d - 1) * (1 - ir)) / (p.alpha - d * (1 - ir))
        bound = factor * d * D1 * nB
        yield _check("opnorm_beurling_bound", "op_norm", {**tag, **p.to_dict()}, max(ops), [bound], leq(max(ops), bound, 1e-10))
        if d == 1:
            # the starred norm has no (n+1)^(d-1) weight, so the comparison is a d = 1 statement
            star = bn.beurling_star_norm(A, p)
            c = 2.0 ** (2 * (p.alpha + ir))
            yield _check(
                "beurling_norm_equivalence", "beurling_star_norm", {**tag, **p.to_dict()},
                star, [nB, c * nB], leq(nB, star) and leq(star, c * nB),
            )

    r = float(rng.choice([1.0, 2.0]))
    r2 = float(rng.choice([x for x in (1.0, 2.0, 4.0, INF) if x >= r]))
    alpha = float(rng.uniform(0, 2))
    gamma = alpha + float(rng.uniform(0, 1))
    beta = gamma + d * (1 / r - (0 if math.isinf(r2) else 1 / r2)) + float(rng.uniform(0.1, 1))
    row = bn.check_embeddings(A, r, r2, alpha, gamma, beta, d)
    row.inputs.update(tag)
    yield row

    # solidity against a random dominating matrix
    scale = rng.uniform(0, 1, size=A.entries.shape)
    phase = np.exp(2j * np.pi * rng.uniform(size=A.entries.shape))
    dominated = A.like(A.entries * scale * phase)
    p = params_for(d)[2]
    ok = bn.check_solid(dominated, A, p)
    yield _check("beurling_solid", "check_solid", tag, bn.beurling_norm(dominated, p), [bn.beurling_norm(A, p)], ok)

    # covering / truncation
    diam = m.diameter
    for N in sorted({0, 1, int(rng.integers(0, diam + 1))}):
        row = tail_schur_report(A, N, m)
        row.inputs.update(tag)
        yield row
    for _ in range(2):
        v = int(rng.integers(g.num_vertices))
        N = int(rng.integers(1, max(2, diam // 2 + 1)))
        row = commutator_lipschitz_report(A, v, N, m)
        row.inputs.update(tag)
        yield row
    # ball summation estimates with a decreasing envelope
    v = int(rng.integers(g.num_vertices))
    s = int(rng.integers(0, diam + 1))
    lhs_i, rhs_i, lhs_ii, rhs_ii = weighted_tail_sums(g, v, h, s, d, D1)
    yield _check("ball_sum_weighted_distance", "weighted_tail_sums", {**tag, "v": v, "s": s}, lhs_i, [rhs_i], leq(lhs_i, rhs_i))
    yield _check("ball_sum_tail", "weighted_tail_sums", {**tag, "v": v, "s": s}, lhs_ii, [rhs_ii], leq(lhs_ii, rhs_ii))

    full = FusionSet(g, 1, tuple(range(g.num_vertices)))
    p = params_for(d)[0]
    cn, bnorm = coarsened_norm(A.entries, full, p), bn.beurling_norm(A, p)
    yield _check("coarsened_norm_unit_scale", "coarsened_norm", tag, cn, [bnorm], abs(cn - bnorm) <= 1e-12 * max(1.0, bnorm))


def product_checks(g: Graph, mats: list, rng: np.random.Generator):
    d = graph_metrics(g).d
    for _ in range(4):
        i, j = rng.integers(len(mats), size=2)
        (na, A), (nb_, B) = mats[i], mats[j]
        for p in params_for(d):
            row = bn.check_submultiplicative(A, B, p)
            row.inputs.update({"graph": g.name, "A": na, "B": nb_})
            yield row
    # translations are where the Schur-weighted constant is tight
    for name, A in mats:
        if name.startswith("translation"):
            for p in (BeurlingParams(1, 1.0, 2.0), BeurlingParams(1, 0.5, 2.0)):
                row = bn.check_submultiplicative(A, A, p)
                row.inputs.update({"graph": g.name, "A": name, "B": name})
                yield row
    A = mats[int(rng.integers(1, len(mats)))][1]
    B = mats[int(rng.integers(1, len(mats)))][1]
    p = params_for(d)[3]
    if bn.beurling_norm(A, p) > 0 and bn.beurling_norm(B, p) > 0:
        ratio = bn.differential_ratio(A, B, p)
        yield _check("differential_ratio_finite", "differential_ratio", {"graph": g.name}, ratio, [], math.isfinite(ratio))


def stability_checks(g: Graph, rng: np.random.Generator, trials: int):
    d = graph_metrics(g).d
    params = BeurlingParams(INF, d + 1.5, d)
    for t in range(trials):
        A = random_band(g, int(rng.integers(1, 4)), rng, decay=2.0, dominant=True)
        tag = {"graph": g.name, "trial": t}
        inv = invert(A)
        for q in EXPONENTS:
            prod = lower_stability_bound(A, q) * bn.op_norm(inv, q)
            yield _check("stability_exactness", "lower_stability_bound", {**tag, "p": q}, prod, [1.0], abs(prod - 1) <= 1e-10)
        rep = stability_transfer_report(A, params)
        b = rep["bounds"]
        geo = math.sqrt(b["p1"] * b["pinf"])
        yield _check("stability_interpolation", "lower_stability_bound", tag, b["p2"], [geo], leq(geo, b["p2"], 1e-10))
        for pair in rep["pairs"]:
            yield _check(
                "size_stability_baseline", "stability_transfer_report", {**tag, "p": pair["p"], "q": pair["q"]},
                pair["ratio"], [pair["m_bound"]], pair["within_m_bound"],
            )
            if pair["ratio_within_factor"] is not None:
                yield _check(
                    "stability_transfer_ratio", "transfer_bound_factor", {**tag, "p": pair["p"], "q": pair["q"]},
                    pair["ratio"], [pair["transfer_factor"]], pair["ratio_within_factor"],
                )
        rep = inversion_verify(A, params)
        ok = math.isfinite(rep.norm_Ainv_beurling) and rep.implied_C > 0
        yield _check("inverse_closed_finite", "inversion_verify", tag, rep.norm_Ainv_beurling, [rep.bound_factor], ok)


def structured_checks(graphs: list):
    for g in graphs:
        if g.name.startswith("path"):
            for gamma in (1.0, 0.1):
                A = a_gamma(g, gamma)
                inv = invert(A).entries
                i, j = np.indices(inv.shape)
                oracle = np.where(j >= i, np.exp(-(j - i) * gamma), 0.0)
                err = float(np.abs(inv - oracle).max())
                yield _check("inverse_bidiagonal_closed_form", "invert", {"graph": g.name, "gamma": gamma}, err, [1e-12], err <= 1e-12)
                for r, alpha in ((1, 1.5), (2, 2.0), (1, 2.0)):
                    val = bn.beurling_norm(A, BeurlingParams(r, alpha, 1.0))
                    exact = (1 + 2 ** (alpha * r) * math.exp(-gamma * r)) ** (1 / r)
                    yield _check(
                        "agamma_norm_closed_form", "beurling_norm", {"graph": g.name, "gamma": gamma, "r": r, "alpha": alpha},
                        val, [exact], abs(val - exact) <= 1e-12 * exact,
                    )
        if g.name.startswith("circulant") and g.num_vertices >= 64:
            gamma = 0.1
            A = a_gamma(g, gamma, wrap=True)
            target = 1 - math.exp(-gamma)
            for q in EXPONENTS:
                val = lower_stability_bound(A, q)
                yield _check(
                    "circulant_stability_closed_form", "lower_stability_bound", {"graph": g.name, "p": q},
                    val, [target], abs(val - target) <= 1e-10 * target,
                )
            S = shift(g)
            half = g.num_vertices // 2
            Sn = identity(g).entries
            for n in range(1, half):
                Sn = Sn @ S.entries
                P = S.like(Sn)
                for r, alpha in ((INF, 2.0), (1, 1.0), (2, 1.5)):
                    val = bn.beurling_norm(P, BeurlingParams(r, alpha, 1.0))
                    k = np.arange(n + 1, dtype=float)
                    exact = (n + 1.0) ** alpha if math.isinf(r) else float(((k + 1) ** (alpha * r)).sum() ** (1 / r))
                    if n % 8 == 1 or n == half - 1:
                        yield _check(
                            "shift_power_closed_form", "beurling_norm", {"graph": g.name, "n": n, "r": r, "alpha": alpha},
                            val, [exact], abs(val - exact) <= 1e-12 * exact,
                        )
            A = random_band(g, 2, np.random.default_rng(g.num_vertices), decay=1.0)
            A = A * (1 / bn.op_norm(A, 2))
            for m_, n_ in ((1, 2), (3, 4), (5, 8)):
                lhs = matrix_power(A, m_ + n_).entries
                rhs = (matrix_power(A, m_) @ matrix_power(A, n_)).entries
                err = float(np.abs(lhs - rhs).max() / max(np.abs(lhs).max(), 1e-300))
                yield _check("matrix_power_consistency", "matrix_power", {"graph": g.name, "m": m_, "n": n_}, err, [1e-9], err <= 1e-9)
            for n, (lhs, rhs) in zip((1, 2, 4, 8), power_submult_rows(A, BeurlingParams(INF, 2.0, 1.0), (1, 2, 4, 8))):
                yield _check("power_submultiplicative", "power_submult_rows", {"graph": g.name, "n": n}, lhs, [rhs], leq(lhs, rhs))
        if g.num_vertices <= 256 and g.name.startswith(("circulant", "path", "lattice")):
            P = lazy_walk(g, 0.5)
            d = graph_metrics(g).d
            rep = markov_hop_report(P, d + 1.5, min(32, g.diameter + 2))
            speed = all(r["beyond_reach_zero"] for r in rep["rows"])
            mass = max(r["row_sum_error"] for r in rep["rows"])
            le1 = all(r["entries_le_one"] for r in rep["rows"])
            yield _check("markov_finite_speed", "markov_hop_report", {"graph": g.name}, 0.0, [0.0], speed)
            yield _check("markov_stochastic", "markov_hop_report", {"graph": g.name}, mass, [1e-10], mass <= 1e-10 and le1)
            cs = [r["implied_C"] for r in rep["rows"]]
            yield _check("markov_implied_constant", "markov_hop_report", {"graph": g.name}, max(cs), [], rep["non_divergent"])
    for a in ([0.5, 0.5], [0.5, 0.5j], [0.25, 0.5, 0.25]):
        nonneg = all(np.isreal(x) and np.real(x) >= 0 for x in a)
        for n in (1, 16, 64, 256):
            w = conv_power(a, n).wiener_norm()
            if nonneg:
                yield _check("conv_power_wiener", "conv_power", {"a": str(a), "n": n}, w, [1.0], abs(w - 1) <= 1e-12)
            else:
                yield _check("conv_power_wiener", "conv_power", {"a": str(a), "n": n}, w, [1.0], leq(w, 1.0, 1e-12))


def run_checks(seed: int = 0, stability_trials: int = 4) -> list[Check]:
    rng = np.random.default_rng(seed)
    graphs = standard_graphs(seed)
    rows: list[Check] = []
    for g in graphs:
        rows.extend(graph_checks(g, rng))
        mats = standard_matrices(g, rng)
        for name, A in mats:
            rows.extend(norm_checks(g, name, A, rng))
        rows.extend(product_checks(g, mats, rng))
        if g.num_vertices <= 256:
            rows.extend(stability_checks(g, rng, stability_trials))
    rows.extend(structured_checks(graphs))
    return rows


def summarize(rows: list[Check], seed: int) -> dict:
    anchors: OrderedDict[str, dict] = OrderedDict()
    for row in rows:
        entry = anchors.setdefault(row.anchor, {"checks": 0, "failures": 0})
        entry["checks"] += 1
        entry["failures"] += 0 if row.passed else 1
    failures = [row.to_dict() for row in rows if not row.passed]
    return {
        "seed": seed,
        "graphs": [g.name for g in standard_graphs(seed)],
        "num_checks": len(rows),
        "num_anchors": len(anchors),
        "anchors": anchors,
        "failures": failures,
        "passed": not failures,
    }


def verify_all(seed: int = 0, stability_trials: int = 4) -> dict:
    """Run every check on the standard battery; failures are reported, never raised."""
    return summarize(run_checks(seed, stability_trials), seed)
