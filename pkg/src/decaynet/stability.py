"""Optimal lower l^p-stability bounds and the l^p -> l^q bound transfer.

For an invertible square matrix the optimal constant in ``||Ac||_p >= A_p ||c||_p``
is ``1 / ||A^{-1}||_p``; for p = 2 it is the smallest singular value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .beurling_norms import BeurlingParams, beurling_norm, size_cap
from .errors import RegimeViolation, SizeCap
from .graph_core import gen_path
from .inversion import invert
from .matrices import GraphMatrix, a_gamma, random_band

EXPONENTS = (1.0, 2.0, math.inf)


def _inv(p: float) -> float:
    return 0.0 if math.isinf(p) else 1.0 / p


def _label(p: float) -> str:
    return "pinf" if math.isinf(p) else f"p{int(p)}"


@dataclass(frozen=True)
class StabilityBoundSpec:
    p: float
    q: float
    K0: int
    theta: float
    exponent: float
    log_case: bool


def stability_spec(p: float, q: float, params: BeurlingParams) -> StabilityBoundSpec:
    """K0 = least integer > d / min(alpha - d/r', 1); theta and (1+theta)^K0 follow."""
    if not params.stability_ok:
        raise RegimeViolation("bound transfer needs alpha > d/r'")
    gap = params.min_gap
    K0 = math.floor(params.d / gap) + 1
    spread = params.d * abs(_inv(p) - _inv(q))
    theta = spread / (K0 * gap - spread)
    return StabilityBoundSpec(p, q, K0, theta, (1 + theta) ** K0, params.log_case)


def lower_stability_bound(A: GraphMatrix, p: float) -> float:
    """A_p for p in {1, 2, inf}."""
    if p == 2:
        if A.n > size_cap():
            raise SizeCap(f"singular values capped at {size_cap()} vertices")
        return float(np.linalg.svd(A.entries, compute_uv=False)[-1])
    if p == 1:
        return 1.0 / float(np.abs(invert(A).entries).sum(axis=0).max())
    if math.isinf(p):
        return 1.0 / float(np.abs(invert(A).entries).sum(axis=1).max())
    raise ValueError(f"exact stability bound only for p in {{1, 2, inf}}, got {p}")


def _pnorm(x: np.ndarray, p: float) -> np.ndarray:
    return np.linalg.norm(x, ord=p, axis=0)


def stability_bracket(
    A: GraphMatrix, p: float, probes: int = 64, rng: np.random.Generator | None = None
) -> tuple[float, float]:
    """Interpolation lower bound and probe upper bound for A_p, 1 < p < inf."""
    if not 1 < p < math.inf:
        raise ValueError("bracket is for 1 < p < inf")
    rng = np.random.default_rng(0) if rng is None else rng
    lower = lower_stability_bound(A, 1) ** (1 / p) * lower_stability_bound(A, math.inf) ** (1 - 1 / p)
    inv = invert(A).entries
    candidates = [
        inv,
        inv.conj().T,
        rng.standard_normal((A.n, probes)) + 1j * rng.standard_normal((A.n, probes)),
    ]
    _, _, vh = np.linalg.svd(A.entries)
    candidates.append(vh.conj().T[:, -1:])
    upper = math.inf
    for c in candidates:
        upper = min(upper, float((_pnorm(A.entries @ c, p) / _pnorm(c, p)).min()))
    return lower, upper


def transfer_bound_factor(norm_B: float, A_p: float, spec: StabilityBoundSpec, params: BeurlingParams) -> float:
    """Growth factor (x)^E, or (x ln(1+x))^E in the log case, with x = norm_B / A_p.

    The unspecified absolute constant is not included.
    """
    if not params.stability_ok:
        raise RegimeViolation("bound transfer needs alpha > d/r'")
    if not A_p > 0:
        raise ValueError("A_p must be positive")
    x = norm_B / A_p
    if spec.log_case:
        x = x * math.log1p(x)
    try:
        return x**spec.exponent
    except OverflowError:
        return math.inf


def stability_transfer_report(
    A: GraphMatrix, params: BeurlingParams, exps=EXPONENTS, matrix_id: str = "A"
) -> dict:
    """Exact A_p for each exponent and the ratio/bound table for every ordered pair."""
    if not params.stability_ok:
        raise RegimeViolation("bound transfer needs alpha > d/r'")
    norm_B = beurling_norm(A, params)
    bounds = {p: lower_stability_bound(A, p) for p in exps}
    M = A.n
    pairs = []
    for p in exps:
        for q in exps:
            if p == q:
                continue
            spec = stability_spec(p, q, params)
            factor = transfer_bound_factor(norm_B, bounds[p], spec, params)
            ratio = bounds[p] / bounds[q]
            m_bound = M ** abs(_inv(p) - _inv(q))
            pairs.append(
                {
                    "p": _label(p)[1:],
                    "q": _label(q)[1:],
                    "ratio": ratio,
                    "m_bound": m_bound,
                    "within_m_bound": bool(1 / m_bound <= ratio * (1 + 1e-10) and ratio <= m_bound * (1 + 1e-10)),
                    "transfer_factor": factor,
                    "exponent": spec.exponent,
                    "ratio_within_factor": bool(ratio <= factor * (1 + 1e-10)) if factor >= 1 else None,
                    "empirical_C": (norm_B / bounds[q]) / factor,
                }
            )
    return {
        "matrix_id": matrix_id,
        "M": M,
        "params": params.to_dict(),
        "norm_B": norm_B,
        "bounds": {_label(p): v for p, v in bounds.items()},
        "pairs": pairs,
    }


def _non_divergent(values, split: int) -> bool:
    return max(values[split:]) <= 2 * max(values[:split])


def perturbed_agamma(M: int, gamma: float, seed: int = 0, spread: float = 0.2) -> GraphMatrix:
    """Bidiagonal A_gamma on a path with a fixed random diagonal scaling in [1-spread, 1+spread]."""
    A = a_gamma(gen_path(M), gamma)
    pert = 1 + spread * (2 * np.random.default_rng(seed).random(M) - 1)
    return A.like(A.entries + np.diag(pert - 1))


def stability_scaling_family(
    params: BeurlingParams, ks=range(1, 6), M: int = 256, seed: int = 0, exps=EXPONENTS
) -> dict:
    """Fit log(A_p/A_q) against log(||A||_B / A_p) over gamma = 2^-k for every ordered pair."""
    reports = [stability_transfer_report(perturbed_agamma(M, 2.0**-k, seed), params, exps, f"agamma_2^-{k}") for k in ks]
    pairs = []
    for i, pair in enumerate(reports[0]["pairs"]):
        lp, lq = "p" + pair["p"], "p" + pair["q"]
        x = [math.log(r["norm_B"] / r["bounds"][lp]) for r in reports]
        y = [math.log(r["bounds"][lp] / r["bounds"][lq]) for r in reports]
        slope = float(np.polyfit(x, y, 1)[0])
        cs = [r["pairs"][i]["empirical_C"] for r in reports]
        pairs.append(
            {
                "p": pair["p"],
                "q": pair["q"],
                "slope": slope,
                "slope_bound": pair["exponent"] - 1 + 0.1,
                "slope_ok": slope <= pair["exponent"] - 1 + 0.1,
                "empirical_C": cs,
                "non_divergent": _non_divergent(cs, len(cs) // 2),
            }
        )
    return {"M": M, "seed": seed, "params": params.to_dict(), "gammas": [2.0**-k for k in ks], "pairs": pairs}


def size_trend(
    params: BeurlingParams, sizes=(64, 128, 256, 512), trials: int = 5, width: int = 3, seed: int = 0
) -> dict:
    """Max empirical C over random dominant band matrices for each path size M."""
    rng = np.random.default_rng(seed)
    per_size = []
    for M in sizes:
        g = gen_path(M)
        best = 0.0
        for _ in range(trials):
            A = random_band(g, width, rng, decay=2.0, dominant=True)
            rep = stability_transfer_report(A, params)
            best = max(best, max(p["empirical_C"] for p in rep["pairs"]))
        per_size.append(best)
    half = len(sizes) // 2
    return {
        "sizes": list(sizes),
        "max_empirical_C": per_size,
        "non_divergent": _non_divergent(per_size, half),
    }
