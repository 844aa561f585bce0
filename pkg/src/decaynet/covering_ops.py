"""Fusion-vertex covers, truncations, band approximation and commutators."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .beurling_norms import BeurlingParams, decay_envelope, envelope_norm, schur_norm
from .errors import BadRadius, NotNormal, RadiusTooSmall
from .graph_core import Graph, GraphMetrics
from .matrices import GraphMatrix
from .report import Check, leq


@dataclass(frozen=True, eq=False)
class FusionSet:
    graph: Graph
    N: int
    vertices: tuple[int, ...]
    selection_order: str = "ascending-id"

    def to_dict(self) -> dict:
        return {"N": self.N, "vertices": list(self.vertices)}


class TruncationKind(enum.Enum):
    SHARP = "sharp"
    TRAPEZOID = "trapezoid"


def psi0(t):
    """Trapezoid: 1 on |t| <= 1/2, 2 - 2|t| up to |t| = 1, then 0."""
    t = np.abs(np.asarray(t, dtype=float))
    return np.where(t <= 0.5, 1.0, np.where(t <= 1.0, 2.0 - 2.0 * t, 0.0))


def maximal_disjoint_set(g: Graph, N: int) -> FusionSet:
    """Greedy scan in ascending id order; keep v if its N-ball misses all kept balls.

    On a graph two N-balls are disjoint exactly when their centres are more
    than 2N apart, so the test is a single distance comparison.
    """
    if not 1 <= N <= max(g.diameter, 1):
        raise BadRadius(f"need 1 <= N <= diameter ({g.diameter}), got {N}")
    chosen: list[int] = []
    blocked = np.zeros(g.num_vertices, dtype=bool)
    for v in range(g.num_vertices):
        if not blocked[v]:
            chosen.append(v)
            blocked |= g.dist[v] <= 2 * N
    return FusionSet(g, N, tuple(chosen))


def fusion_set_violations(f: FusionSet) -> list[str]:
    """Exhaustive check of disjointness, maximality and the 2N-cover, via explicit balls."""
    g, N = f.graph, f.N
    balls = g.dist <= N
    members = list(f.vertices)
    problems = []
    for i, a in enumerate(members):
        for b in members[i + 1 :]:
            if (balls[a] & balls[b]).any():
                problems.append(f"balls of {a} and {b} intersect")
    union = balls[members].any(axis=0)
    for v in range(g.num_vertices):
        if not (balls[v] & union).any():
            problems.append(f"ball of {v} misses every member ball")
    covered = (g.dist[members] <= 2 * N).any(axis=0)
    if not covered.all():
        problems.append(f"{int((~covered).sum())} vertices outside the 2N-balls")
    return problems


def covering_multiplicity(f: FusionSet, N2: int) -> tuple[int, int]:
    """(min, max) over vertices of the number of members within distance N2."""
    if N2 < 2 * f.N:
        raise RadiusTooSmall(f"need N' >= 2N = {2 * f.N}, got {N2}")
    counts = (f.graph.dist[list(f.vertices)] <= N2).sum(axis=0)
    return int(counts.min()), int(counts.max())


def multiplicity_bound(D0: float, N: int, N2: int) -> float:
    return D0 ** math.ceil(math.log2(2 * N2 / N + 1))


def fusion_density(f: FusionSet, v: int, R: float, metrics: GraphMetrics) -> tuple[int, float, float | None]:
    """Count members within N*R of v, with the upper and (R >= 3) lower bounds."""
    if not metrics.normal or metrics.D2 <= 0:
        raise NotNormal("fusion density bounds need a normal counting measure")
    if R < 0 or R > f.graph.diameter / f.N + 1:
        raise BadRadius(f"R must lie in [0, diameter/N + 1], got {R}")
    count = int((f.graph.dist[list(f.vertices), v] <= f.N * R).sum())
    ratio = metrics.D1 / metrics.D2
    upper = ratio * (R + 1) ** metrics.d
    lower = ((R - 2) / 3) ** metrics.d / ratio if R >= 3 else None
    return count, upper, lower


def truncation_diag(g: Graph, v: int, N: int, kind: TruncationKind = TruncationKind.TRAPEZOID) -> GraphMatrix:
    if N < 1:
        raise BadRadius("truncation radius must be >= 1")
    t = g.dist[v] / N
    w = (t <= 1.0).astype(float) if kind is TruncationKind.SHARP else psi0(t)
    return GraphMatrix(g, np.diag(w))


def band_truncate(A: GraphMatrix, N: int) -> GraphMatrix:
    """Zero every entry with rho > N."""
    if N < 0:
        raise BadRadius("band radius must be >= 0")
    return A.like(np.where(A.graph.dist <= N, A.entries, 0.0))


def band_tail_bound(h: np.ndarray, N: int, D1: float, d: float) -> float:
    """D1 ((N+2)^d h(N+1) + d sum_{n >= N+2} h(n) (n+1)^(d-1))."""
    h = np.asarray(h, dtype=float)
    hN1 = h[N + 1] if N + 1 < len(h) else 0.0
    n = np.arange(N + 2, len(h))
    return float(D1 * ((N + 2) ** d * hN1 + d * (h[N + 2 :] * (n + 1.0) ** (d - 1)).sum()))


def tail_schur_report(A: GraphMatrix, N: int, metrics: GraphMetrics) -> Check:
    exact = schur_norm(A - band_truncate(A, N))
    bound = band_tail_bound(decay_envelope(A), N, metrics.D1, metrics.d)
    return Check("tail_schur_report", "band_tail_schur", {"N": N}, exact, [bound], leq(exact, bound))


def commutator(A: GraphMatrix, D: GraphMatrix) -> GraphMatrix:
    """[A, D] = A D - D A for diagonal D, formed entrywise as a(i,j) (d_j - d_i)."""
    w = D.diagonal()
    return A.like(A.entries * (w[None, :] - w[:, None]))


def commutator_lipschitz_report(A: GraphMatrix, v: int, N: int, metrics: GraphMetrics) -> Check:
    """||[A_N, Psi_v^{4N}]||_S <= Lipschitz bound <= envelope bound."""
    if N < 1:
        raise BadRadius("commutator radius must be >= 1")
    g = A.graph
    AN = band_truncate(A, N)
    exact = schur_norm(commutator(AN, truncation_diag(g, v, 4 * N)))
    weighted = A.like(np.where(g.dist <= N, A.abs * g.dist, 0.0))
    lipschitz = schur_norm(weighted) / (2 * N)
    h = decay_envelope(A)
    n = np.arange(N + 1)
    hn = np.zeros(N + 1)
    hn[: min(N + 1, len(h))] = h[: N + 1]
    d = metrics.d
    envelope = (d + 1) * metrics.D1 * (hn * (n + 1.0) ** d).sum() / (2 * N)
    passed = leq(exact, lipschitz) and leq(lipschitz, envelope)
    return Check("commutator_lipschitz_report", "commutator_lipschitz", {"v": v, "N": N}, exact, [lipschitz, envelope], passed)


def coarsened_envelope(b: np.ndarray, f: FusionSet) -> np.ndarray:
    """h(n) = max over member pairs with rho >= N n of |b|."""
    idx = list(f.vertices)
    rho = f.graph.dist[np.ix_(idx, idx)]
    levels = rho // f.N  # largest n with N n <= rho
    top = int(levels.max())
    per_level = np.zeros(top + 1)
    np.maximum.at(per_level, levels.ravel(), np.abs(b).ravel())
    h = np.maximum.accumulate(per_level[::-1])[::-1]
    return np.append(h, 0.0)


def coarsened_norm(b: np.ndarray, f: FusionSet, p: BeurlingParams) -> float:
    """Beurling-type norm of a matrix indexed by the fusion vertices, at scale N."""
    b = np.asarray(b)
    k = len(f.vertices)
    if b.shape != (k, k):
        raise ValueError(f"matrix must be {k}x{k} over the fusion set")
    return envelope_norm(coarsened_envelope(b, f), p)
