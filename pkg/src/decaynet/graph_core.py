"""Finite connected simple graphs and their metric-measure constants.

Every bound elsewhere in the package is phrased in terms of the geodesic
distance ``rho``, the counting measure of balls ``mu(B(v, R))`` and the
constants extracted here (doubling constant, density ``D1`` for a declared
dimension ``d``, lower normality constant ``D2``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import (
    BadDimension,
    EnvelopeNotMonotone,
    GraphTooSmall,
    NotConnected,
    NotSimple,
    SizeTooSmall,
)


@dataclass(frozen=True, eq=False)
class Graph:
    """Connected simple graph with a materialized all-pairs distance table.

    ``dim`` is the dimension the generator vouches for; it is only a default
    for callers that do not pass ``d`` explicitly.
    """

    num_vertices: int
    adjacency: tuple[tuple[int, ...], ...]
    dist: np.ndarray = field(repr=False)
    name: str = "graph"
    dim: float = 1.0

    @cached_property
    def diameter(self) -> int:
        return int(self.dist.max())

    @cached_property
    def num_edges(self) -> int:
        return sum(len(nb) for nb in self.adjacency) // 2

    @cached_property
    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, nb in enumerate(self.adjacency) for v in nb if u < v]

    @cached_property
    def ball_table(self) -> np.ndarray:
        """``ball_table[v, R] = mu(B(v, R))`` for ``R = 0..diameter``."""
        n, width = self.num_vertices, self.diameter + 1
        offsets = self.dist + (np.arange(n) * width)[:, None]
        hist = np.bincount(offsets.ravel(), minlength=n * width).reshape(n, width)
        return np.cumsum(hist, axis=1)

    @cached_property
    def distance_buckets(self) -> tuple[np.ndarray, np.ndarray]:
        """Flat index permutation grouping entries by distance, plus bucket starts."""
        flat = self.dist.ravel()
        order = np.argsort(flat, kind="stable")
        starts = np.searchsorted(flat[order], np.arange(self.diameter + 1))
        return order, starts

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])


@dataclass(frozen=True)
class GraphMetrics:
    diameter: int
    d: float
    D0: float
    D1: float
    D2: float
    normal: bool

    def to_dict(self) -> dict:
        return {
            "diameter": self.diameter,
            "d": self.d,
            "D0": self.D0,
            "D1": self.D1,
            "D2": self.D2,
            "normal": self.normal,
        }


def _distances(n: int, adjacency: Sequence[Sequence[int]]) -> np.ndarray:
    rows = np.repeat(np.arange(n), [len(nb) for nb in adjacency])
    cols = np.fromiter((v for nb in adjacency for v in nb), dtype=np.int64, count=len(rows))
    csr = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    dist = shortest_path(csr, directed=False, unweighted=True)
    if not np.isfinite(dist).all():
        raise NotConnected("graph is not connected")
    return dist.astype(np.int32)


def build_graph(
    num_vertices: int,
    edges: Iterable[tuple[int, int]],
    name: str = "graph",
    dim: float = 1.0,
) -> Graph:
    """Validate an edge list and compute all-pairs geodesic distances."""
    n = int(num_vertices)
    edges = [(int(u), int(v)) for u, v in edges]
    if n < 1:
        raise SizeTooSmall("need at least one vertex")
    if not edges and n > 1:
        raise NotConnected("empty edge list")
    neighbors: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise NotSimple(f"edge ({u}, {v}) out of range for {n} vertices")
        if u == v:
            raise NotSimple(f"self-loop at {u}")
        if v in neighbors[u]:
            raise NotSimple(f"duplicate edge ({u}, {v})")
        neighbors[u].add(v)
        neighbors[v].add(u)
    adjacency = tuple(tuple(sorted(nb)) for nb in neighbors)
    dist = _distances(n, adjacency)
    dist.setflags(write=False)
    return Graph(n, adjacency, dist, name=name, dim=float(dim))


def gen_path(M: int) -> Graph:
    if M < 2:
        raise SizeTooSmall("path needs M >= 2")
    return build_graph(M, [(i, i + 1) for i in range(M - 1)], name=f"path:{M}", dim=1.0)


def gen_circulant(N: int) -> Graph:
    """Cycle graph Z_N (edges m - n = +-1 mod N)."""
    if N < 3:
        raise SizeTooSmall("circulant needs N >= 3")
    edges = [(i, i + 1) for i in range(N - 1)] + [(0, N - 1)]
    return build_graph(N, edges, name=f"circulant:{N}", dim=1.0)


def lattice_index(coords: Sequence[int], L: int) -> int:
    idx = 0
    for c in coords:
        idx = idx * L + c
    return idx


def gen_lattice_box(d: int, L: int) -> Graph:
    """The box {0..L-1}^d with nearest-neighbour edges (row-major ids)."""
    if d < 1 or L < 2:
        raise SizeTooSmall("lattice box needs d >= 1 and L >= 2")
    shape = (L,) * d
    n = L**d
    ids = np.arange(n).reshape(shape)
    edges: list[tuple[int, int]] = []
    for axis in range(d):
        lo = np.take(ids, np.arange(L - 1), axis=axis).ravel()
        hi = np.take(ids, np.arange(1, L), axis=axis).ravel()
        edges.extend(zip(lo.tolist(), hi.tolist()))
    return build_graph(n, edges, name=f"lattice:{d},{L}", dim=float(d))


def gen_random_connected(n: int, edge_prob: float, seed: int, max_tries: int = 10_000) -> Graph:
    """Erdos-Renyi graph, redrawn until connected.

    The attached dimension is ``max(1, log2 D0)``, the growth exponent the
    doubling constant always guarantees.
    """
    if n < 2:
        raise SizeTooSmall("random graph needs n >= 2")
    if not 0 < edge_prob <= 1:
        raise ValueError("edge_prob must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    for _ in range(max_tries):
        keep = rng.random(len(iu)) < edge_prob
        if not keep.any():
            continue
        try:
            g = build_graph(n, zip(iu[keep].tolist(), ju[keep].tolist()), name=f"random:{n},{edge_prob}")
        except NotConnected:
            continue
        dim = max(1.0, math.log2(doubling_constant(g)))
        return Graph(g.num_vertices, g.adjacency, g.dist, name=f"random:{n},{edge_prob},{seed}", dim=dim)
    raise NotConnected(f"no connected sample in {max_tries} tries")


def ball_counts(g: Graph, v: int) -> np.ndarray:
    """``mu(B(v, R))`` for ``R = 0..diameter``."""
    return g.ball_table[v].copy()


def doubling_constant(g: Graph) -> float:
    """Exact sup over v and real R >= 0 of mu(B(v, 2R)) / mu(B(v, R)).

    Ball sizes only change at integer radii, so the ratio is constant on
    each interval [k/2, (k+1)/2); sweeping k = 0..2*diameter is exhaustive.
    """
    balls = g.ball_table
    diam = g.diameter
    k = np.arange(2 * diam + 1)
    num = balls[:, np.minimum(k, diam)]
    den = balls[:, k // 2]
    return float((num / den).max())


def growth_constants(g: Graph, d: float) -> tuple[float, float, bool]:
    """(D1, D2, normal) for the declared dimension ``d``.

    D2 uses the left limit at each interval's right end so that the lower
    bound holds for every real radius in [0, diameter].
    """
    if not d > 0:
        raise BadDimension(f"dimension must be positive, got {d}")
    balls = g.ball_table.astype(float)
    diam = g.diameter
    R = np.arange(diam + 1, dtype=float)
    D1 = float((balls / (R + 1) ** d).max())
    tail = balls[:, diam] / (diam + 1) ** d
    if diam > 0:
        left = (balls[:, :diam] / (R[:diam] + 2) ** d).min(axis=1)
        D2 = float(np.minimum(left, tail).min())
    else:
        D2 = float(tail.min())
    return D1, D2, D2 > 0


def graph_metrics(g: Graph, d: float | None = None) -> GraphMetrics:
    d = g.dim if d is None else float(d)
    D1, D2, normal = growth_constants(g, d)
    return GraphMetrics(g.diameter, d, doubling_constant(g), D1, D2, normal)


def estimate_dimension(g: Graph) -> float:
    """Log-log slope of the mean ball size over radii 1..diameter/2."""
    if g.diameter < 4:
        raise GraphTooSmall("dimension estimate needs diameter >= 4")
    R = np.arange(1, g.diameter // 2 + 1)
    mean_ball = g.ball_table[:, R].mean(axis=0)
    slope, _ = np.polyfit(np.log(R + 1.0), np.log(mean_ball), 1)
    return float(slope)


def _check_envelope(h: np.ndarray) -> None:
    if (h < 0).any() or (np.diff(h) > 0).any():
        raise EnvelopeNotMonotone("envelope must be nonnegative and nonincreasing")


def weighted_tail_sums(
    g: Graph, v: int, h: Sequence[float], s: int, d: float, D1: float
) -> tuple[float, float, float, float]:
    """Both sides of the two ball-summation estimates for a decreasing ``h``.

    Returns ``(lhs_i, rhs_i, lhs_ii, rhs_ii)`` where

    * ``lhs_i  = sum_{rho(v,w) <= s} rho h(rho)``,
      ``rhs_i  = (d+1) D1 sum_{n<=s} h(n) (n+1)^d``;
    * ``lhs_ii = sum_{rho(v,w) >= s} h(rho)``,
      ``rhs_ii = D1 ((s+1)^d h(s) + d sum_{n>s} h(n) (n+1)^(d-1))``.

    ``h`` is extended by zeros past its end.
    """
    h = np.asarray(h, dtype=float)
    _check_envelope(h)
    if len(h) < g.diameter + 1:
        raise EnvelopeNotMonotone("envelope shorter than diameter + 1")
    if s < 0:
        raise ValueError("s must be nonnegative")
    top = max(s, g.diameter) + 1
    hp = np.zeros(top + 1)
    hp[: min(len(h), top + 1)] = h[: top + 1]
    rho = g.dist[v]
    n = np.arange(top + 1, dtype=float)

    near = rho <= s
    lhs_i = float((rho[near] * hp[rho[near]]).sum())
    rhs_i = float((d + 1) * D1 * (hp[: s + 1] * (n[: s + 1] + 1) ** d).sum())

    far = rho >= s
    lhs_ii = float(hp[rho[far]].sum())
    rhs_ii = float(D1 * ((s + 1) ** d * hp[s] + d * (hp[s + 1 :] * (n[s + 1 :] + 1) ** (d - 1)).sum()))
    return lhs_i, rhs_i, lhs_ii, rhs_ii
