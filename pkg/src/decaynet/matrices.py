"""Graph-indexed matrices and the standard test families."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DecayError, NotDiagonal
from .graph_core import Graph, lattice_index


@dataclass(frozen=True, eq=False)
class GraphMatrix:
    """Dense matrix whose rows and columns are the vertices of ``graph``.

    Entries are complex in general; real input stays float64 so dense
    factorizations run in real arithmetic.
    """

    graph: Graph
    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries)
        a = a.astype(complex if np.iscomplexobj(a) else float, copy=False)
        n = self.graph.num_vertices
        if a.shape != (n, n):
            raise DecayError(f"matrix shape {a.shape} does not match {n} vertices")
        if not np.isfinite(a).all():
            raise DecayError("matrix has non-finite entries")
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.graph.num_vertices

    @property
    def abs(self) -> np.ndarray:
        return np.abs(self.entries)

    def like(self, entries: np.ndarray) -> "GraphMatrix":
        return GraphMatrix(self.graph, entries)

    def __matmul__(self, other: "GraphMatrix") -> "GraphMatrix":
        return self.like(self.entries @ other.entries)

    def __add__(self, other: "GraphMatrix") -> "GraphMatrix":
        return self.like(self.entries + other.entries)

    def __sub__(self, other: "GraphMatrix") -> "GraphMatrix":
        return self.like(self.entries - other.entries)

    def __mul__(self, c: complex) -> "GraphMatrix":
        return self.like(c * self.entries)

    __rmul__ = __mul__

    def conj_transpose(self) -> "GraphMatrix":
        return self.like(self.entries.conj().T)

    def is_diagonal(self) -> bool:
        a = self.entries
        return not np.any(a - np.diag(np.diag(a)))

    def diagonal(self) -> np.ndarray:
        if not self.is_diagonal():
            raise NotDiagonal("matrix is not diagonal")
        return np.diag(self.entries).copy()


def identity(g: Graph) -> GraphMatrix:
    return GraphMatrix(g, np.eye(g.num_vertices))


def zeros(g: Graph) -> GraphMatrix:
    return GraphMatrix(g, np.zeros((g.num_vertices, g.num_vertices)))


def diagonal(g: Graph, values) -> GraphMatrix:
    return GraphMatrix(g, np.diag(np.asarray(values)))


def _successor_pairs(g: Graph, wrap: bool) -> tuple[np.ndarray, np.ndarray]:
    n = g.num_vertices
    i = np.arange(n if wrap else n - 1)
    j = (i + 1) % n
    if not all(j_ in g.adjacency[i_] for i_, j_ in zip(i.tolist(), j.tolist())):
        raise DecayError(f"{g.name}: vertex i is not adjacent to i+1; need a path or circulant")
    return i, j


def a_gamma(g: Graph, gamma: float, wrap: bool = False) -> GraphMatrix:
    """1 on the diagonal, -exp(-gamma) from each vertex to its successor.

    ``wrap=False`` gives the bidiagonal (path) instance, ``wrap=True`` the
    circulant instance on Z_N.
    """
    i, j = _successor_pairs(g, wrap)
    a = np.eye(g.num_vertices)
    a[i, j] = -math.exp(-gamma)
    return GraphMatrix(g, a)


def shift(g: Graph, wrap: bool = True) -> GraphMatrix:
    """Permutation (or truncated shift) moving each vertex to its successor."""
    i, j = _successor_pairs(g, wrap)
    a = np.zeros((g.num_vertices, g.num_vertices))
    a[i, j] = 1.0
    return GraphMatrix(g, a)


def lattice_translation(g: Graph, L: int, d: int, k: int) -> GraphMatrix:
    """Partial translation by ``k`` along the first axis of a lattice box."""
    n = g.num_vertices
    a = np.zeros((n, n))
    for idx in np.ndindex(*(L,) * d):
        if idx[0] + k < L:
            tgt = (idx[0] + k,) + idx[1:]
            a[lattice_index(idx, L), lattice_index(tgt, L)] = 1.0
    return GraphMatrix(g, a)


def random_band(
    g: Graph,
    width: int,
    rng: np.random.Generator,
    decay: float = 1.0,
    dominant: bool = False,
    complex_entries: bool = True,
) -> GraphMatrix:
    """Random matrix supported on rho <= width with entries ~ (1+rho)^-decay.

    With ``dominant=True`` the diagonal is replaced so each row and column is
    strictly diagonally dominant, which makes the matrix invertible.
    """
    n = g.num_vertices
    rho = g.dist
    vals = rng.standard_normal((n, n))
    if complex_entries:
        vals = vals + 1j * rng.standard_normal((n, n))
    a = np.where(rho <= width, vals * (1.0 + rho) ** (-decay), 0.0)
    if dominant:
        off = np.abs(a - np.diag(np.diag(a)))
        margin = np.maximum(off.sum(axis=0), off.sum(axis=1))
        phase = np.exp(2j * np.pi * rng.random(n)) if complex_entries else 1.0
        np.fill_diagonal(a, (margin + 0.5 + rng.random(n)) * phase)
    return GraphMatrix(g, a)
