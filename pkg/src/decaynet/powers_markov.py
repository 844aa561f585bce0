"""Matrix powers, convolution powers and nearest-neighbour Markov chains."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .beurling_norms import (
    BeurlingParams,
    algebra_constant,
    beurling_norm,
    op_norm,
    schur_norm,
    size_cap,
    submult_constant,
)
from .errors import EmptySequence, NotStochastic, RegimeViolation, SizeCap, SymbolTooLarge
from .graph_core import Graph, growth_constants
from .matrices import GraphMatrix
from .report import leq

STOCHASTIC_TOL = 1e-12
SYMBOL_TOL = 1e-9
SYMBOL_GRID = 512


def matrix_power(A: GraphMatrix, n: int) -> GraphMatrix:
    """A^n by repeated squaring."""
    if n < 0:
        raise ValueError("power must be nonnegative")
    if A.n > size_cap():
        raise SizeCap(f"matrix powers capped at {size_cap()} vertices")
    result = np.eye(A.n, dtype=A.entries.dtype)
    base = A.entries
    while n:
        if n & 1:
            result = result @ base
        n >>= 1
        if n:
            base = base @ base
    return A.like(result)


def power_bound_factor(n: int, norm2: float, normB: float, p: BeurlingParams) -> float:
    """n (n normB/norm2)^E norm2^n, times ln(n normB/norm2 + 1)^((d+1)/r') at the boundary."""
    if not p.stability_ok:
        raise RegimeViolation("power bound needs alpha > d/r'")
    if not (norm2 > 0 and normB > 0):
        raise ValueError("norms must be positive")
    x = n * normB / norm2
    factor = n * x**p.bound_exponent * norm2**n
    if p.log_case:
        factor *= math.log(x + 1) ** ((p.d + 1) * p.inv_rprime)
    return factor


def subexp_factor(n: int, norm2: float, normB: float, p: BeurlingParams, C: float) -> float:
    """norm2^n (C normB/norm2)^(theta/(1+theta) n^log2(1+theta))."""
    theta = p.theta
    expo = theta / (1 + theta) * n ** math.log2(1 + theta)
    return norm2**n * (C * normB / norm2) ** expo


@dataclass
class PowerTrajectory:
    n_values: list
    beurling_norms: list
    l2_norms: list
    bound_factors: list
    subexp_factors: list
    implied_C: list
    non_divergent: bool
    poly_below_subexp_from: int | None

    def rows(self) -> list[dict]:
        return [
            {
                "n": n,
                "beurling_norm": b,
                "l2_pow": l2,
                "bound_factor": f,
                "subexp_factor": s,
                "implied_C": c,
            }
            for n, b, l2, f, s, c in zip(
                self.n_values, self.beurling_norms, self.l2_norms, self.bound_factors, self.subexp_factors, self.implied_C
            )
        ]

    def to_dict(self) -> dict:
        return asdict(self)


def non_divergent(values, split: int) -> bool:
    """Factor-2 rule: max over the later half is at most twice the max over the earlier half."""
    early, late = values[:split], values[split:]
    return max(late) <= 2 * max(early)


def power_trajectory(A: GraphMatrix, p: BeurlingParams, n_max: int) -> PowerTrajectory:
    if not p.stability_ok:
        raise RegimeViolation("power bound needs alpha > d/r'")
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    norm2 = op_norm(A, 2)
    normB = beurling_norm(A, p)
    D1, _, _ = growth_constants(A.graph, p.d)
    C = algebra_constant(p, D1)
    ns, bn, l2, bf, sf, ic = [], [], [], [], [], []
    power = A.entries.copy()
    for n in range(1, n_max + 1):
        if n > 1:
            power = power @ A.entries
        b = beurling_norm(A.like(power), p)
        f = power_bound_factor(n, norm2, normB, p)
        ns.append(n)
        bn.append(b)
        l2.append(norm2**n)
        bf.append(f)
        sf.append(subexp_factor(n, norm2, normB, p, C))
        ic.append(b / f)
    crossover = next((n for n, f, s in zip(ns, bf, sf) if all(ff < ss for ff, ss in zip(bf[n - 1 :], sf[n - 1 :]))), None)
    return PowerTrajectory(ns, bn, l2, bf, sf, ic, non_divergent(ic, n_max // 2), crossover)


def power_submult_rows(A: GraphMatrix, p: BeurlingParams, n_values) -> list[tuple[float, float]]:
    """(||A^{2n}||_B, 2^(alpha+d/r) * 2 ||A^n||_S ||A^n||_B) for each n."""
    out = []
    for n in n_values:
        An = matrix_power(A, n)
        lhs = beurling_norm(An @ An, p)
        rhs = submult_constant(p) * 2 * schur_norm(An) * beurling_norm(An, p)
        out.append((lhs, rhs))
    return out


# convolution powers on Z


@dataclass(frozen=True)
class FiniteSequence:
    """Finitely supported sequence on the integers: values[i] sits at start + i."""

    start: int
    values: np.ndarray

    @property
    def ks(self) -> np.ndarray:
        return self.start + np.arange(len(self.values))

    def wiener_norm(self) -> float:
        return float(np.abs(self.values).sum())

    def weighted_sup(self, alpha: float) -> float:
        return float((np.abs(self.values) * (1.0 + np.abs(self.ks)) ** alpha).max())

    def symbol(self, xi: np.ndarray) -> np.ndarray:
        return np.exp(-1j * np.outer(xi, self.ks)) @ self.values


def as_sequence(a, start: int = 0) -> FiniteSequence:
    if isinstance(a, FiniteSequence):
        return a
    vals = np.asarray(a, dtype=complex)
    if vals.size == 0:
        raise EmptySequence("sequence has no entries")
    return FiniteSequence(int(start), vals)


def symbol_sup(a: FiniteSequence, grid: int = SYMBOL_GRID) -> float:
    xi = 2 * np.pi * np.arange(grid) / grid
    return float(np.abs(a.symbol(xi)).max())


def conv_power(a, n: int, start: int = 0) -> FiniteSequence:
    """Coefficients of the n-th power of the symbol, by iterated convolution."""
    a = as_sequence(a, start)
    if n < 0:
        raise ValueError("power must be nonnegative")
    vals = np.ones(1, dtype=complex)
    for _ in range(n):
        vals = np.convolve(vals, a.values)
    return FiniteSequence(a.start * n, vals)


def conv_power_growth(a, alpha: float, n_max: int, start: int = 0, eps: float = 0.25) -> dict:
    """Fit the growth exponent of max_k |a_n(k)| (1+|k|)^alpha over n in [n_max/4, n_max]."""
    a = as_sequence(a, start)
    sup = symbol_sup(a)
    if sup > 1 + SYMBOL_TOL:
        raise SymbolTooLarge(f"sup |symbol| = {sup} exceeds 1")
    ns = np.arange(1, n_max + 1)
    weighted, wiener = [], []
    vals = np.ones(1, dtype=complex)
    for n in ns:
        vals = np.convolve(vals, a.values)
        seq = FiniteSequence(a.start * int(n), vals)
        weighted.append(seq.weighted_sup(alpha))
        wiener.append(seq.wiener_norm())
    window = ns >= max(1, n_max // 4)
    slope = float(np.polyfit(np.log(ns[window]), np.log(np.array(weighted)[window]), 1)[0])
    wiener_ratio = np.array(wiener) / ns ** (1 + eps)
    return {
        "alpha": alpha,
        "n_max": n_max,
        "symbol_sup": sup,
        "slope": slope,
        "slope_bound": alpha + 1,
        "slope_ok": slope <= alpha + 1 + 0.1,
        "wiener_norms": wiener,
        "wiener_ratio_non_divergent": non_divergent(list(wiener_ratio), n_max // 2),
        "weighted_sup": weighted,
    }


# Markov chains


def lazy_walk(g: Graph, laziness: float) -> GraphMatrix:
    """Row-stochastic lazy random walk: stay with prob. ``laziness``, else a uniform neighbour."""
    if not 0 <= laziness < 1:
        raise ValueError("laziness must lie in [0, 1)")
    n = g.num_vertices
    P = np.zeros((n, n))
    for v, nb in enumerate(g.adjacency):
        P[v, list(nb)] = (1 - laziness) / len(nb)
    P[np.arange(n), np.arange(n)] = laziness
    return GraphMatrix(g, P)


def check_stochastic(P: GraphMatrix) -> None:
    a = P.entries
    if np.abs(a.imag).max() > 0 or (a.real < 0).any():
        raise NotStochastic("transition matrix must be real and nonnegative")
    if np.abs(a.real.sum(axis=1) - 1).max() > STOCHASTIC_TOL:
        raise NotStochastic("rows must sum to 1")


def markov_hop_report(P: GraphMatrix, alpha: float, n_max: int, d: float | None = None) -> dict:
    """Implied constant of the polynomial hopping bound, plus exact finite-speed checks."""
    check_stochastic(P)
    g = P.graph
    d = g.dim if d is None else d
    if not alpha > d + 1:
        raise RegimeViolation(f"need alpha > d + 1 = {d + 1}")
    rho = g.dist
    nearest = bool((np.abs(P.entries)[rho > 1] == 0).all())
    weight = rho.astype(float) ** alpha
    rows = []
    power = np.eye(g.num_vertices)
    base = P.entries.real
    for n in range(1, n_max + 1):
        power = power @ base
        C = float((power * weight).max() / n ** (alpha + 1))
        rows.append(
            {
                "n": n,
                "implied_C": C,
                "max_entry": float(power.max()),
                "entries_le_one": bool(leq(float(power.max()), 1.0, 1e-12)),
                "beyond_reach_zero": bool((power[rho > n] == 0).all()) if nearest else None,
                "row_sum_error": float(np.abs(power.sum(axis=1) - 1).max()),
            }
        )
    cs = [r["implied_C"] for r in rows]
    return {
        "alpha": alpha,
        "d": d,
        "n_max": n_max,
        "nearest_neighbour": nearest,
        "rows": rows,
        "non_divergent": non_divergent(cs, max(1, n_max // 2)),
    }
