"""Decay envelopes and the Beurling-type norm family.

A matrix ``A`` indexed by graph vertices is summarized by its envelope
``h_A(n) = max_{rho >= n} |a|``; the Beurling norm weights the envelope by
``(n+1)^(alpha r + d - 1)`` in l^r (or by ``(n+1)^alpha`` in sup for r = inf).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import NotDominated, ParamOrder, RegimeViolation, SizeCap, ZeroMatrix
from .graph_core import growth_constants
from .matrices import GraphMatrix
from .report import Check, leq

INF = math.inf
LOG_CASE_TOL = 1e-12
DEFAULT_SIZE_CAP = 2048


def size_cap() -> int:
    return int(os.environ.get("DECAYNET_SIZE_CAP", DEFAULT_SIZE_CAP))


@dataclass(frozen=True)
class BeurlingParams:
    """Exponents (r, alpha) and dimension d, with r = inf allowed."""

    r: float
    alpha: float
    d: float = 1.0

    def __post_init__(self):
        if not self.r >= 1:
            raise ValueError(f"r must lie in [1, inf], got {self.r}")
        if self.alpha < 0:
            raise ValueError(f"alpha must be nonnegative, got {self.alpha}")
        if not self.d > 0:
            raise ValueError(f"d must be positive, got {self.d}")

    @property
    def inv_r(self) -> float:
        return 0.0 if math.isinf(self.r) else 1.0 / self.r

    @property
    def inv_rprime(self) -> float:
        return 1.0 - self.inv_r

    @property
    def rprime(self) -> float:
        return INF if self.r == 1 else 1.0 / self.inv_rprime

    @property
    def d_over_r(self) -> float:
        return self.d * self.inv_r

    @property
    def d_over_rprime(self) -> float:
        return self.d * self.inv_rprime

    @property
    def banach_ok(self) -> bool:
        return self.alpha > self.d_over_rprime

    # the stability, inversion and power bounds all need this algebra condition
    stability_ok = banach_ok

    @property
    def log_case(self) -> bool:
        return abs(self.alpha - (1.0 + self.d_over_rprime)) <= LOG_CASE_TOL

    @property
    def theta(self) -> float:
        if not self.banach_ok:
            raise RegimeViolation("theta needs alpha > d(1 - 1/r)")
        x = self.alpha - self.d + self.d_over_r
        return 2 * x / (1 + 2 * x)

    @property
    def min_gap(self) -> float:
        """min(alpha - d/r', 1), the decay rate that drives every bound."""
        return min(self.alpha - self.d_over_rprime, 1.0)

    @property
    def bound_exponent(self) -> float:
        """(alpha + d/r) / min(alpha - d/r', 1)."""
        if not self.banach_ok:
            raise RegimeViolation("bound exponent needs alpha > d/r'")
        return (self.alpha + self.d_over_r) / self.min_gap

    def with_(self, **kw) -> "BeurlingParams":
        return BeurlingParams(**{"r": self.r, "alpha": self.alpha, "d": self.d, **kw})

    def to_dict(self) -> dict:
        return {"r": "inf" if math.isinf(self.r) else self.r, "alpha": self.alpha, "d": self.d}


def decay_envelope(A: GraphMatrix) -> np.ndarray:
    """``h[n] = max_{rho >= n} |a|`` for n = 0..diameter, plus a trailing 0."""
    g = A.graph
    order, starts = g.distance_buckets
    per_distance = np.maximum.reduceat(A.abs.ravel()[order], starts)
    h = np.maximum.accumulate(per_distance[::-1])[::-1]
    return np.append(h, 0.0)


def envelope_norm(h: np.ndarray, p: BeurlingParams) -> float:
    """Weighted norm of a nonincreasing envelope indexed from n = 0."""
    h = np.asarray(h, dtype=float)
    n1 = np.arange(1, len(h) + 1, dtype=float)
    if math.isinf(p.r):
        return float((h * n1**p.alpha).max())
    r = p.r
    terms = h**r * n1 ** (p.alpha * r + p.d - 1)
    return float(terms.sum() ** (1.0 / r))


def beurling_norm(A: GraphMatrix, p: BeurlingParams) -> float:
    return envelope_norm(decay_envelope(A), p)


def beurling_star_norm(A: GraphMatrix, p: BeurlingParams) -> float:
    """Norm built from suffix maxima of the weighted moduli ``|a| (1+rho)^alpha``."""
    g = A.graph
    order, starts = g.distance_buckets
    per_distance = np.maximum.reduceat(A.abs.ravel()[order], starts)
    weighted = per_distance * np.arange(1, g.diameter + 2, dtype=float) ** p.alpha
    suffix = np.maximum.accumulate(weighted[::-1])[::-1]
    if math.isinf(p.r):
        return float(suffix[0])
    return float((suffix**p.r).sum() ** (1.0 / p.r))


def schur_norm(A: GraphMatrix) -> float:
    a = A.abs
    return float(max(a.sum(axis=1).max(), a.sum(axis=0).max()))


def _op_norm_dense(a: np.ndarray, p: float) -> float:
    if p == 1:
        return float(np.abs(a).sum(axis=0).max())
    if math.isinf(p):
        return float(np.abs(a).sum(axis=1).max())
    if p == 2:
        if a.shape[0] > size_cap():
            raise SizeCap(f"spectral norm capped at {size_cap()} vertices")
        return float(np.linalg.svd(a, compute_uv=False)[0])
    raise ValueError(f"operator norm only for p in {{1, 2, inf}}, got {p}")


def op_norm(A: GraphMatrix, p: float) -> float:
    """Operator norm on l^p for p in {1, 2, inf}."""
    return _op_norm_dense(A.entries, p)


def embedding_constant(r: float, r2: float, gamma: float, beta: float, d: float) -> float:
    dr = (0.0 if math.isinf(r) else 1 / r) - (0.0 if math.isinf(r2) else 1 / r2)
    if dr == 0:
        return 1.0
    return ((beta - gamma - (d - 1) * dr) / (beta - gamma - d * dr)) ** dr


def check_embeddings(
    A: GraphMatrix, r: float, r2: float, alpha: float, gamma: float, beta: float, d: float
) -> Check:
    """Norm chain ||A||_{r2,alpha} <= ||A||_{r,alpha} <= ||A||_{r,gamma} <= c ||A||_{r2,beta}."""
    inv = lambda x: 0.0 if math.isinf(x) else 1.0 / x  # noqa: E731
    if r2 < r or gamma < alpha or not beta > gamma + d * (inv(r) - inv(r2)):
        raise ParamOrder("need r2 >= r, gamma >= alpha, beta > gamma + d(1/r - 1/r2)")
    n1 = beurling_norm(A, BeurlingParams(r2, alpha, d))
    n2 = beurling_norm(A, BeurlingParams(r, alpha, d))
    n3 = beurling_norm(A, BeurlingParams(r, gamma, d))
    n4 = beurling_norm(A, BeurlingParams(r2, beta, d))
    c = embedding_constant(r, r2, gamma, beta, d)
    flags = [leq(n1, n2), leq(n2, n3), leq(n3, c * n4)]
    return Check(
        op="check_embeddings",
        anchor="beurling_embedding_chain",
        inputs={"r": r, "r2": r2, "alpha": alpha, "gamma": gamma, "beta": beta, "d": d},
        exact=n1,
        bounds=[n2, n3, c * n4],
        passed=all(flags),
        extra={"constant": c, "chain": flags},
    )


def submult_constant(p: BeurlingParams) -> float:
    """Factor 2^(alpha + d/r) in front of the Schur-weighted product bound."""
    return 2.0 ** (p.alpha + p.d_over_r)


def algebra_constant(p: BeurlingParams, D1: float) -> float:
    """Constant of the plain Banach-algebra inequality."""
    d, a, ir = p.d, p.alpha, p.inv_r
    ratio = (a - (d - 1) * (1 - ir)) / (a - d * (1 - ir))
    return 2.0 ** (a + 1 + p.d_over_r) * d * D1 * ratio ** (1 - ir)


def check_submultiplicative(A: GraphMatrix, B: GraphMatrix, p: BeurlingParams) -> Check:
    if not p.banach_ok:
        raise RegimeViolation("submultiplicativity needs alpha > d(1 - 1/r)")
    D1, _, _ = growth_constants(A.graph, p.d)
    nA, nB = beurling_norm(A, p), beurling_norm(B, p)
    lhs = beurling_norm(A @ B, p)
    rhs1 = submult_constant(p) * (schur_norm(B) * nA + schur_norm(A) * nB)
    rhs2 = algebra_constant(p, D1) * nA * nB
    return Check(
        op="check_submultiplicative",
        anchor="beurling_submultiplicative",
        inputs=p.to_dict(),
        exact=lhs,
        bounds=[rhs1, rhs2],
        passed=leq(lhs, rhs1) and leq(lhs, rhs2),
    )


def check_solid(A: GraphMatrix, B: GraphMatrix, p: BeurlingParams) -> bool:
    if (A.abs > B.abs).any():
        raise NotDominated("|a| <= |b| fails somewhere")
    return leq(beurling_norm(A, p), beurling_norm(B, p))


def differential_ratio(A: GraphMatrix, B: GraphMatrix, p: BeurlingParams) -> float:
    """||AB|| / (||A|| ||B|| ((||A||_2/||A||)^theta + (||B||_2/||B||)^theta))."""
    theta = p.theta
    nA, nB = beurling_norm(A, p), beurling_norm(B, p)
    if nA == 0 or nB == 0:
        raise ZeroMatrix("differential ratio undefined for a zero matrix")
    mix = (op_norm(A, 2) / nA) ** theta + (op_norm(B, 2) / nB) ** theta
    return beurling_norm(A @ B, p) / (nA * nB * mix)
