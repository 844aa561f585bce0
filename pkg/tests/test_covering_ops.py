import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from decaynet.beurling_norms import BeurlingParams, beurling_norm, schur_norm
from decaynet.covering_ops import (
    FusionSet,
    TruncationKind,
    band_tail_bound,
    band_truncate,
    coarsened_norm,
    commutator,
    commutator_lipschitz_report,
    covering_multiplicity,
    fusion_density,
    fusion_set_violations,
    maximal_disjoint_set,
    multiplicity_bound,
    psi0,
    tail_schur_report,
    truncation_diag,
)
from decaynet.errors import BadRadius, NotDiagonal, NotNormal, RadiusTooSmall
from decaynet.graph_core import gen_circulant, gen_lattice_box, gen_path, gen_random_connected, graph_metrics
from decaynet.matrices import a_gamma, diagonal, identity, random_band


def greedy_oracle(g, N):
    balls = [set(np.flatnonzero(g.dist[v] <= N).tolist()) for v in range(g.num_vertices)]
    chosen = []
    for v in range(g.num_vertices):
        if all(not (balls[v] & balls[u]) for u in chosen):
            chosen.append(v)
    return chosen


def test_fusion_examples():
    assert maximal_disjoint_set(gen_path(7), 1).vertices == (0, 3, 6)
    assert maximal_disjoint_set(gen_circulant(8), 1).vertices == (0, 3)
    g = gen_path(9)
    assert maximal_disjoint_set(g, g.diameter).vertices == (0,)
    with pytest.raises(BadRadius):
        maximal_disjoint_set(g, 0)
    with pytest.raises(BadRadius):
        maximal_disjoint_set(g, g.diameter + 1)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10_000), N=st.integers(1, 4))
def test_greedy_matches_ball_oracle(seed, N):
    g = gen_random_connected(30, 0.1, seed=seed)
    N = min(N, g.diameter)
    f = maximal_disjoint_set(g, N)
    assert list(f.vertices) == greedy_oracle(g, N)
    assert fusion_set_violations(f) == []


def test_multiplicity():
    f = maximal_disjoint_set(gen_path(7), 1)
    assert covering_multiplicity(f, 2) == (1, 2)
    assert covering_multiplicity(f, 6)[1] == 3
    with pytest.raises(RadiusTooSmall):
        covering_multiplicity(f, 1)
    assert multiplicity_bound(3.0, 1, 2) == 3.0 ** math.ceil(math.log2(5))


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10_000), N=st.integers(1, 3), extra=st.integers(0, 6))
def test_multiplicity_bound_holds(seed, N, extra):
    g = gen_random_connected(35, 0.09, seed=seed)
    N = min(N, g.diameter)
    m = graph_metrics(g)
    f = maximal_disjoint_set(g, N)
    lo, hi = covering_multiplicity(f, 2 * N + extra)
    assert lo >= 1
    assert hi <= multiplicity_bound(m.D0, N, 2 * N + extra)


def test_fusion_density_circulant():
    g = gen_circulant(64)
    m = graph_metrics(g, 1.0)
    f = maximal_disjoint_set(g, 2)
    count, upper, lower = fusion_density(f, 0, 4.0, m)
    # members sit every 5 vertices; within distance 8 of 0: 0, 5, 60 wrap, ...
    expected = int(sum(1 for v in f.vertices if min(v, 64 - v) <= 8))
    assert count == expected
    assert count <= upper and lower is not None and lower <= count
    with pytest.raises(BadRadius):
        fusion_density(f, 0, -1.0, m)
    fake = m.__class__(m.diameter, m.d, m.D0, m.D1, 0.0, False)
    with pytest.raises(NotNormal):
        fusion_density(f, 0, 1.0, fake)


def test_psi0_and_truncation():
    assert psi0([0, 0.5, 0.75, 1.0, 1.5]).tolist() == [1, 1, 0.5, 0, 0]
    g = gen_path(10)
    assert truncation_diag(g, 0, 2).diagonal()[1] == 1.0
    assert truncation_diag(g, 0, 4).diagonal()[3] == 0.5
    assert truncation_diag(g, 0, 2, TruncationKind.SHARP).diagonal()[3] == 0.0


def test_band_truncate():
    g = gen_path(30)
    A = random_band(g, 5, np.random.default_rng(0))
    B = band_truncate(A, 2)
    inside = g.dist <= 2
    assert np.array_equal(B.entries[inside], A.entries[inside])
    assert not B.entries[~inside].any()
    assert np.array_equal(band_truncate(A, g.diameter).entries, A.entries)
    gamma = 0.3
    Ag = a_gamma(g, gamma)
    assert schur_norm(Ag - band_truncate(Ag, 0)) == pytest.approx(math.exp(-gamma))


def test_tail_schur_examples():
    g = gen_path(20)
    m = graph_metrics(g, 1.0)
    Ag = a_gamma(g, 0.4)
    row = tail_schur_report(Ag, 1, m)
    assert row.exact == 0 and row.bounds == [0.0] and row.passed
    row = tail_schur_report(Ag, 0, m)
    assert row.exact == pytest.approx(math.exp(-0.4))
    assert row.bounds[0] == pytest.approx(m.D1 * 2 * math.exp(-0.4))
    assert band_tail_bound(np.zeros(3), 0, 1.0, 1.0) == 0.0


def test_commutator_hand_example():
    g = gen_path(4)
    gamma = 0.2
    A = a_gamma(g, gamma)
    D = truncation_diag(g, 0, 4)
    assert D.diagonal().tolist() == [1, 1, 1, 0.5]
    C = commutator(A, D)
    nz = np.argwhere(C.entries != 0)
    assert nz.tolist() == [[2, 3]]
    assert abs(C.entries[2, 3]) == pytest.approx(0.5 * math.exp(-gamma))
    row = commutator_lipschitz_report(A, 0, 1, graph_metrics(g, 1.0))
    assert row.exact == pytest.approx(0.5 * math.exp(-gamma))
    assert row.bounds[0] == pytest.approx(math.exp(-gamma) / 2)
    assert row.passed
    assert not commutator(A, identity(g)).entries.any()
    with pytest.raises(NotDiagonal):
        commutator(A, A)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_commutator_matches_products(seed):
    rng = np.random.default_rng(seed)
    g = gen_lattice_box(2, 4)
    A = random_band(g, 2, rng)
    D = diagonal(g, rng.standard_normal(g.num_vertices))
    assert np.allclose(commutator(A, D).entries, (A @ D - D @ A).entries, atol=1e-14)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_truncation_inequalities_random(seed):
    rng = np.random.default_rng(seed)
    g = gen_random_connected(30, 0.1, seed=seed)
    m = graph_metrics(g)
    A = random_band(g, int(rng.integers(0, g.diameter + 1)), rng, decay=float(rng.uniform(0, 2)))
    assert tail_schur_report(A, int(rng.integers(0, g.diameter + 1)), m).passed
    assert commutator_lipschitz_report(A, int(rng.integers(30)), int(rng.integers(1, g.diameter + 1)), m).passed


def test_coarsened_norm():
    g = gen_path(12)
    full = FusionSet(g, 1, tuple(range(12)))
    A = random_band(g, 3, np.random.default_rng(2))
    p = BeurlingParams(2, 1.0)
    assert coarsened_norm(A.entries, full, p) == pytest.approx(beurling_norm(A, p), rel=1e-15)
    f = maximal_disjoint_set(g, 2)
    k = len(f.vertices)
    assert coarsened_norm(np.eye(k), f, p) == 1.0
    with pytest.raises(ValueError):
        coarsened_norm(np.eye(k + 1), f, p)
