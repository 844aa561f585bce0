import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from decaynet.beurling_norms import BeurlingParams, op_norm
from decaynet.errors import RegimeViolation, Singular
from decaynet.graph_core import gen_circulant, gen_path
from decaynet.inversion import invert
from decaynet.matrices import GraphMatrix, a_gamma, diagonal, identity, random_band
from decaynet.stability import (
    EXPONENTS,
    lower_stability_bound,
    stability_bracket,
    stability_spec,
    stability_transfer_report,
    transfer_bound_factor,
)

INF = math.inf


def test_simple_bounds():
    g = gen_path(2)
    for p in EXPONENTS:
        assert lower_stability_bound(identity(g), p) == pytest.approx(1.0)
        assert lower_stability_bound(diagonal(g, [2.0, 3.0]), p) == pytest.approx(2.0)
    lower, upper = stability_bracket(identity(gen_path(5)), 1.5)
    assert lower == pytest.approx(1.0) and upper <= 1 + 1e-12
    assert stability_bracket(diagonal(g, [2.0, 3.0]), 1.5)[0] == pytest.approx(2.0)


def test_circulant_closed_form():
    gamma = 0.3
    A = a_gamma(gen_circulant(80), gamma, wrap=True)
    target = 1 - math.exp(-gamma)
    for p in EXPONENTS:
        assert lower_stability_bound(A, p) == pytest.approx(target, rel=1e-10)
    # closed-form inverse: e^{-k gamma} / (1 - e^{-N gamma}) at offset k
    inv = invert(A).entries
    k = np.arange(80)
    assert np.allclose(inv[0], np.exp(-k * gamma) / (1 - math.exp(-80 * gamma)), rtol=1e-12)
    assert stability_bracket(A, 1.5)[0] == pytest.approx(target, rel=1e-10)


def test_singular_rejected():
    g = gen_path(4)
    ones = GraphMatrix(g, np.ones((4, 4)))
    with pytest.raises(Singular):
        lower_stability_bound(ones, 1)
    assert lower_stability_bound(ones, 2) == pytest.approx(0.0, abs=1e-12)


def test_spec_example():
    spec = stability_spec(2, INF, BeurlingParams(INF, 2.5, 1.0))
    assert spec.K0 == 2
    assert spec.theta == pytest.approx(1 / 3)
    assert spec.exponent == pytest.approx(16 / 9)
    same = stability_spec(2, 2, BeurlingParams(INF, 2.5, 1.0))
    assert same.theta == 0 and same.exponent == 1
    assert transfer_bound_factor(5.0, 2.0, same, BeurlingParams(INF, 2.5, 1.0)) == pytest.approx(2.5)
    assert transfer_bound_factor(2.0, 2.0, spec, BeurlingParams(INF, 2.5, 1.0)) == 1.0
    # d / min gap exactly an integer: strict inequality bumps K0
    assert stability_spec(1, 2, BeurlingParams(INF, 3.0, 1.0)).K0 == 2
    with pytest.raises(RegimeViolation):
        stability_spec(1, 2, BeurlingParams(INF, 1.0, 1.0))


def test_transfer_factor_monotone():
    params = BeurlingParams(INF, 2.5, 1.0)
    lo, hi = stability_spec(2, INF, params), stability_spec(1, INF, params)
    xs = [1.5, 2.0, 4.0, 10.0]
    vals = [transfer_bound_factor(x, 1.0, lo, params) for x in xs]
    assert vals == sorted(vals)
    assert all(transfer_bound_factor(x, 1.0, hi, params) >= v for x, v in zip(xs, vals))


def test_report_identity_and_circulant():
    params = BeurlingParams(INF, 2.5, 1.0)
    rep = stability_transfer_report(identity(gen_path(10)), params)
    assert all(p["ratio"] == pytest.approx(1.0) for p in rep["pairs"])
    assert set(rep["bounds"]) == {"p1", "p2", "pinf"}
    rep = stability_transfer_report(a_gamma(gen_circulant(64), 0.2, wrap=True), params)
    assert all(p["ratio"] == pytest.approx(1.0, rel=1e-10) for p in rep["pairs"])


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10_000), M=st.integers(4, 80))
def test_stability_invariants(seed, M):
    rng = np.random.default_rng(seed)
    A = random_band(gen_path(M), int(rng.integers(1, 4)), rng, dominant=True)
    inv = invert(A)
    b = {p: lower_stability_bound(A, p) for p in EXPONENTS}
    for p in EXPONENTS:
        assert b[p] * op_norm(inv, p) == pytest.approx(1.0, abs=1e-10)
    assert b[2.0] >= math.sqrt(b[1.0] * b[INF]) * (1 - 1e-12)
    rep = stability_transfer_report(A, BeurlingParams(INF, 2.5, 1.0))
    assert all(p["within_m_bound"] for p in rep["pairs"])
    lower, upper = stability_bracket(A, 1.5, rng=rng)
    assert lower <= upper * (1 + 1e-10)
