import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from decaynet.config import ExperimentConfig, SpecError, make_graph, make_matrix, parse_r, parse_seed
from decaynet.covering_ops import maximal_disjoint_set
from decaynet.errors import BadFile, NotSimple
from decaynet.graph_core import gen_lattice_box, gen_random_connected
from decaynet.io import (
    format_graph,
    format_matrix,
    format_sequence,
    fusion_from_json,
    fusion_to_json,
    parse_graph,
    parse_matrix,
    parse_sequence,
    read_graph,
    read_matrix,
    write_graph,
    write_matrix,
)
from decaynet.matrices import random_band
from decaynet.powers_markov import conv_power


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_graph_and_matrix_round_trip(seed):
    g = gen_random_connected(25, 0.15, seed=seed)
    h = parse_graph(format_graph(g))
    assert np.array_equal(h.dist, g.dist)
    rng = np.random.default_rng(seed)
    A = random_band(g, 2, rng)
    A = A.like(A.entries * np.exp(1j * rng.uniform(0, 6, A.entries.shape)))
    assert np.array_equal(parse_matrix(format_matrix(A), g).entries, A.entries)


def test_files(tmp_path):
    g = gen_lattice_box(2, 4)
    write_graph(g, tmp_path / "g.txt")
    h = read_graph(tmp_path / "g.txt", dim=2.0)
    assert h.dim == 2.0 and h.num_edges == g.num_edges
    A = random_band(g, 1, np.random.default_rng(0))
    A = A.like(A.entries.real)
    write_matrix(A, tmp_path / "a.txt")
    B = read_matrix(tmp_path / "a.txt", h)
    assert np.isrealobj(B.entries) and np.array_equal(B.entries, A.entries)


def test_graph_rejections():
    with pytest.raises(NotSimple):
        parse_graph("2 1\n0 0\n")
    with pytest.raises(BadFile):
        parse_graph("2 1\n1 0\n")
    with pytest.raises(BadFile):
        parse_graph("3 2\n0 1\n")
    with pytest.raises(BadFile):
        parse_graph("")
    with pytest.raises(BadFile):
        parse_matrix("3 0\n", gen_lattice_box(1, 2))


def test_sequence_and_fusion():
    a = conv_power([0.5, 0.25j], 3, start=-2)
    b = parse_sequence(format_sequence(a))
    assert b.start == a.start and np.array_equal(b.values, a.values)
    assert parse_sequence("0 1 0\n3 2 0\n").values.tolist() == [1, 0, 0, 2]
    g = gen_lattice_box(2, 6)
    f = maximal_disjoint_set(g, 1)
    assert fusion_from_json(fusion_to_json(f), g).vertices == f.vertices


def test_specs():
    assert parse_r("inf") == math.inf and parse_r("2") == 2.0
    for bad in ("0.5", "nan"):
        with pytest.raises(SpecError):
            parse_r(bad)
    assert parse_seed("18446744073709551615") == 2**64 - 1
    with pytest.raises(SpecError):
        parse_seed(2**64)
    g = make_graph("circulant:12")
    assert g.num_vertices == 12
    assert make_graph("random:20,0.2", seed=3).num_vertices == 20
    for bad in ("circulant", "path:1,2", "torus:5", "path:x"):
        with pytest.raises(SpecError):
            make_graph(bad)
    S = make_matrix("shift", g).entries
    assert S[11, 0] == 1
    assert make_matrix("lazy_walk", g).entries[0, 0] == 0.5
    a = make_matrix("random_band:2,9", g).entries
    assert np.array_equal(a, make_matrix("random_band:2", g, seed=9).entries)
    with pytest.raises(SpecError):
        make_matrix("a_gamma_path", g)


@settings(max_examples=50, deadline=None)
@given(
    r=st.sampled_from([1.0, 1.5, 2.0, math.inf]),
    alpha=st.floats(0, 10),
    n=st.one_of(st.none(), st.integers(0, 1000)),
    seed=st.integers(0, 2**64 - 1),
)
def test_config_round_trip(r, alpha, n, seed):
    cfg = ExperimentConfig("norm", "path:10", "shift", r, alpha, None, n, seed, None)
    text = cfg.to_json()
    assert json.loads(text)["r"] == ("inf" if math.isinf(r) else r)
    assert ExperimentConfig.from_json(text) == cfg
