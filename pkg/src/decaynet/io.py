"""Plain-text graph, matrix and sequence files, and fusion-set JSON."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .covering_ops import FusionSet
from .errors import BadFile, NotSimple
from .graph_core import Graph, build_graph
from .matrices import GraphMatrix
from .powers_markov import FiniteSequence


def _lines(text: str) -> list[list[str]]:
    return [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]


def _header(rows: list[list[str]], what: str) -> tuple[int, int]:
    if not rows or len(rows[0]) != 2:
        raise BadFile(f"{what} file needs a two-field header line")
    try:
        return int(rows[0][0]), int(rows[0][1])
    except ValueError as e:
        raise BadFile(f"bad {what} header: {' '.join(rows[0])}") from e


def parse_graph(text: str, name: str = "file", dim: float = 1.0) -> Graph:
    """``M E`` then E lines ``u v`` with 0-based u < v."""
    rows = _lines(text)
    M, E = _header(rows, "graph")
    body = rows[1:]
    if len(body) != E:
        raise BadFile(f"header declares {E} edges, found {len(body)}")
    edges = []
    for row in body:
        if len(row) != 2:
            raise BadFile(f"edge line needs two fields: {' '.join(row)}")
        u, v = int(row[0]), int(row[1])
        if u == v:
            raise NotSimple(f"self-loop at {u}")
        if u > v:
            raise BadFile(f"edge ({u}, {v}) must be written with u < v")
        edges.append((u, v))
    return build_graph(M, edges, name=name, dim=dim)


def format_graph(g: Graph) -> str:
    lines = [f"{g.num_vertices} {g.num_edges}"]
    lines += [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def read_graph(path, dim: float = 1.0) -> Graph:
    path = Path(path)
    return parse_graph(path.read_text(), name=f"file:{path.name}", dim=dim)


def write_graph(g: Graph, path) -> None:
    Path(path).write_text(format_graph(g))


def parse_matrix(text: str, g: Graph) -> GraphMatrix:
    """``M NNZ`` then NNZ lines ``i j re im``; unlisted entries are zero."""
    rows = _lines(text)
    M, nnz = _header(rows, "matrix")
    if M != g.num_vertices:
        raise BadFile(f"matrix is {M}x{M} but the graph has {g.num_vertices} vertices")
    body = rows[1:]
    if len(body) != nnz:
        raise BadFile(f"header declares {nnz} entries, found {len(body)}")
    a = np.zeros((M, M), dtype=complex)
    for row in body:
        if len(row) != 4:
            raise BadFile(f"entry line needs four fields: {' '.join(row)}")
        i, j = int(row[0]), int(row[1])
        if not (0 <= i < M and 0 <= j < M):
            raise BadFile(f"entry ({i}, {j}) out of range")
        a[i, j] = complex(float(row[2]), float(row[3]))
    if not a.imag.any():
        a = a.real
    return GraphMatrix(g, a)


def format_matrix(A: GraphMatrix) -> str:
    a = A.entries
    idx = np.argwhere(a != 0)
    lines = [f"{A.n} {len(idx)}"]
    for i, j in idx:
        z = complex(a[i, j])
        lines.append(f"{i} {j} {z.real!r} {z.imag!r}")
    return "\n".join(lines) + "\n"


def read_matrix(path, g: Graph) -> GraphMatrix:
    return parse_matrix(Path(path).read_text(), g)


def write_matrix(A: GraphMatrix, path) -> None:
    Path(path).write_text(format_matrix(A))


def parse_sequence(text: str) -> FiniteSequence:
    """Lines ``k re im``; gaps between listed k are zero."""
    rows = _lines(text)
    if not rows:
        raise BadFile("sequence file is empty")
    entries = {}
    for row in rows:
        if len(row) != 3:
            raise BadFile(f"sequence line needs three fields: {' '.join(row)}")
        entries[int(row[0])] = complex(float(row[1]), float(row[2]))
    lo, hi = min(entries), max(entries)
    vals = np.zeros(hi - lo + 1, dtype=complex)
    for k, z in entries.items():
        vals[k - lo] = z
    return FiniteSequence(lo, vals)


def format_sequence(a: FiniteSequence) -> str:
    return "".join(f"{k} {z.real!r} {z.imag!r}\n" for k, z in zip(a.ks.tolist(), a.values.tolist()))


def read_sequence(path) -> FiniteSequence:
    return parse_sequence(Path(path).read_text())


def write_sequence(a: FiniteSequence, path) -> None:
    Path(path).write_text(format_sequence(a))


def fusion_to_json(f: FusionSet) -> str:
    return json.dumps(f.to_dict())


def fusion_from_json(text: str, g: Graph) -> FusionSet:
    data = json.loads(text)
    return FusionSet(g, int(data["N"]), tuple(int(v) for v in data["vertices"]))
