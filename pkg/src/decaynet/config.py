"""Experiment configuration and the NAME:ARGS specs used on the command line."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .beurling_norms import BeurlingParams
from .graph_core import Graph, gen_circulant, gen_lattice_box, gen_path, gen_random_connected
from .io import read_graph, read_matrix
from .matrices import GraphMatrix, a_gamma, random_band, shift
from .powers_markov import lazy_walk

U64 = 2**64


class SpecError(ValueError):
    """Malformed NAME:ARGS spec or config value."""


def parse_r(text: str) -> float:
    if str(text).lower() in ("inf", "infinity", "oo"):
        return math.inf
    r = float(text)
    if not r >= 1:
        raise SpecError(f"r must lie in [1, inf], got {text}")
    return r


def parse_seed(text) -> int:
    seed = int(text)
    if not 0 <= seed < U64:
        raise SpecError(f"seed must be an unsigned 64-bit integer, got {text}")
    return seed


def _split(spec: str) -> tuple[str, list[str]]:
    name, _, args = spec.partition(":")
    if name == "file":
        return name, [args]
    return name, [a for a in args.split(",") if a] if args else []


def _want(name: str, args: list, lo: int, hi: int | None = None) -> None:
    hi = lo if hi is None else hi
    if not lo <= len(args) <= hi:
        raise SpecError(f"{name} takes {lo if lo == hi else f'{lo}-{hi}'} argument(s), got {len(args)}")


def make_graph(spec: str, seed: int = 0, dim: float | None = None) -> Graph:
    """path:M | circulant:N | lattice:d,L | random:n,p | file:PATH"""
    name, args = _split(spec)
    try:
        if name == "path":
            _want(name, args, 1)
            return gen_path(int(args[0]))
        if name == "circulant":
            _want(name, args, 1)
            return gen_circulant(int(args[0]))
        if name == "lattice":
            _want(name, args, 2)
            return gen_lattice_box(int(args[0]), int(args[1]))
        if name == "random":
            _want(name, args, 2)
            return gen_random_connected(int(args[0]), float(args[1]), seed=seed)
        if name == "file":
            return read_graph(args[0], dim=1.0 if dim is None else dim)
    except (IndexError, TypeError) as e:
        raise SpecError(f"bad graph spec {spec!r}") from e
    except ValueError as e:
        if type(e) is ValueError:
            raise SpecError(f"bad graph spec {spec!r}: {e}") from e
        raise
    raise SpecError(f"unknown graph generator {name!r}")


def make_matrix(spec: str, g: Graph, seed: int = 0) -> GraphMatrix:
    """a_gamma_path:g | a_gamma_circulant:g | shift | lazy_walk:l | random_band:w[,seed] | file:PATH"""
    name, args = _split(spec)
    try:
        if name == "a_gamma_path":
            _want(name, args, 1)
            return a_gamma(g, float(args[0]))
        if name == "a_gamma_circulant":
            _want(name, args, 1)
            return a_gamma(g, float(args[0]), wrap=True)
        if name == "shift":
            _want(name, args, 0)
            return shift(g, wrap=g.name.startswith("circulant"))
        if name == "lazy_walk":
            _want(name, args, 0, 1)
            return lazy_walk(g, float(args[0]) if args else 0.5)
        if name == "random_band":
            _want(name, args, 1, 2)
            s = parse_seed(args[1]) if len(args) > 1 else seed
            return random_band(g, int(args[0]), np.random.default_rng(s), dominant=True)
        if name == "file":
            return read_matrix(args[0], g)
    except (IndexError, TypeError) as e:
        raise SpecError(f"bad matrix spec {spec!r}") from e
    except ValueError as e:
        if type(e) is ValueError:
            raise SpecError(f"bad matrix spec {spec!r}: {e}") from e
        raise
    raise SpecError(f"unknown matrix generator {name!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    graph: str | None = None
    matrix: str | None = None
    r: float = 1.0
    alpha: float = 2.0
    d: float | None = None
    n: int | None = None
    seed: int = 0
    out: str | None = None

    def __post_init__(self):
        parse_seed(self.seed)
        parse_r(self.r)

    def params(self, g: Graph | None = None) -> BeurlingParams:
        d = self.d if self.d is not None else (g.dim if g is not None else 1.0)
        return BeurlingParams(self.r, self.alpha, d)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["r"] = "inf" if math.isinf(self.r) else self.r
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        data["r"] = parse_r(data.get("r", 1.0))
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        return cls.from_dict(json.loads(text))
