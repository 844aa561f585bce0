"""Beurling norms of A^n for the cyclic shift and a random band matrix."""

import argparse
import math
from pathlib import Path

import numpy as np

from decaynet.beurling_norms import BeurlingParams, op_norm
from decaynet.cli import TRAJECTORY_COLUMNS
from decaynet.graph_core import gen_circulant
from decaynet.matrices import random_band, shift
from decaynet.powers_markov import power_trajectory
from decaynet.report import dumps, write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=256)
    ap.add_argument("--alpha", type=float, default=2.0)
    ap.add_argument("--n-max", type=int, default=128)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out-dir", default="results")
    args = ap.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    g = gen_circulant(args.size)
    p = BeurlingParams(math.inf, args.alpha, 1.0)
    A = random_band(g, 3, np.random.default_rng(args.seed))
    # normalise so the l2 norm sits just below 1
    A = A * (0.99 / op_norm(A, 2))
    summary = {}
    for name, M in (("shift", shift(g)), ("random_band", A)):
        tr = power_trajectory(M, p, args.n_max)
        (out / f"power_{name}.csv").write_text(write_csv(tr.rows(), TRAJECTORY_COLUMNS))
        summary[name] = tr
        print(f"{name}: crossover={tr.poly_below_subexp_from} non_divergent={tr.non_divergent}")
    (out / "power_trajectory.json").write_text(dumps(summary))


if __name__ == "__main__":
    main()
