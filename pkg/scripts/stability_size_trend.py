"""Empirical stability-transfer constants versus matrix size and conditioning."""

import argparse
import math
from pathlib import Path

from decaynet.beurling_norms import BeurlingParams
from decaynet.report import dumps, write_csv
from decaynet.stability import size_trend, stability_scaling_family


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, default=2.5)
    ap.add_argument("--trials", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out-dir", default="results")
    args = ap.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    p = BeurlingParams(math.inf, args.alpha, 1.0)
    trend = size_trend(p, trials=args.trials, seed=args.seed)
    family = stability_scaling_family(p, seed=args.seed)
    rows = [{"M": M, "max_empirical_C": c} for M, c in zip(trend["sizes"], trend["max_empirical_C"])]
    (out / "stability_size_trend.csv").write_text(write_csv(rows, ["M", "max_empirical_C"]))
    (out / "stability.json").write_text(dumps({"size_trend": trend, "scaling_family": family}))
    for row in rows:
        print(f"M={row['M']} max C={row['max_empirical_C']:.3f}")
    print(f"non_divergent={trend['non_divergent']}")


if __name__ == "__main__":
    main()
