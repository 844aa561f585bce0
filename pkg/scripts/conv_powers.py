"""Weighted sup growth of convolution powers of short symbols."""

import argparse
from pathlib import Path

from decaynet.powers_markov import conv_power_growth
from decaynet.report import dumps

SYMBOLS = {
    "binomial": [0.5, 0.5],
    "rotated": [0.5, 0.5j],
    "three_point": [0.25, 0.5, 0.25],
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, default=2.0)
    ap.add_argument("--n-max", type=int, default=256)
    ap.add_argument("--out-dir", default="results")
    args = ap.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    reports = {name: conv_power_growth(a, args.alpha, args.n_max) for name, a in SYMBOLS.items()}
    for name, rep in reports.items():
        print(f"{name}: slope={rep['slope']:.3f} wiener_ok={rep['wiener_ratio_non_divergent']}")
    (out / "conv_powers.json").write_text(dumps(reports))


if __name__ == "__main__":
    main()
