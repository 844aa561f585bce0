"""Inverse-norm growth of the bidiagonal A_gamma as gamma shrinks.

Writes agamma_scaling.csv and agamma_scaling.json into --out-dir.
"""

import argparse
import math
from pathlib import Path

from decaynet.beurling_norms import BeurlingParams
from decaynet.cli import STUDY_COLUMNS
from decaynet.inversion import agamma_scaling_study
from decaynet.report import dumps, write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=float, default=3.0)
    ap.add_argument("--kmax", type=int, default=6, help="grid is gamma = 2^-k for k = 1..kmax (M = 20 / gamma_min must fit the size cap)")
    ap.add_argument("--out-dir", default="results")
    args = ap.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    gammas = [2.0**-k for k in range(1, args.kmax + 1)]
    study = agamma_scaling_study(gammas, BeurlingParams(math.inf, args.alpha, 1.0))
    (out / "agamma_scaling.csv").write_text(write_csv(study["rows"], STUDY_COLUMNS))
    (out / "agamma_scaling.json").write_text(dumps(study))
    print(f"M={study['M']} slope={study['slope_inverse_norm']:.3f} non_divergent={study['implied_C_non_divergent']}")


if __name__ == "__main__":
    main()
