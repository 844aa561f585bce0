"""Hopping bound and finite speed for lazy walks on a cycle and a grid."""

import argparse
from pathlib import Path

from decaynet.graph_core import gen_circulant, gen_lattice_box
from decaynet.powers_markov import lazy_walk, markov_hop_report
from decaynet.report import dumps


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--laziness", type=float, default=0.5)
    ap.add_argument("--n-max", type=int, default=32)
    ap.add_argument("--out-dir", default="results")
    args = ap.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    reports = {}
    for g, alpha in ((gen_circulant(64), 3.0), (gen_lattice_box(2, 9), 4.0)):
        rep = markov_hop_report(lazy_walk(g, args.laziness), alpha, args.n_max)
        reports[g.name] = rep
        ok = all(r["beyond_reach_zero"] and r["entries_le_one"] for r in rep["rows"])
        print(f"{g.name}: finite_speed={ok} max C={max(r['implied_C'] for r in rep['rows']):.3g}")
    (out / "markov_hops.json").write_text(dumps(reports))


if __name__ == "__main__":
    main()
