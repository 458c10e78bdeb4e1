"""Type I error, power and mean posterior weight against drift for every level-set pair."""

import argparse

import numpy as np

from rmpborrow.cli import write_csv
from rmpborrow.oc import oc_curve
from rmpborrow.scenarios import ILLUSTRATIVE, make_design, table1_pairs

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="oc_curves.csv")
    ap.add_argument("--d-max", type=float, default=5.0)
    ap.add_argument("--step", type=float, default=0.05)
    args = ap.parse_args()

    grid = np.round(np.arange(-args.d_max, args.d_max + args.step / 2, args.step), 10)
    rows = []
    for w, n0 in table1_pairs():
        for r in oc_curve(make_design(w, ILLUSTRATIVE.s ** 2 / n0), grid, ILLUSTRATIVE.delta_star):
            rows.append((w, n0) + tuple(r))
    write_csv(("omega", "n0", "D", "alpha", "power", "mean_posterior_weight"), rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out}")
