"""Type I error curves when the robust component is centred away from the informative mean.

For diffuse robust components the curves for different locations coincide.
"""

import argparse

import numpy as np

from rmpborrow.borrowing import weight_for_strength
from rmpborrow.cli import write_csv
from rmpborrow.oc import type_one_error
from rmpborrow.rmp import NormalComponent
from rmpborrow.scenarios import ILLUSTRATIVE, anchor_strength, make_design

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="location_sweep.csv")
    ap.add_argument("--n0", type=float, action="append", help="default: 1, 1/8, 1/32")
    ap.add_argument("--mu-rob", type=float, action="append", help="default: -2, -1, 0, 1, 2")
    ap.add_argument("--fixed-treatment-prior", action="store_true",
                    help="keep the treatment prior at N(mu_inf, s^2/n0) instead of following mu_rob")
    args = ap.parse_args()

    t = ILLUSTRATIVE
    B = anchor_strength(t).B
    base = make_design(0.5, t.s ** 2)
    grid = np.round(np.arange(-5.0, 5.0 + 1e-9, 0.05), 10)
    rows = []
    for n0 in args.n0 or [1.0, 1 / 8, 1 / 32]:
        s2 = t.s ** 2 / n0
        w = weight_for_strength(B, s2, base.control_prior.informative, base.control_sampling)
        curves = {}
        for mu in args.mu_rob or [-2.0, -1.0, 0.0, 1.0, 2.0]:
            tp = NormalComponent(t.mu_inf, s2) if args.fixed_treatment_prior else None
            curves[mu] = type_one_error(make_design(w, s2, mu, t, tp), grid)
            rows.extend((n0, w, mu, D, a) for D, a in zip(grid, curves[mu]))
        spread = np.ptp(np.array(list(curves.values())), axis=0).max()
        print(f"n0={n0:.4g} omega={w:.3f}: sup spread of alpha(D) over locations = {spread:.4f}")
    write_csv(("n0", "omega", "mu_rob", "D", "alpha"), rows, args.out)
