"""Scan matrix draws for fixtures with a given interior eigenvalue layout.

The original random matrices are unknown, so fixture seeds were picked by
this scan: eight well-separated interior eigenvalues for the quadratic, and
exactly one interior eigenvalue besides a and b for the rank-deficient case.
"""
import argparse

import numpy as np

from contour_nep import make_gallery_problem, polyeig_oracle

R = 0.33


def interior(T):
    lam = polyeig_oracle(T, check=False)
    return lam[np.abs(lam) < R], lam


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kind", choices=["quadratic", "rank-deficient"], default="rank-deficient")
    ap.add_argument("--seeds", type=int, default=200)
    args = ap.parse_args()

    for seed in range(args.seeds):
        if args.kind == "quadratic":
            inside, lam = interior(make_gallery_problem("random-quadratic-real", {"m": 60, "seed": seed}))
            want = 8
        else:
            inside, lam = interior(make_gallery_problem("rank-deficient-quadratic", {"m": 15, "seed": seed}))
            want = 3
        if len(inside) != want:
            continue
        gap = np.min(np.abs(np.abs(lam) - R)) / R
        print(f"seed {seed:4d}: {len(inside)} inside, nearest eigenvalue at relative distance {gap:.3f} from the circle")


if __name__ == "__main__":
    main()
