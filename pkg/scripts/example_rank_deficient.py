"""T(z) = T0 + (z - a)(b - z) T1 with T0 e1 = 0: one moment pair misses a and b, the Hankel pencil does not."""
import argparse

import numpy as np

from contour_nep import Contour, SolverConfig, make_gallery_problem, polyeig_oracle, solve


def show(label, res, targets):
    sv = res.singular_values / res.singular_values[0]
    print(f"{label}: k = {res.rank_k}, relative singular values {np.array2string(sv, precision=1)}")
    for z in targets:
        d = np.min(np.abs(res.eigenvalues - z)) if res.accepted else np.inf
        print(f"  nearest accepted to {z:+.2f}: {d:.1e}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=85)
    ap.add_argument("--a", type=float, default=-0.2)
    ap.add_argument("--b", type=float, default=0.1)
    args = ap.parse_args()

    T = make_gallery_problem("rank-deficient-quadratic", {"m": 15, "a": args.a, "b": args.b, "seed": args.seed})
    contour = Contour.circle(0.0, 0.33)
    ref = polyeig_oracle(T)
    print("oracle eigenvalues inside:", np.round(ref[np.abs(ref) < 0.33], 6))
    show("K=1, l=5", solve(T, contour, SolverConfig(K=1, l=5, N=150, adaptive=False)), (args.a, args.b))
    show("K=2, l=3", solve(T, contour, SolverConfig(K=2, l=3, N=150, adaptive=False)), (args.a, args.b))


if __name__ == "__main__":
    main()
