"""Random real quadratic, m = 60: compare with the companion oracle and watch the error fall with N."""
import argparse

import numpy as np

from contour_nep import Contour, SolverConfig, make_gallery_problem, polyeig_oracle, solve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0, help="matrix draw")
    ap.add_argument("--radius", type=float, default=0.33)
    args = ap.parse_args()

    T = make_gallery_problem("random-quadratic-real", {"m": 60, "seed": args.seed})
    contour = Contour.circle(0.0, args.radius)
    ref = polyeig_oracle(T)
    inside = ref[np.abs(ref) < args.radius]
    print(f"oracle: {len(inside)} eigenvalues inside |z| < {args.radius}")

    res = solve(T, contour, SolverConfig(N=150))
    print(f"solver: {len(res.accepted)} accepted, k = {res.rank_k}, used {res.config_used}")
    for lam in sorted(res.eigenvalues, key=abs):
        print(f"  {lam.real:+.10f} {lam.imag:+.10f}i   oracle distance {np.min(np.abs(ref - lam)):.1e}")

    print("\n   N   max error")
    for N in range(20, 151, 10):
        r = solve(T, contour, SolverConfig(N=N))
        err = max(np.min(np.abs(r.eigenvalues - z)) if r.accepted else np.inf for z in inside)
        print(f"{N:4d}   {err:.2e}")


if __name__ == "__main__":
    main()
