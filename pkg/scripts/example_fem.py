"""Finite element boundary eigenproblem, m = 400, five eigenvalues in [2, 298]."""
import argparse

from contour_nep import Contour, SolverConfig, make_gallery_problem, newton_refine, solve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, default=400)
    ap.add_argument("--tol-rank", type=float, default=1e-8)
    ap.add_argument("--form", choices=["bvp", "printed"], default="bvp")
    args = ap.parse_args()

    T = make_gallery_problem("fem-boundary", {"m": args.m, "form": args.form})
    contour = Contour.circle(150.0, 148.0)
    res = solve(T, contour, SolverConfig(N=150, tol_rank=args.tol_rank))
    print(f"k = {res.rank_k}, accepted {len(res.accepted)}")
    print("  lambda            residual   Newton shift")
    for p in sorted(res.accepted, key=lambda p: p.value.real):
        nr = newton_refine(T, p.value, p.vector, tol=1e-10)
        print(f"  {p.value.real:14.8f}  {p.residual:.1e}    {abs(nr.value - p.value):.1e}")
    for p in res.rejected:
        print(f"  rejected {p.value:.4f} ({p.status})")

    # residual decay for the two eigenvalues near 24 and 123
    print("\n   N   res(~24)   res(~123)")
    for N in range(50, 301, 25):
        r = solve(T, contour, SolverConfig(N=N, tol_rank=args.tol_rank))
        row = []
        for target in (24.0, 123.0):
            cand = min(r.candidates, key=lambda p: abs(p.value - target))
            row.append(cand.residual)
        print(f"{N:4d}   {row[0]:.2e}   {row[1]:.2e}")


if __name__ == "__main__":
    main()
