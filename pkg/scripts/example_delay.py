"""Delay equation T(z) = -zI + T0 + T1 exp(-tau z): five eigenvalues from a 2x2 problem with K = 3."""
import argparse

from contour_nep import Contour, SolverConfig, make_gallery_problem, solve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tau", type=float, default=1.0)
    args = ap.parse_args()

    T = make_gallery_problem("delay-2x2", {"tau": args.tau})
    contour = Contour.circle(-1.0, 6.0)
    res = solve(T, contour, SolverConfig(K=3, l=2, N=150, identity_probe=True))
    print(f"k = {res.rank_k}")
    for p in sorted(res.accepted, key=lambda p: p.value.imag):
        print(f"  {p.value.real:+.6f} {p.value.imag:+.6f}i   residual {p.residual:.1e}")

    print("\n   N   max residual")
    for N in range(20, 151, 10):
        r = solve(T, contour, SolverConfig(K=3, l=2, N=N, identity_probe=True))
        worst = max(r.residuals) if r.accepted else float("nan")
        print(f"{N:4d}   {worst:.2e}   ({len(r.accepted)} accepted)")


if __name__ == "__main__":
    main()
