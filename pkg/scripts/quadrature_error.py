"""Trapezoid error for f(z) = (z - lambda)^{-j} on |z| = R, against the (|lambda|/R)^N and (R/|lambda|)^N rates."""
import argparse

import numpy as np

from contour_nep import scalar_pole_error


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lam", type=complex, nargs="+", default=[0.5, 0.8, 2.0])
    ap.add_argument("--j", type=int, default=1)
    args = ap.parse_args()

    Ns = np.arange(10, 41)
    for lam in args.lam:
        E = np.array([abs(scalar_pole_error(lam, 1.0, args.j, int(N))) for N in Ns])
        rate = np.exp(np.polyfit(Ns, np.log(E), 1)[0])
        print(f"lambda={lam}: fitted rate {rate:.4f}, predicted {min(abs(lam), 1 / abs(lam)):.4f}, |E_40| = {E[-1]:.2e}")


if __name__ == "__main__":
    main()
