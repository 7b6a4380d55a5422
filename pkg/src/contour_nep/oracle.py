"""Independent reference computations used to check the contour solver."""
from __future__ import annotations

from typing import List, NamedTuple, Optional

import mpmath
import numpy as np
from scipy import linalg

from .matfunc import NonlinearMatrixFunction, PolynomialMatrixFunction

INFINITE_EIG = 1e12


class OracleError(RuntimeError):
    pass


class CompanionPencil(NamedTuple):
    A: np.ndarray
    B: np.ndarray


def companion_pencil(poly: PolynomialMatrixFunction) -> CompanionPencil:
    """First companion form A - zB of sum_j T_j z^j.

    A has identity blocks on the block superdiagonal and -T_0, ..., -T_{p-1}
    in the last block row; B = blockdiag(I, ..., I, T_p).
    """
    coeffs = poly.coefficients
    p = len(coeffs) - 1
    if p < 1:
        raise ValueError("polynomial degree must be at least 1")
    m = poly.dimension
    n = p * m
    A = np.zeros((n, n), dtype=complex)
    B = np.eye(n, dtype=complex)
    for i in range(p - 1):
        A[i * m : (i + 1) * m, (i + 1) * m : (i + 2) * m] = np.eye(m)
    for j in range(p):
        A[(p - 1) * m :, j * m : (j + 1) * m] = -coeffs[j]
    B[(p - 1) * m :, (p - 1) * m :] = coeffs[p]
    return CompanionPencil(A, B)


def polyeig_oracle(poly: PolynomialMatrixFunction, check: bool = True) -> np.ndarray:
    """All finite eigenvalues of a matrix polynomial via its companion pencil."""
    if not np.any(poly.coefficients[-1]):
        raise ValueError("leading coefficient is zero")
    A, B = companion_pencil(poly)
    try:
        ab = linalg.eigvals(A, B, homogeneous_eigvals=True)
    except linalg.LinAlgError as exc:
        raise OracleError(f"generalized eigensolver failed: {exc}") from exc
    alpha, beta = ab
    finite = np.abs(beta) > np.finfo(float).eps * np.abs(alpha)
    lam = alpha[finite] / beta[finite]
    lam = lam[np.abs(lam) < INFINITE_EIG]
    if check:
        for z in lam:
            s = linalg.svdvals(poly.evaluate(z))
            if s[-1] > 1e-8 * s[0]:
                raise OracleError(f"companion eigenvalue {z} fails the singularity self-check ({s[-1] / s[0]:.2e})")
    return lam


def scalar_pole_error(lam: complex, R: float, j: int, N: int, dps: int = 50) -> complex:
    """E_N = (1/2 pi i) \\oint_{|z|=R} (z - lam)^{-j} dz - (R/N) sum_k f(R w^k) w^k.

    Both terms are evaluated directly; the sum in ``dps``-digit arithmetic
    so the tiny difference survives cancellation.
    """
    if abs(abs(lam) - R) <= 1e-12 * max(R, 1.0):
        raise ValueError("pole lies on the circle")
    if N < 1 or j < 1:
        raise ValueError("N and j must be positive")
    with mpmath.workdps(dps):
        lam_mp = mpmath.mpc(lam)
        R_mp = mpmath.mpf(R)
        total = mpmath.mpc(0)
        for k in range(N):
            w = mpmath.expjpi(mpmath.mpf(2 * k) / N)
            total += (R_mp * w - lam_mp) ** (-j) * w
        total *= R_mp / N
        # residue of (z - lam)^{-j}: 1 for a simple pole inside, 0 otherwise
        # (j >= 2 has an antiderivative on the punctured plane)
        exact = 1 if (j == 1 and abs(lam) < R) else 0
        return complex(exact - total)


class NewtonResult(NamedTuple):
    value: complex
    vector: np.ndarray
    residual: float


def newton_refine(
    problem: NonlinearMatrixFunction,
    lam0: complex,
    v0: np.ndarray,
    tol: float = 1e-12,
    maxiter: int = 50,
    history: Optional[List[float]] = None,
) -> NewtonResult:
    """Newton's method on [T(lam) v; c^H v - 1] = 0 with c = v0 / |v0|.

    Stops when |T(lam) v| / |v| <= tol. Appends each residual to ``history``
    when given.
    """
    if not problem.has_derivative:
        raise ValueError("newton_refine needs a problem with a derivative")
    v = np.asarray(v0, dtype=complex).copy()
    v /= np.linalg.norm(v)
    c = v.copy()
    lam = complex(lam0)
    m = problem.dimension
    J = np.zeros((m + 1, m + 1), dtype=complex)
    J[m, :m] = c.conj()
    for _ in range(maxiter + 1):
        T = problem.evaluate(lam)
        r = T @ v
        res = np.linalg.norm(r) / np.linalg.norm(v)
        if history is not None:
            history.append(float(res))
        if res <= tol:
            return NewtonResult(lam, v / np.linalg.norm(v), float(res))
        J[:m, :m] = T
        J[:m, m] = problem.derivative(lam) @ v
        F = np.concatenate([r, [c.conj() @ v - 1.0]])
        step = linalg.solve(J, -F)
        v = v + step[:m]
        lam = lam + step[m]
    raise OracleError(f"Newton did not converge in {maxiter} iterations (residual {res:.3e}, lambda {lam})")
