"""Contour-integral eigensolver for holomorphic matrix functions.

K = 1 is the single-moment-pair method (SVD of A_0, reduced matrix
V0^H A_1 W0 Sigma0^{-1}); K > 1 replaces A_0, A_1 by the block-Hankel
pencil of the moments A_0 ... A_{2K-1}, which handles more eigenvalues
than the dimension and rank-deficient eigenvector sets.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import List, Optional

import numpy as np
from scipy import linalg

from .contour import Contour
from .matfunc import DomainError, NonlinearMatrixFunction
from .moments import MomentSet, ProbeMatrix, compute_moments, default_shift

log = logging.getLogger(__name__)


class RankGapNotFound(RuntimeError):
    """Every singular value stayed above the cutoff after all allowed growth."""

    def __init__(self, message, singular_values, l, K):
        super().__init__(message)
        self.singular_values = singular_values
        self.l = l
        self.K = K


class ReducedEigenproblemError(RuntimeError):
    def __init__(self, message, D):
        super().__init__(message)
        self.D = D


@dataclass(frozen=True)
class SolverConfig:
    """Solver parameters; ``None`` fields are filled by :meth:`resolve`.

    Defaults: N=150, tol_rank=1e-4 (relative to sigma_1), tol_res=1e-1,
    l=ceil(m/10) clamped to [2, m], shift = contour center.
    """

    l: Optional[int] = None
    K: int = 1
    N: int = 150
    tol_rank: float = 1e-4
    tol_res: float = 1e-1
    seed: int = 0
    shift: Optional[complex] = None
    max_l: Optional[int] = None
    max_K: Optional[int] = None
    adaptive: bool = True
    identity_probe: bool = False
    workers: int = 1

    def resolve(self, m: int, contour: Contour) -> "SolverConfig":
        l = self.l
        if self.identity_probe:
            l = m
        elif l is None:
            l = min(max(math.ceil(m / 10), 2), m)
        cfg = replace(
            self,
            l=l,
            shift=complex(default_shift(contour) if self.shift is None else self.shift),
            max_l=m if self.max_l is None else self.max_l,
            max_K=self.K if self.max_K is None else self.max_K,
        )
        cfg.validate(m)
        return cfg

    def validate(self, m: int):
        if not (self.l is not None and 1 <= self.l <= m):
            raise ValueError(f"l must satisfy 1 <= l <= m={m}, got {self.l}")
        if self.K < 1 or self.N < 1:
            raise ValueError("K and N must be positive")
        if not (self.tol_rank > 0 and self.tol_res > 0):
            raise ValueError("tolerances must be positive")
        if self.max_l is not None and not (self.l <= self.max_l <= m):
            raise ValueError(f"max_l must satisfy l <= max_l <= m={m}")
        if self.max_K is not None and self.max_K < self.K:
            raise ValueError("max_K must be >= K")
        if self.identity_probe and self.l != m:
            raise ValueError("identity probe requires l = m")


@dataclass(frozen=True)
class ReducedBasis:
    V0: np.ndarray
    Sigma0: np.ndarray
    W0: np.ndarray
    k: int
    all_singular_values: np.ndarray


@dataclass(frozen=True)
class Eigenpair:
    value: complex
    vector: np.ndarray
    residual: float
    status: str = "accepted"


@dataclass(frozen=True)
class EigenResult:
    accepted: List[Eigenpair]
    rejected: List[Eigenpair]
    rank_k: int
    singular_values: np.ndarray
    config_used: dict = field(default_factory=dict)
    D: Optional[np.ndarray] = None

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([p.value for p in self.accepted], dtype=complex)

    @property
    def eigenvectors(self) -> np.ndarray:
        if not self.accepted:
            return np.zeros((0, 0), dtype=complex)
        return np.column_stack([p.vector for p in self.accepted])

    @property
    def residuals(self) -> np.ndarray:
        return np.array([p.residual for p in self.accepted])

    @property
    def candidates(self) -> List[Eigenpair]:
        return list(self.accepted) + list(self.rejected)


def build_hankel_pencil(moments, K: int):
    """Block-Hankel matrices B0[i, j] = A_{i+j}, B1[i, j] = A_{i+j+1}, i, j < K."""
    A = moments.moments if isinstance(moments, MomentSet) else tuple(moments)
    if len(A) < 2 * K:
        raise ValueError(f"K={K} needs {2 * K} moments, got {len(A)}")
    if K == 1:
        return np.array(A[0]), np.array(A[1])
    B0 = np.block([[A[i + j] for j in range(K)] for i in range(K)])
    B1 = np.block([[A[i + j + 1] for j in range(K)] for i in range(K)])
    return B0, B1


def rank_test(singular_values, tol_rank: float) -> int:
    """Number of singular values strictly above ``tol_rank``."""
    return int(np.count_nonzero(np.asarray(singular_values) > tol_rank))


def _relative_rank(s, tol_rank, floor):
    if not s.size or s[0] <= floor:
        return 0
    return rank_test(s / s[0], tol_rank)


def reduce(B0: np.ndarray, B1: np.ndarray, tol_rank: float, floor: float = 0.0):
    """Truncated SVD of B0 and the reduced matrix D = V0^H B1 W0 Sigma0^{-1}.

    The cutoff is applied to sigma_j / sigma_1. If sigma_1 <= ``floor`` the
    rank is 0: B0 is then cancellation noise with no interior eigenvalue behind it.
    """
    if B0.shape != B1.shape:
        raise ValueError("B0 and B1 must have the same shape")
    U, s, Wh = linalg.svd(B0, full_matrices=False)
    k = _relative_rank(s, tol_rank, floor)
    V0 = U[:, :k]
    W0 = Wh[:k].conj().T
    Sigma0 = s[:k]
    D = (V0.conj().T @ B1 @ W0) / Sigma0
    return ReducedBasis(V0, Sigma0, W0, k, s), D


def schur_eig(D: np.ndarray):
    """Eigenvalues from the complex Schur diagonal and eigenvectors by back substitution."""
    k = D.shape[0]
    if k == 0:
        return np.zeros(0, dtype=complex), np.zeros((0, 0), dtype=complex)
    if not np.all(np.isfinite(D)):
        raise ReducedEigenproblemError("reduced matrix has non-finite entries", D)
    try:
        T, Z = linalg.schur(D.astype(complex), output="complex")
    except linalg.LinAlgError as exc:
        raise ReducedEigenproblemError(f"Schur decomposition failed: {exc}", D) from exc
    lam = np.diag(T).copy()
    small = np.finfo(float).eps * max(np.linalg.norm(T, 1), np.finfo(float).tiny)
    Y = np.zeros((k, k), dtype=complex)
    for i in range(k):
        Y[i, i] = 1.0
        for j in range(i - 1, -1, -1):
            d = T[j, j] - lam[i]
            if abs(d) < small:
                d = small
            Y[j, i] = -(T[j, j + 1 : i + 1] @ Y[j + 1 : i + 1, i]) / d
    S = Z @ Y
    S /= np.linalg.norm(S, axis=0)
    return lam, S


def extract_eigenpairs(
    D: np.ndarray,
    basis: ReducedBasis,
    problem: NonlinearMatrixFunction,
    contour: Contour,
    tol_res: float,
    K: int = 1,
    shift: complex = 0.0,
    scale: float = 1.0,
    config_used: Optional[dict] = None,
) -> EigenResult:
    """Eigenpairs of T from those of D, filtered by location and residual.

    Eigenvalues of D are mapped back by ``lambda = scale * mu + shift``;
    eigenvectors use the top m x k block of V0.
    """
    m = problem.dimension
    mu, S = schur_eig(D)
    lam = scale * mu + shift
    V = basis.V0[:m] @ S
    accepted, rejected = [], []
    for j in range(len(lam)):
        v = V[:, j]
        nv = np.linalg.norm(v)
        v = v / nv if nv > 0 else v
        try:
            res = float(np.linalg.norm(problem.evaluate(lam[j]) @ v))
        except DomainError:
            res = math.inf
        if not contour.contains(lam[j]):
            rejected.append(Eigenpair(complex(lam[j]), v, res, "outside-contour"))
        elif not res <= tol_res:
            rejected.append(Eigenpair(complex(lam[j]), v, res, "residual-too-large"))
        else:
            accepted.append(Eigenpair(complex(lam[j]), v, res))
    return EigenResult(accepted, rejected, basis.k, basis.all_singular_values, dict(config_used or {}), D)


def noise_floor(moments: MomentSet, K: int, tol_rank: float) -> float:
    """tol_rank times the largest summand size among the moments that enter B0."""
    if not moments.magnitudes:
        return 0.0
    return tol_rank * max(moments.magnitudes[: 2 * K - 1])


def algorithm1(moments: MomentSet, tol_rank: float):
    """Single-moment-pair reduction: SVD of A_0, then B = V0^H A_1 W0 Sigma0^{-1}."""
    U, s, Wh = linalg.svd(moments[0], full_matrices=False)
    k = _relative_rank(s, tol_rank, noise_floor(moments, 1, tol_rank))
    V0, W0 = U[:, :k], Wh[:k].conj().T
    B = (V0.conj().T @ moments[1] @ W0) / s[:k]
    return ReducedBasis(V0, s[:k], W0, k, s), B


def make_probe(m: int, cfg: SolverConfig) -> ProbeMatrix:
    if cfg.identity_probe:
        return ProbeMatrix.identity(m)
    return ProbeMatrix.random(m, cfg.l, cfg.seed)


def solve_moments(moments: MomentSet, problem, contour, cfg: SolverConfig, K: Optional[int] = None):
    """Hankel reduction and extraction for precomputed moments."""
    K = cfg.K if K is None else K
    B0, B1 = build_hankel_pencil(moments, K)
    basis, D = reduce(B0, B1, cfg.tol_rank, noise_floor(moments, K, cfg.tol_rank))
    l = moments[0].shape[1]
    return extract_eigenpairs(
        D, basis, problem, contour, cfg.tol_res, K, shift=moments.shift,
        config_used={"l": l, "K": K, "N": moments.N},
    )


def solve(problem: NonlinearMatrixFunction, contour: Contour, config: Optional[SolverConfig] = None) -> EigenResult:
    """All eigenpairs of T inside ``contour``.

    With ``config.adaptive`` the probe count l grows by max(1, ceil(l/2))
    up to ``max_l`` while no rank drop is seen, then K grows by one up to
    ``max_K``.
    """
    m = problem.dimension
    cfg = (config or SolverConfig()).resolve(m, contour)
    for p in problem.singular_points:
        if contour.distance(p) <= 1e-9 * contour.scale:
            raise ValueError(f"contour passes through singular point {p}")
    l, K = cfg.l, cfg.K
    while True:
        step = replace(cfg, l=l, K=K)
        probe = make_probe(m, step)
        moments = compute_moments(problem, contour, probe, cfg.N, 2 * K, cfg.shift, cfg.workers)
        result = solve_moments(moments, problem, contour, step, K)
        full = result.rank_k == K * l
        if not (full and cfg.adaptive):
            if full:
                log.warning("no rank drop in %d singular values (l=%d, K=%d)", K * l, l, K)
            return result
        if l < cfg.max_l and not cfg.identity_probe:
            l = min(l + max(1, math.ceil(l / 2)), cfg.max_l)
        elif K < cfg.max_K:
            K += 1
        else:
            raise RankGapNotFound(
                f"rank gap not found: all {K * l} singular values exceed tol_rank={cfg.tol_rank} "
                f"(l={l}, K={K}); increase max_l or max_K",
                result.singular_values, l, K,
            )
        log.info("growing to l=%d, K=%d", l, K)


def normalization_check(problem: NonlinearMatrixFunction, lam: complex, v: np.ndarray) -> complex:
    """w^H T'(lam) v, with w the left singular vector of T(lam) for its smallest singular value."""
    U, s, Wh = linalg.svd(problem.evaluate(lam))
    w = U[:, -1]
    return complex(w.conj() @ problem.derivative(lam) @ v)
