"""Trapezoid-sum contour moments of the resolvent T(z)^{-1} applied to a probe block."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import comb
import threading
from typing import Optional

import numpy as np
from scipy.linalg import lapack, lu_solve

from .contour import Contour
from .matfunc import NonlinearMatrixFunction

# reciprocal condition numbers below this signal an eigenvalue on/near the contour
RCOND_MIN = 1e3 * np.finfo(float).eps


class NodeFailure(RuntimeError):
    """T(phi(t_j)) is singular or numerically singular at a quadrature node."""

    def __init__(self, index, z, rcond):
        super().__init__(
            f"T(z) is numerically singular at node {index} (z={z:.6g}, rcond={rcond:.3g}); "
            "an eigenvalue probably lies on or near the contour"
        )
        self.index = index
        self.z = z
        self.rcond = rcond


@dataclass(frozen=True)
class ProbeMatrix:
    columns: np.ndarray
    origin: str
    seed: Optional[int] = None

    @property
    def l(self) -> int:
        return self.columns.shape[1]

    @classmethod
    def random(cls, m: int, l: int, seed: int) -> "ProbeMatrix":
        """Complex Gaussian m x l block from ``numpy.random.default_rng(seed)``."""
        if not 1 <= l <= m:
            raise ValueError(f"probe count must satisfy 1 <= l <= m, got l={l}, m={m}")
        rng = np.random.default_rng(seed)
        cols = rng.standard_normal((m, l)) + 1j * rng.standard_normal((m, l))
        return cls(cols, "random", seed)

    @classmethod
    def identity(cls, m: int) -> "ProbeMatrix":
        return cls(np.eye(m, dtype=complex), "identity")


@dataclass(frozen=True)
class MomentSet:
    moments: tuple
    N: int
    shift: complex = 0.0
    factorizations: int = 0
    # sum_j |w_j| |phi_j - shift|^p |X_j|_F: size of the summands before cancellation
    magnitudes: tuple = ()

    def __len__(self):
        return len(self.moments)

    def __getitem__(self, p):
        return self.moments[p]


_counter_lock = threading.Lock()
_factorizations = 0


def factorization_count() -> int:
    """Total LU factorizations performed by this module since import."""
    return _factorizations


def _factor(T, index, z):
    global _factorizations
    with _counter_lock:
        _factorizations += 1
    lu, piv, info = lapack.zgetrf(np.asarray(T, dtype=complex, order="F"))
    if info > 0:
        raise NodeFailure(index, z, 0.0)
    anorm = np.linalg.norm(T, 1)
    rcond, _ = lapack.zgecon(lu, anorm, norm="1")
    if not rcond >= RCOND_MIN:
        raise NodeFailure(index, z, rcond)
    return lu, piv


def _node_solve(problem, V, z, index, tally):
    lu, piv = _factor(problem.evaluate(z), index, z)
    tally.append(index)
    return lu_solve((lu, piv), V)


def compute_moments(
    problem: NonlinearMatrixFunction,
    contour: Contour,
    probe,
    N: int,
    P: int,
    shift: complex = 0.0,
    workers: int = 1,
) -> MomentSet:
    """A_p = (1/iN) sum_j (phi_j - shift)^p T(phi_j)^{-1} V phi'_j for p < P.

    One LU factorization per node serves all probe columns and all powers.
    ``workers > 1`` solves nodes in a thread pool; the summation order then
    depends on scheduling.
    """
    V = probe.columns if isinstance(probe, ProbeMatrix) else np.asarray(probe, dtype=complex)
    if V.ndim == 1:
        V = V[:, None]
    if P < 1:
        raise ValueError("need at least one moment")
    nd = contour.nodes(N)
    shift = complex(shift)
    m, l = V.shape
    if m != problem.dimension:
        raise ValueError(f"probe has {m} rows, problem dimension is {problem.dimension}")
    acc = np.zeros((P, m, l), dtype=complex)
    mags = np.zeros(P)
    tally = []

    def accumulate(j, X):
        w = nd.dz[j] / (1j * N)
        s = nd.z[j] - shift
        size = abs(w) * np.linalg.norm(X)
        for p in range(P):
            acc[p] += w * X
            mags[p] += size * abs(s) ** p
            w = w * s

    if workers <= 1:
        for j in range(N):
            accumulate(j, _node_solve(problem, V, nd.z[j], j, tally))
    else:
        with ThreadPoolExecutor(workers) as ex:
            futures = [ex.submit(_node_solve, problem, V, nd.z[j], j, tally) for j in range(N)]
            for j, f in enumerate(futures):
                accumulate(j, f.result())
    return MomentSet(tuple(acc), N, shift, factorizations=len(tally), magnitudes=tuple(mags))


def apply_shift(moments: MomentSet, z0: complex) -> MomentSet:
    """Re-expand moments about z0: sum_q C(p,q) (-z0)^(p-q) A_q."""
    if moments.shift != 0:
        raise ValueError("apply_shift expects unshifted moments")
    z0 = complex(z0)
    if z0 == 0:
        return moments
    # |phi - z0|^p <= sum_q C(p,q) |z0|^(p-q) |phi|^q bounds the shifted summands
    mags = moments.magnitudes
    if mags:
        mags = tuple(sum(comb(p, q) * abs(z0) ** (p - q) * mags[q] for q in range(p + 1)) for p in range(len(mags)))
    out = []
    for p in range(len(moments)):
        Ap = np.zeros_like(moments[0])
        for q in range(p + 1):
            Ap = Ap + comb(p, q) * (-z0) ** (p - q) * moments[q]
        out.append(Ap)
    return MomentSet(tuple(out), moments.N, z0, moments.factorizations, mags)


def default_shift(contour: Contour) -> complex:
    return contour.center if contour.kind in ("circle", "ellipse") else 0.0
