"""Holomorphic matrix functions T(z) and a gallery of test problems."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

MatrixMap = Callable[[complex], np.ndarray]


class DomainError(ValueError):
    """Raised when T is evaluated at one of its declared singular points."""

    def __init__(self, z, point):
        super().__init__(f"T(z) is not defined at z={z!r} (singular point {point!r})")
        self.z = z
        self.point = point


@dataclass(frozen=True)
class NonlinearMatrixFunction:
    """A holomorphic m x m matrix function with optional exact derivative.

    ``singular_points`` lists points where T is undefined; evaluation
    within ``1e-14`` (relative) of one raises :class:`DomainError`.
    """

    dimension: int
    func: MatrixMap
    dfunc: Optional[MatrixMap] = None
    singular_points: tuple = ()
    name: str = "custom"

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be positive")
        object.__setattr__(
            self, "singular_points", tuple(complex(p) for p in self.singular_points)
        )

    def _check(self, z):
        for p in self.singular_points:
            if abs(z - p) <= 1e-14 * max(1.0, abs(p)):
                raise DomainError(z, p)

    def evaluate(self, z) -> np.ndarray:
        z = complex(z)
        self._check(z)
        return np.asarray(self.func(z), dtype=complex)

    def derivative(self, z) -> np.ndarray:
        if self.dfunc is None:
            raise NotImplementedError(f"problem {self.name!r} has no derivative")
        z = complex(z)
        self._check(z)
        return np.asarray(self.dfunc(z), dtype=complex)

    @property
    def has_derivative(self) -> bool:
        return self.dfunc is not None

    __call__ = evaluate


class PolynomialMatrixFunction(NonlinearMatrixFunction):
    """T(z) = sum_j coefficients[j] * z**j, evaluated by Horner's rule."""

    def __init__(self, coefficients: Sequence[np.ndarray], name: str = "polynomial"):
        coeffs = tuple(np.array(c, dtype=complex) for c in coefficients)
        if not coeffs:
            raise ValueError("need at least one coefficient")
        m = coeffs[0].shape[0]
        for c in coeffs:
            if c.shape != (m, m):
                raise ValueError("coefficients must all be square of the same size")
        for c in coeffs:
            c.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)
        super().__init__(m, self._horner, self._dhorner, (), name)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def _horner(self, z):
        out = self.coefficients[-1].copy()
        for c in reversed(self.coefficients[:-1]):
            out = out * z + c
        return out

    def _dhorner(self, z):
        m = self.dimension
        if self.degree == 0:
            return np.zeros((m, m), dtype=complex)
        out = self.degree * self.coefficients[-1]
        for j in range(self.degree - 1, 0, -1):
            out = out * z + j * self.coefficients[j]
        return out


def linear_problem(A: np.ndarray, name: str = "linear") -> PolynomialMatrixFunction:
    """T(z) = z I - A."""
    A = np.asarray(A, dtype=complex)
    return PolynomialMatrixFunction([-A, np.eye(A.shape[0])], name=name)


# ---------------------------------------------------------------- gallery


def _require(params, *keys):
    missing = [k for k in keys if k not in params]
    if missing:
        raise ValueError(f"missing required params: {', '.join(missing)}")


def _rand(rng, m, complex_entries=False):
    # uniform [0, 1) per entry; complex case draws real and imaginary parts independently
    if complex_entries:
        return rng.random((m, m)) + 1j * rng.random((m, m))
    return rng.random((m, m))


def random_quadratic(m: int, seed: int, complex_entries: bool = False):
    rng = np.random.default_rng(seed)
    coeffs = [_rand(rng, m, complex_entries) for _ in range(3)]
    name = "random-quadratic-complex" if complex_entries else "random-quadratic-real"
    return PolynomialMatrixFunction(coeffs, name=name)


def rank_deficient_quadratic(m: int, a: float, b: float, seed: int):
    """T(z) = T0 + (z - a)(b - z) T1 with a zero first column in T0.

    Both a and b are eigenvalues with the shared eigenvector e_1, so the
    eigenvector matrix of the interior eigenvalues is rank deficient.
    """
    rng = np.random.default_rng(seed)
    T0 = rng.random((m, m))
    T1 = rng.random((m, m))
    T0[:, 0] = 0.0
    # (z-a)(b-z) = -ab + (a+b) z - z^2
    return PolynomialMatrixFunction([T0 - a * b * T1, (a + b) * T1, -T1], name="rank-deficient-quadratic")


def fem_matrices(m: int):
    """Stiffness T1 and mass T3 of the linear-element string on [0, 1], h = 1/m."""
    main = np.full(m, 2.0)
    main[-1] = 1.0
    off = np.ones(m - 1)
    T1 = m * (np.diag(main) - np.diag(off, 1) - np.diag(off, -1))
    main3 = np.full(m, 4.0)
    main3[-1] = 2.0
    T3 = (np.diag(main3) + np.diag(off, 1) + np.diag(off, -1)) / (6.0 * m)
    return T1, T3


def fem_boundary(m: int, form: str = "bvp") -> NonlinearMatrixFunction:
    """FE discretization of -u'' = z u, u(0) = 0, u'(1) + z/(z-1) u(1) = 0.

    ``form="bvp"`` assembles the boundary term as written in the boundary
    condition, T(z) = T1 + z/(z-1) e_m e_m^T - z T3. ``form="printed"`` is
    T(z) = T1 + 1/(1-z) e_m e_m^T - z T3, the variant with the opposite sign
    of the pole term and no constant part. Both are singular at z = 1.
    """
    T1, T3 = fem_matrices(m)
    E = np.zeros((m, m))
    E[-1, -1] = 1.0
    if form == "bvp":
        def func(z):
            return T1 + (z / (z - 1.0)) * E - z * T3

        def dfunc(z):
            return (-1.0 / (z - 1.0) ** 2) * E - T3
    elif form == "printed":
        def func(z):
            return T1 + E / (1.0 - z) - z * T3

        def dfunc(z):
            return E / (1.0 - z) ** 2 - T3
    else:
        raise ValueError(f"unknown fem-boundary form {form!r}; use 'bvp' or 'printed'")
    return NonlinearMatrixFunction(m, func, dfunc, (1.0,), name="fem-boundary")


DELAY_T0 = np.array([[-5.0, 1.0], [2.0, -6.0]])
DELAY_T1 = np.array([[-2.0, 1.0], [4.0, -1.0]])


def delay_2x2(tau: float = 1.0, T0=DELAY_T0, T1=DELAY_T1) -> NonlinearMatrixFunction:
    """Characteristic matrix z I - T0 - T1 exp(-z tau) of x' = T0 x(t) + T1 x(t - tau)."""
    T0 = np.asarray(T0, dtype=float)
    T1 = np.asarray(T1, dtype=float)
    eye = np.eye(T0.shape[0])

    def func(z):
        return z * eye - T0 - T1 * np.exp(-z * tau)

    def dfunc(z):
        return eye + tau * T1 * np.exp(-z * tau)

    fun = NonlinearMatrixFunction(T0.shape[0], func, dfunc, (), name="delay-2x2")
    object.__setattr__(fun, "T0", T0)
    object.__setattr__(fun, "T1", T1)
    object.__setattr__(fun, "tau", tau)
    return fun


def linear_diagonal(diagonal: Sequence[complex]) -> PolynomialMatrixFunction:
    return linear_problem(np.diag(np.asarray(diagonal, dtype=complex)), name="linear-diagonal")


GALLERY = (
    "random-quadratic-real",
    "random-quadratic-complex",
    "fem-boundary",
    "rank-deficient-quadratic",
    "delay-2x2",
    "linear-diagonal",
)


def make_gallery_problem(name: str, params: Optional[Mapping] = None) -> NonlinearMatrixFunction:
    """Build a named test problem.

    ============================ ==========================================
    name                         params
    ============================ ==========================================
    random-quadratic-real        m, seed
    random-quadratic-complex     m, seed
    fem-boundary                 m, form ('bvp' default, or 'printed')
    rank-deficient-quadratic     m, seed, a (default -0.2), b (default 0.1)
    delay-2x2                    tau (default 1)
    linear-diagonal              diagonal (list of numbers)
    ============================ ==========================================
    """
    params = dict(params or {})
    if name in ("random-quadratic-real", "random-quadratic-complex"):
        _require(params, "m", "seed")
        return random_quadratic(int(params["m"]), int(params["seed"]), name.endswith("complex"))
    if name == "fem-boundary":
        _require(params, "m")
        return fem_boundary(int(params["m"]), str(params.get("form", "bvp")))
    if name == "rank-deficient-quadratic":
        _require(params, "m", "seed")
        return rank_deficient_quadratic(
            int(params["m"]), float(params.get("a", -0.2)), float(params.get("b", 0.1)), int(params["seed"])
        )
    if name == "delay-2x2":
        return delay_2x2(float(params.get("tau", 1.0)))
    if name == "linear-diagonal":
        _require(params, "diagonal")
        return linear_diagonal([complex(d) for d in params["diagonal"]])
    raise ValueError(f"unknown gallery problem {name!r}; choose from {', '.join(GALLERY)}")
