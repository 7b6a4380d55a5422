import numpy as np
import pytest

from contour_nep import Contour, SolverConfig, linear_problem, make_gallery_problem, polyeig_oracle, solve

# Fixture draws. The random matrices of the original experiments are not
# available; these seeds give problems with the same qualitative layout
# (8 interior eigenvalues for the quadratic, exactly one interior eigenvalue
# besides a and b for the rank-deficient case).
QUADRATIC_SEED = 0
RANK_DEFICIENT_SEED = 85
R_SMALL = 0.33


@pytest.fixture(scope="session")
def quadratic():
    return make_gallery_problem("random-quadratic-real", {"m": 60, "seed": QUADRATIC_SEED})


@pytest.fixture(scope="session")
def quadratic_oracle(quadratic):
    return polyeig_oracle(quadratic)


@pytest.fixture(scope="session")
def small_circle():
    return Contour.circle(0.0, R_SMALL)


@pytest.fixture(scope="session")
def quadratic_result(quadratic, small_circle):
    return solve(quadratic, small_circle, SolverConfig(N=150))


@pytest.fixture(scope="session")
def rank_deficient():
    return make_gallery_problem("rank-deficient-quadratic", {"m": 15, "a": -0.2, "b": 0.1, "seed": RANK_DEFICIENT_SEED})


@pytest.fixture(scope="session")
def delay():
    return make_gallery_problem("delay-2x2", {"tau": 1.0})


@pytest.fixture(scope="session")
def delay_circle():
    return Contour.circle(-1.0, 6.0)


@pytest.fixture(scope="session")
def delay_result(delay, delay_circle):
    return solve(delay, delay_circle, SolverConfig(K=3, l=2, N=150, identity_probe=True))


@pytest.fixture(scope="session")
def fem():
    return make_gallery_problem("fem-boundary", {"m": 400})


# outside eigenvalues near z = 0.46 and z = 300.6 hug the circle; their directions carry
# relative singular values ~1e-5 and must stay in the subspace, so the rank cutoff is lowered
FEM_TOL_RANK = 1e-8


@pytest.fixture(scope="session")
def fem_result(fem):
    return solve(fem, Contour.circle(150.0, 148.0), SolverConfig(N=150, tol_rank=FEM_TOL_RANK))


def gapped_linear(seed=3, m=20, n_inside=5, r_in=0.6, r_out=1.6):
    """T(z) = zI - A with A = S diag(lam) S^{-1}; n_inside eigenvalues in |z| <= r_in, the rest |z| >= r_out."""
    rng = np.random.default_rng(seed)
    mod = np.concatenate([rng.uniform(0.05, r_in, n_inside), rng.uniform(r_out, 4.0, m - n_inside)])
    mod[n_inside - 1] = r_in
    mod[n_inside] = r_out
    lam = mod * np.exp(2j * np.pi * rng.random(m))
    S = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    A = S @ np.diag(lam) @ np.linalg.inv(S)
    return linear_problem(A), lam


def nearest_error(values, targets):
    """max over targets of the distance to the nearest value."""
    values = np.asarray(values)
    if values.size == 0:
        return np.inf
    return max(float(np.min(np.abs(values - t))) for t in targets)
