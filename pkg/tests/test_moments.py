import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contour_nep import (
    Contour,
    NodeFailure,
    ProbeMatrix,
    apply_shift,
    compute_moments,
    linear_problem,
    make_gallery_problem,
)
from contour_nep import moments as moments_mod

from conftest import gapped_linear


def direct_sum(f, contour, N, p=0, shift=0.0):
    """(1/iN) sum_j (phi_j - shift)^p f(phi_j) phi'_j with an explicit Python loop."""
    total = 0
    for j in range(N):
        t = 2 * np.pi * j / N
        z, dz = contour.phi(t), contour.dphi(t)
        total = total + (z - shift) ** p * f(z) * dz
    return total / (1j * N)


def test_linear_identity_moments():
    T = linear_problem(np.zeros((2, 2)))
    M = compute_moments(T, Contour.circle(0, 1), ProbeMatrix.identity(2), N=8, P=2)
    np.testing.assert_allclose(M[0], np.eye(2), atol=1e-15)
    np.testing.assert_allclose(M[1], np.zeros((2, 2)), atol=1e-15)


def test_scalar_geometric_identity():
    T = linear_problem(np.array([[0.5]]))
    c = Contour.circle(0, 1)
    M = compute_moments(T, c, ProbeMatrix.identity(1), N=10, P=1)
    oracle = direct_sum(lambda z: 1 / (z - 0.5), c, 10)
    assert oracle == pytest.approx(1 / (1 - 0.5**10), rel=1e-15)
    assert M[0][0, 0] == pytest.approx(oracle, rel=1e-14)


def test_diagonal_against_direct_summation():
    T = linear_problem(np.diag([0.1, 2.0]))
    c = Contour.circle(0, 1)
    M = compute_moments(T, c, ProbeMatrix.identity(2), N=16, P=2)
    for p in range(2):
        for i, lam in enumerate((0.1, 2.0)):
            oracle = direct_sum(lambda z: 1 / (z - lam), c, 16, p)
            assert abs(M[p][i, i] - oracle) <= 1e-13 * abs(oracle) + 1e-16
        assert abs(M[p][0, 1]) == 0 and abs(M[p][1, 0]) == 0
    # frozen closed forms of the trapezoid sums: inside 1/(1-q^N), outside -q'^N/(1-q'^N) (q' = R/lam)
    np.testing.assert_allclose(M[0].diagonal(), [1 / (1 - 0.1**16), -(0.5**16) / (1 - 0.5**16)], rtol=1e-13, atol=1e-15)
    np.testing.assert_allclose(M[1].diagonal(), [0.1 / (1 - 0.1**16), -2 * (0.5**16) / (1 - 0.5**16)], rtol=1e-13, atol=1e-15)


def test_moments_shape_and_metadata():
    T = make_gallery_problem("random-quadratic-real", {"m": 6, "seed": 3})
    M = compute_moments(T, Contour.circle(0, 0.2), ProbeMatrix.random(6, 3, 0), N=12, P=4, shift=0.05)
    assert len(M) == 4 and M.N == 12 and M.shift == 0.05
    assert all(A.shape == (6, 3) for A in M.moments)


def test_shift_first_order():
    T = make_gallery_problem("delay-2x2", {})
    c = Contour.circle(-1, 6)
    M = compute_moments(T, c, ProbeMatrix.identity(2), N=40, P=2)
    z0 = -1.0 + 0.5j
    S = apply_shift(M, z0)
    np.testing.assert_array_equal(S[0], M[0])
    np.testing.assert_allclose(S[1], M[1] - z0 * M[0], rtol=1e-14, atol=1e-14)
    assert S.shift == z0


def test_zero_shift_identity():
    T = make_gallery_problem("delay-2x2", {})
    M = compute_moments(T, Contour.circle(-1, 6), ProbeMatrix.identity(2), N=20, P=3)
    S = apply_shift(M, 0)
    for a, b in zip(M.moments, S.moments):
        np.testing.assert_array_equal(a, b)


def test_scalar_shift_against_recomputation():
    T = linear_problem(np.array([[0.3]]))
    c = Contour.circle(0, 1)
    M = compute_moments(T, c, ProbeMatrix.identity(1), N=10, P=3)
    direct = compute_moments(T, c, ProbeMatrix.identity(1), N=10, P=3, shift=0.5)
    shifted = apply_shift(M, 0.5)
    for p in (1, 2):
        assert abs(shifted[p][0, 0] - direct[p][0, 0]) <= 1e-13 * abs(direct[p][0, 0])


@given(
    re=st.floats(-0.2, 0.2), im=st.floats(-0.2, 0.2), P=st.integers(1, 6), seed=st.integers(0, 100)
)
@settings(max_examples=20, deadline=None)
def test_apply_shift_matches_recomputation(re, im, P, seed):
    T, _ = gapped_linear(seed=seed % 7, m=8, n_inside=3)
    c = Contour.circle(0, 1)
    probe = ProbeMatrix.random(8, 2, seed)
    z0 = complex(re, im)
    M = compute_moments(T, c, probe, N=24, P=P)
    direct = compute_moments(T, c, probe, N=24, P=P, shift=z0)
    shifted = apply_shift(M, z0)
    scale = max(np.linalg.norm(A) for A in M.moments)
    for a, b in zip(shifted.moments, direct.moments):
        assert np.linalg.norm(a - b) <= 1e-11 * scale


def test_riesz_projector():
    T, lam = gapped_linear()
    A = -T.coefficients[0]
    w, S = np.linalg.eig(A)
    inside = np.abs(w) < 1
    P_gamma = S[:, inside] @ np.linalg.inv(S)[inside]
    probe = ProbeMatrix.random(20, 7, 11)
    M = compute_moments(T, Contour.circle(0, 1), probe, N=64, P=1)
    err = np.linalg.norm(M[0] - P_gamma @ probe.columns) / np.linalg.norm(P_gamma @ probe.columns)
    assert err <= 1e-10


def test_exponential_quadrature_decay():
    # the slowest mode is the outside eigenvalue at |z| = 1.6, so |A_N - A_2N| ~ (1/1.6)^N
    T, _ = gapped_linear()
    c = Contour.circle(0, 1)
    probe = ProbeMatrix.random(20, 4, 5)
    Ns = np.arange(8, 41, 4)
    diffs = []
    for N in Ns:
        a = compute_moments(T, c, probe, N, 2)
        b = compute_moments(T, c, probe, 2 * N, 2)
        diffs.append(np.linalg.norm(a[0] - b[0]))
    diffs = np.array(diffs)
    assert np.all(np.diff(diffs) < 0)
    slope = np.polyfit(Ns, np.log(diffs), 1)[0]
    assert slope == pytest.approx(np.log(1 / 1.6), rel=0.1)


@pytest.mark.parametrize("l, P", [(1, 1), (3, 2), (6, 8)])
def test_one_factorization_per_node(l, P):
    T = make_gallery_problem("random-quadratic-real", {"m": 6, "seed": 2})
    before = moments_mod.factorization_count()
    M = compute_moments(T, Contour.circle(0, 0.2), ProbeMatrix.random(6, l, 0), N=17, P=P)
    assert M.factorizations == 17
    assert moments_mod.factorization_count() - before == 17


def test_node_failure_on_contour_eigenvalue():
    T = linear_problem(np.diag([1.0, 3.0]))
    with pytest.raises(NodeFailure) as info:
        compute_moments(T, Contour.circle(0, 1), ProbeMatrix.identity(2), N=8, P=1)
    assert info.value.index == 0
    assert info.value.z == pytest.approx(1.0)


def test_sequential_runs_are_bitwise_identical():
    T = make_gallery_problem("random-quadratic-complex", {"m": 10, "seed": 4})
    c = Contour.circle(0, 0.3)
    a = compute_moments(T, c, ProbeMatrix.random(10, 3, 1), N=30, P=4)
    b = compute_moments(T, c, ProbeMatrix.random(10, 3, 1), N=30, P=4)
    for x, y in zip(a.moments, b.moments):
        np.testing.assert_array_equal(x, y)


def test_parallel_matches_sequential():
    T = make_gallery_problem("random-quadratic-complex", {"m": 10, "seed": 4})
    c = Contour.circle(0, 0.3)
    probe = ProbeMatrix.random(10, 3, 1)
    a = compute_moments(T, c, probe, N=30, P=3)
    b = compute_moments(T, c, probe, N=30, P=3, workers=4)
    assert b.factorizations == 30
    for x, y in zip(a.moments, b.moments):
        np.testing.assert_allclose(x, y, rtol=1e-13, atol=1e-15 * np.linalg.norm(x))


def test_probe_validation():
    with pytest.raises(ValueError):
        ProbeMatrix.random(4, 5, 0)
    I = ProbeMatrix.identity(3)
    assert I.origin == "identity" and I.l == 3
    np.testing.assert_array_equal(I.columns, np.eye(3))
