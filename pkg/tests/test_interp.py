import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vskdnn.data import eval_grid, f2, f3, halton, sample
from vskdnn.interp import (CallableScaling, ConstantScaling, ScatteredData, TabulatedScaling,
                           bound_check, cardinal_values, evaluate, fit, lebesgue_profile,
                           native_norm_sq, node_residual)
from vskdnn.kernels import KernelSpec, NodeSet, rbf_eval

from conftest import gauss_elim_solve

GAUSS = KernelSpec("gaussian", 1.0)
MATERN = KernelSpec("matern_c2", 2.0)


def _data(rng, n=25, fn=None):
    X = rng.random((n, 2))
    return ScatteredData(X, (fn or (lambda P: np.sin(3 * P[:, 0]) + P[:, 1] ** 2))(X))


def test_zero_data_zero_coefficients(rng):
    X = rng.random((10, 2))
    I = fit(ScatteredData(X, np.zeros(10)), MATERN)
    assert np.all(I.coefficients == 0)


def test_single_node():
    I = fit(ScatteredData([[0.2, 0.3]], [1.7]), GAUSS)
    assert float(I.coefficients[0]) == pytest.approx(1.7, abs=1e-15)
    r = 0.4
    assert evaluate(I, [[0.2 + r, 0.3]])[0] == pytest.approx(1.7 * rbf_eval(GAUSS, r), rel=1e-14)


def test_three_collinear_nodes_vs_elimination():
    X = np.array([[0.1, 0.1], [0.4, 0.4], [0.9, 0.9]])
    f = np.array([1.0, 3.0, -1.0])
    K = np.array([[np.exp(-np.sum((a - b) ** 2)) for b in X] for a in X])
    I = fit(ScatteredData(X, f), GAUSS)
    np.testing.assert_allclose(np.asarray(I.coefficients, dtype=float), gauss_elim_solve(K, f), atol=1e-10)


@pytest.mark.parametrize("kernel", [GAUSS, MATERN])
def test_interpolation_conditions(rng, kernel):
    d = _data(rng)
    I = fit(d, kernel)
    assert node_residual(I) <= 1e-8 * (1 + np.max(np.abs(d.values)))
    Iv = fit(d, kernel, CallableScaling(lambda P: 5 * (P[:, 0] > 0.5)))
    assert node_residual(Iv) <= 1e-8 * (1 + np.max(np.abs(d.values)))


@pytest.mark.parametrize("n", [25, 729])
@pytest.mark.parametrize("kernel", [KernelSpec("gaussian", 3.0), KernelSpec("matern_c2", 0.5)])
def test_constant_scaling_equals_fsk(rng, n, kernel):
    d = sample(f2, halton(n))
    P = rng.random((100, 2))
    a = evaluate(fit(d, kernel), P)
    b = evaluate(fit(d, kernel, ConstantScaling(-2.5)), P)
    np.testing.assert_allclose(a, b, atol=1e-12, rtol=0)


def test_cardinality(rng):
    d = _data(rng)
    I = fit(d, MATERN)
    for i in range(len(d)):
        e = np.zeros(len(d))
        e[i] = 1
        np.testing.assert_allclose(cardinal_values(I, d.nodes.points[i]), e, atol=1e-8)


def test_nodal_form_matches_expansion(rng):
    d = _data(rng)
    I = fit(d, MATERN, CallableScaling(lambda P: np.sign(P[:, 0] - P[:, 1])))
    P = rng.random((50, 2))
    phi = cardinal_values(I, P)
    np.testing.assert_allclose(phi @ d.values, evaluate(I, P), atol=1e-8)


def test_symmetric_pair_equal_cardinals():
    d = ScatteredData([[0.2, 0.5], [0.8, 0.5]], [1.0, 4.0])
    phi = cardinal_values(fit(d, GAUSS), [0.5, 0.5])
    assert phi[0] == pytest.approx(phi[1], abs=1e-14)


def test_lebesgue_two_nodes_closed_form():
    x1, x2 = np.array([0.0]), np.array([1.0])
    d = ScatteredData(np.array([x1, x2]), [0.0, 0.0])
    I = fit(d, GAUSS)
    k = np.exp(-1.0)
    inv = np.array([[1, -k], [-k, 1]]) / (1 - k * k)
    xs = np.linspace(-0.5, 1.5, 9)
    prof = lebesgue_profile(I, xs[:, None])
    for x, lam in zip(xs, prof.lambda_values):
        kap = np.array([np.exp(-x * x), np.exp(-(x - 1) ** 2)])
        assert lam == pytest.approx(np.abs(inv @ kap).sum(), abs=1e-12)
    assert prof.lambda_sup == prof.lambda_values.max()


def test_lebesgue_at_nodes_is_one(rng):
    d = _data(rng)
    I = fit(d, MATERN, CallableScaling(lambda P: P[:, 0] * 3))
    prof = lebesgue_profile(I, d.nodes.points)
    np.testing.assert_allclose(prof.lambda_values, 1.0, atol=1e-8)
    prof = lebesgue_profile(I, rng.random((30, 2)))
    assert np.all(prof.lambda_values >= 0)


def test_bound_check_nodal_agreement(rng):
    d = _data(rng, fn=lambda P: np.where(P[:, 0] > 0.5, 1.0, -1.0))
    table = TabulatedScaling(d.nodes.points, d.values)
    bc = bound_check(d, MATERN, table, lambda P: np.where(P[:, 0] > 0.5, 1.0, -1.0), eval_grid(20))
    assert bc.nodal_gap == 0.0
    assert bc.violations == 0
    np.testing.assert_allclose(bc.lhs, bc.rhs, atol=1e-10)


def test_bound_check_random_piecewise_constant(rng):
    d = sample(f3, NodeSet(rng.random((25, 2))))
    levels = rng.normal(scale=3, size=4)
    scaling = CallableScaling(lambda P: levels[(P[:, 0] > 0.4).astype(int) + 2 * (P[:, 1] > 0.6)])
    bc = bound_check(d, KernelSpec("matern_c2", 1.0), scaling, f3, eval_grid(20))
    assert bc.lhs.shape == (400,)
    assert bc.violations == 0


def test_bound_check_zero_scaling(rng):
    d = sample(f2, NodeSet(rng.random((25, 2))))
    bc = bound_check(d, MATERN, ConstantScaling(0.0), f2, eval_grid(20))
    assert bc.violations == 0
    bc_none = bound_check(d, MATERN, None, f2, eval_grid(20))
    np.testing.assert_allclose(bc.lhs, bc_none.lhs, atol=1e-12)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_bound_holds_for_random_scalings(seed):
    r = np.random.default_rng(seed)
    d = sample(f2, NodeSet(r.random((25, 2))))
    a, b, c = r.normal(size=3) * 3
    scaling = CallableScaling(lambda P: a * P[:, 0] + b * np.sin(5 * P[:, 1]) + c * (P[:, 0] > P[:, 1]))
    assert bound_check(d, MATERN, scaling, f2, eval_grid(20)).violations == 0


def test_native_norm(rng):
    d = _data(rng, n=3)
    I = fit(d, GAUSS)
    assert native_norm_sq(np.zeros(3), I) == 0.0
    v = rng.normal(size=3)
    X = d.nodes.points
    K = np.array([[np.exp(-np.sum((a - b) ** 2)) for b in X] for a in X])
    assert native_norm_sq(v, I) == pytest.approx(v @ np.linalg.inv(K) @ v, abs=1e-10)
    single = fit(ScatteredData([[0.5, 0.5]], [0.0]), GAUSS)
    assert native_norm_sq([2.5], single) == pytest.approx(6.25)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_native_norm_nonnegative(seed):
    r = np.random.default_rng(seed)
    X = r.random((12, 2))
    I = fit(ScatteredData(X, np.zeros(12)), MATERN)
    v = r.normal(size=12)
    val = native_norm_sq(v, I)
    assert val > 1e-10 * (v @ v)
