import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vskdnn.data import halton
from vskdnn.kernels import (DuplicateNodesError, Family, KernelError, KernelSpec, NodeSet,
                            augment, gram, rbf_eval)
from vskdnn.numerics import spd_factor

FAMILIES = [Family.GAUSSIAN, Family.MATERN_C2]


@pytest.mark.parametrize("family", FAMILIES)
def test_value_at_zero_is_one(family):
    assert rbf_eval(KernelSpec(family, 1.0), 0.0) == 1.0


def test_printed_formulas():
    assert rbf_eval(KernelSpec("gaussian", 2.0), 0.5) == pytest.approx(math.exp(-1), abs=1e-15)
    assert rbf_eval(KernelSpec("matern_c2", 1.0), 1.0) == pytest.approx(2 * math.exp(-1), abs=1e-15)
    assert rbf_eval(KernelSpec("gaussian", 2.0), 0.5) == pytest.approx(0.3678794, abs=1e-7)
    assert rbf_eval(KernelSpec("matern_c2", 1.0), 1.0) == pytest.approx(0.7357589, abs=1e-7)


def test_negative_distance_rejected():
    with pytest.raises(KernelError):
        rbf_eval(KernelSpec("gaussian", 1.0), -0.1)


@pytest.mark.parametrize("eps", [0.0, -1.0, float("nan")])
def test_bad_epsilon(eps):
    with pytest.raises(KernelError):
        KernelSpec("gaussian", eps)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(FAMILIES), st.floats(0.01, 10), st.floats(0, 50), st.floats(0, 50))
def test_radial_monotonicity(family, eps, r1, r2):
    spec = KernelSpec(family, eps)
    lo, hi = sorted((r1, r2))
    assert rbf_eval(spec, lo) >= rbf_eval(spec, hi)
    assert 0 <= rbf_eval(spec, hi) <= 1


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(FAMILIES), st.floats(0.01, 10), st.floats(0, 20))
def test_continuity(family, eps, r):
    spec = KernelSpec(family, eps)
    assert abs(rbf_eval(spec, r + 1e-8) - rbf_eval(spec, r)) < 1e-6


def test_augment_example():
    aug = augment(NodeSet([[0, 0], [1, 1]]), [0, 1])
    np.testing.assert_array_equal(aug.points, [[0, 0, 0], [1, 1, 1]])
    assert np.linalg.norm(aug.points[0] - aug.points[1]) == pytest.approx(math.sqrt(3))
    assert len(aug) == 2 and aug.dim == 3


def test_augment_shape_and_mismatch(rng):
    nodes = NodeSet(rng.random((7, 2)))
    assert augment(nodes, np.zeros(7)).points.shape == (7, 3)
    with pytest.raises(KernelError):
        augment(nodes, np.zeros(6))
    with pytest.raises(KernelError):
        augment(nodes, [np.nan] * 7)


def test_constant_scaling_keeps_distances(rng):
    nodes = NodeSet(rng.random((20, 2)))
    for fam in FAMILIES:
        spec = KernelSpec(fam, 1.7)
        np.testing.assert_array_equal(gram(spec, augment(nodes, np.full(20, 3.25))), gram(spec, nodes))


def test_gram_small_cases():
    spec = KernelSpec("gaussian", 1.5)
    np.testing.assert_array_equal(gram(spec, [[0.3, 0.4]]), [[1.0]])
    r = 0.7
    K = gram(spec, [[0.0, 0.0], [r, 0.0]])
    assert K[0, 0] == K[1, 1] == 1.0
    assert K[0, 1] == pytest.approx(math.exp(-(1.5 * r) ** 2), rel=1e-15)


def test_gram_symmetric_unit_diagonal(rng):
    K = gram(KernelSpec("matern_c2", 3.0), rng.random((50, 2)))
    assert np.array_equal(K, K.T)
    assert np.all(np.diag(K) == 1.0)
    assert np.all((K > 0) & (K <= 1))


def test_gram_duplicates_rejected():
    with pytest.raises(DuplicateNodesError):
        gram(KernelSpec("gaussian", 1.0), [[0.1, 0.2], [0.5, 0.5], [0.1, 0.2]])


def test_halton_gram_factorizes():
    K = gram(KernelSpec("gaussian", 0.6), halton(729))
    fac = spd_factor(K)
    assert fac.jitter <= 1e-6
    L = fac.lower
    np.testing.assert_allclose(L @ L.T, K + fac.jitter * np.eye(729), atol=1e-12)
