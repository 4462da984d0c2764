"""FSK/VSK interpolants, cardinal functions and Lebesgue diagnostics."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.spatial import cKDTree

from .kernels import KernelSpec, NodeSet, augment, as_points, check_distinct, cross_gram, gram
from .numerics import EXTENDED, SPDFactor, spd_factor

CHUNK = 2048


# -- scaling functions -------------------------------------------------------

class ScalingFunction:
    """A map from R^d to R used as the extra VSK coordinate."""

    def __call__(self, points) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class ConstantScaling(ScalingFunction):
    value: float = 0.0

    def __call__(self, points):
        return np.full(as_points(points).shape[0], float(self.value))


@dataclass(frozen=True, eq=False)
class CallableScaling(ScalingFunction):
    fn: Callable[[np.ndarray], np.ndarray]
    name: str = "callable"

    def __call__(self, points):
        return np.asarray(self.fn(as_points(points)), dtype=float).reshape(-1)


class TabulatedScaling(ScalingFunction):
    """Nearest-point lookup into a table of (point, value) pairs."""

    def __init__(self, points, values):
        self.points = np.array(as_points(points), dtype=float)
        self.values = np.asarray(values, dtype=float).reshape(-1)
        if self.values.shape[0] != self.points.shape[0]:
            raise ValueError("table points and values differ in length")
        self._tree = cKDTree(self.points)

    def __call__(self, points):
        _, idx = self._tree.query(as_points(points))
        return self.values[idx]


# -- data container ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ScatteredData:
    nodes: NodeSet
    values: np.ndarray

    def __post_init__(self):
        if not isinstance(self.nodes, NodeSet):
            object.__setattr__(self, "nodes", NodeSet(self.nodes))
        vals = np.array(self.values, dtype=float).reshape(-1)
        if vals.shape[0] != len(self.nodes):
            raise ValueError(f"{vals.shape[0]} values for {len(self.nodes)} nodes")
        if not np.all(np.isfinite(vals)):
            raise ValueError("data values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.nodes)


# -- interpolant --------------------------------------------------------------

def _lift(points, scaling):
    pts = as_points(points)
    if scaling is None:
        return pts
    return augment(NodeSet(pts), scaling(pts)).points


@dataclass(frozen=True, eq=False)
class Interpolant:
    """Kernel expansion sum_i c_i k(x~, x~_i) with an optional scaling function.

    Coefficients are kept in extended precision: for flat kernels they reach
    1e10 and rounding them to float64 alone would spoil the interpolation
    conditions.
    """

    kernel: KernelSpec
    centers: NodeSet
    scaling: ScalingFunction | None
    coefficients: np.ndarray
    values: np.ndarray
    factor: SPDFactor = field(repr=False)
    lifted_centers: np.ndarray = field(repr=False)
    gram_ext: np.ndarray = field(repr=False)

    @property
    def jitter_used(self) -> float:
        return self.factor.jitter

    def kernel_rows(self, points, dtype=float) -> np.ndarray:
        return cross_gram(self.kernel, _lift(points, self.scaling), self.lifted_centers, dtype=dtype)

    def __call__(self, points):
        return evaluate(self, points)


def fit(data: ScatteredData, kernel: KernelSpec, scaling: ScalingFunction | None = None) -> Interpolant:
    """Solve K c = f on the (possibly augmented) nodes.

    ``scaling=None`` gives the classical fixed-scale interpolant.
    """
    lifted = _lift(data.nodes, scaling)
    # distinctness is a property of the source nodes; augmentation only separates them
    check_distinct(data.nodes)
    K_ext = gram(kernel, lifted, check=False, dtype=EXTENDED)
    fac = spd_factor(K_ext.astype(float))
    c = fac.solve_extended(data.values, K_ext)
    return Interpolant(kernel=kernel, centers=data.nodes, scaling=scaling,
                       coefficients=c, values=data.values, factor=fac,
                       lifted_centers=lifted, gram_ext=K_ext)


def refit(interp: Interpolant, values) -> Interpolant:
    """Same kernel, centers and factorization, new right-hand side."""
    vals = np.array(values, dtype=float).reshape(-1)
    vals.setflags(write=False)
    return Interpolant(kernel=interp.kernel, centers=interp.centers, scaling=interp.scaling,
                       coefficients=interp.factor.solve_extended(vals, interp.gram_ext),
                       values=vals, factor=interp.factor,
                       lifted_centers=interp.lifted_centers, gram_ext=interp.gram_ext)


def evaluate(interp: Interpolant, points) -> np.ndarray:
    pts = as_points(points)
    out = np.empty(pts.shape[0])
    for s in range(0, pts.shape[0], CHUNK):
        rows = interp.kernel_rows(pts[s:s + CHUNK], dtype=EXTENDED)
        out[s:s + CHUNK] = rows @ interp.coefficients
    return out


def cardinal_values(interp: Interpolant, x, extended: bool | None = None) -> np.ndarray:
    """Values of all cardinal functions at ``x``.

    A single point gives a length-n vector; an (m, d) batch gives an (m, n)
    array.  Small batches are refined in extended precision; large ones
    (``extended=None`` and m > 64) use plain float64 solves.
    """
    pts = np.asarray(x, dtype=float)
    single = pts.ndim == 1
    pts = pts.reshape(1, -1) if single else as_points(pts)
    if extended is None:
        extended = pts.shape[0] <= 64
    if extended:
        rows = interp.kernel_rows(pts, dtype=EXTENDED)
        phi = interp.factor.solve_extended(rows.T, interp.gram_ext).T.astype(float)
    else:
        phi = interp.factor.solve(interp.kernel_rows(pts).T).T
    return phi[0] if single else phi


@dataclass(frozen=True, eq=False)
class LebesgueProfile:
    eval_points: NodeSet
    lambda_values: np.ndarray
    # grid maximum: a lower estimate of the Lebesgue constant
    lambda_sup: float


def lebesgue_function(interp: Interpolant, points, extended: bool | None = None) -> np.ndarray:
    """lambda(x) = sum_j |phi_j(x)|.

    ``extended=None`` refines in extended precision when the system is small
    enough (n <= 200) for that to be cheap.
    """
    pts = as_points(points)
    if extended is None:
        extended = len(interp.centers) <= 200
    lam = np.empty(pts.shape[0])
    for s in range(0, pts.shape[0], CHUNK):
        lam[s:s + CHUNK] = np.abs(cardinal_values(interp, pts[s:s + CHUNK], extended)).sum(axis=1)
    return lam


def lebesgue_profile(interp: Interpolant, eval_points, extended: bool | None = None) -> LebesgueProfile:
    if not isinstance(eval_points, NodeSet):
        eval_points = NodeSet(eval_points)
    lam = lebesgue_function(interp, eval_points.points, extended)
    return LebesgueProfile(eval_points=eval_points, lambda_values=lam,
                           lambda_sup=float(lam.max()))


@dataclass(frozen=True, eq=False)
class BoundCheck:
    """Pointwise record of the Lebesgue-function error bound."""

    lhs: np.ndarray
    rhs: np.ndarray
    holds: np.ndarray
    lebesgue: np.ndarray
    nodal_gap: float

    @property
    def violations(self) -> int:
        return int(np.count_nonzero(~self.holds))


def bound_check(data: ScatteredData, kernel: KernelSpec, scaling: ScalingFunction,
                f_true: Callable[[np.ndarray], np.ndarray], eval_points, rtol: float = 1e-8) -> BoundCheck:
    """Compare |f - P_f| with |f - P_fbar| + ||f - fbar||_inf * lambda on a point set.

    Both interpolants use the kernel scaled by ``scaling``; the second one
    interpolates the scaling function's own nodal values.
    """
    pts = as_points(eval_points)
    p_f = fit(data, kernel, scaling)
    fbar_nodes = (ConstantScaling(0.0) if scaling is None else scaling)(data.nodes.points)
    p_fbar = refit(p_f, fbar_nodes)
    truth = np.asarray(f_true(pts), dtype=float).reshape(-1)
    gap = float(np.max(np.abs(data.values - fbar_nodes)))
    lam = lebesgue_function(p_f, pts)
    lhs = np.abs(truth - evaluate(p_f, pts))
    rhs = np.abs(truth - evaluate(p_fbar, pts)) + gap * lam
    holds = lhs <= rhs + rtol * (1.0 + rhs)
    return BoundCheck(lhs=lhs, rhs=rhs, holds=holds, lebesgue=lam, nodal_gap=gap)


def native_norm_sq(values, interp: Interpolant) -> float:
    """Quadratic form v^T K^{-1} v with the interpolant's Gram matrix."""
    v = np.asarray(values, dtype=float).reshape(-1)
    if v.shape[0] != len(interp.centers):
        raise ValueError("vector length does not match the number of centers")
    w = interp.factor.solve_extended(v, interp.gram_ext)
    return float(max(np.asarray(v, dtype=EXTENDED) @ w, 0.0))


def node_residual(interp: Interpolant) -> float:
    """max_i |P(x_i) - f_i|, evaluated through the scaling function like any other point."""
    return float(np.max(np.abs(evaluate(interp, interp.centers.points) - interp.values)))
