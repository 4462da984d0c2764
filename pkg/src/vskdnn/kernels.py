"""Radial kernels, VSK node augmentation and Gram matrix assembly."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

DUPLICATE_TOL = 1e-14


class KernelError(ValueError):
    pass


class DuplicateNodesError(KernelError):
    """Two nodes closer than ``DUPLICATE_TOL``: the collocation system is ill-posed."""


class Family(str, Enum):
    GAUSSIAN = "gaussian"
    MATERN_C2 = "matern_c2"


@dataclass(frozen=True)
class KernelSpec:
    family: Family
    epsilon: float

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if not (np.isfinite(self.epsilon) and self.epsilon > 0):
            raise KernelError(f"shape parameter must be positive, got {self.epsilon}")

    def __call__(self, r):
        return rbf_eval(self, r)

    def to_dict(self):
        return {"family": self.family.value, "epsilon": self.epsilon}


def rbf_eval(spec: KernelSpec, r):
    """phi(eps * r); accepts scalars or arrays of nonnegative distances.

    Extended-precision (longdouble) input is evaluated in that precision.
    """
    r = np.asarray(r)
    if r.dtype != np.longdouble:
        r = r.astype(float)
    if np.any(r < 0):
        raise KernelError("radial distance must be nonnegative")
    t = spec.epsilon * r
    if spec.family is Family.GAUSSIAN:
        out = np.exp(-t * t)
    else:
        out = np.exp(-t) * (1.0 + t)
    return out if out.ndim else float(out)


@dataclass(frozen=True, eq=False)
class NodeSet:
    """Points in R^d, stored as an (n, d) read-only array."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float, copy=True)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2:
            raise KernelError("points must be an (n, d) array")
        if not np.all(np.isfinite(pts)):
            raise KernelError("node coordinates must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.points.shape[0]

    def min_separation(self) -> float:
        if len(self) < 2:
            return np.inf
        d = distance_matrix(self.points, self.points)
        np.fill_diagonal(d, np.inf)
        return float(d.min())


@dataclass(frozen=True, eq=False)
class AugmentedNodeSet:
    points: np.ndarray
    source: NodeSet
    scaling_values: np.ndarray

    def __len__(self):
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def as_points(nodes) -> np.ndarray:
    if isinstance(nodes, (NodeSet, AugmentedNodeSet)):
        return nodes.points
    pts = np.asarray(nodes, dtype=float)
    return pts[:, None] if pts.ndim == 1 else pts


def augment(nodes, scaling_values) -> AugmentedNodeSet:
    """Append the scaling-function value at each node as an extra coordinate."""
    if not isinstance(nodes, NodeSet):
        nodes = NodeSet(nodes)
    vals = np.asarray(scaling_values, dtype=float).reshape(-1)
    if vals.shape[0] != len(nodes):
        raise KernelError(
            f"got {vals.shape[0]} scaling values for {len(nodes)} nodes")
    if not np.all(np.isfinite(vals)):
        raise KernelError("scaling values must be finite")
    pts = np.column_stack([nodes.points, vals])
    pts.setflags(write=False)
    vals = vals.copy()
    vals.setflags(write=False)
    return AugmentedNodeSet(points=pts, source=nodes, scaling_values=vals)


def distance_matrix(a, b, dtype=float) -> np.ndarray:
    """Exact Euclidean distances between the rows of ``a`` and ``b``."""
    a = np.asarray(a, dtype=dtype)
    b = np.asarray(b, dtype=dtype)
    sq = np.zeros((a.shape[0], b.shape[0]), dtype=dtype)
    for k in range(a.shape[1]):
        diff = a[:, k, None] - b[None, :, k]
        sq += diff * diff
    return np.sqrt(sq)


def check_distinct(points) -> None:
    pts = as_points(points)
    n = pts.shape[0]
    if n < 2:
        return
    d = distance_matrix(pts, pts)
    d[np.diag_indices(n)] = np.inf
    i, k = np.unravel_index(np.argmin(d), d.shape)
    if d[i, k] < DUPLICATE_TOL:
        raise DuplicateNodesError(f"nodes {min(i, k)} and {max(i, k)} coincide")


def gram(spec: KernelSpec, nodes, check: bool = True, dtype=float) -> np.ndarray:
    """Collocation matrix K[i, k] = phi(eps * |x_i - x_k|), exactly symmetric."""
    pts = as_points(nodes)
    if check:
        check_distinct(pts)
    K = rbf_eval(spec, distance_matrix(pts, pts, dtype=dtype))
    K = np.atleast_2d(K)
    # mirror the upper triangle so symmetry holds bitwise
    iu = np.triu_indices(K.shape[0], 1)
    K[(iu[1], iu[0])] = K[iu]
    np.fill_diagonal(K, 1.0)
    return K


def cross_gram(spec: KernelSpec, points, centers, dtype=float) -> np.ndarray:
    """Rectangular kernel matrix between evaluation points and centers."""
    return np.atleast_2d(rbf_eval(spec, distance_matrix(as_points(points), as_points(centers), dtype=dtype)))
