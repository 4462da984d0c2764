"""Nodes, evaluation grids, synthetic targets and the acetone density surface."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree

from .kernels import NodeSet
from .interp import ScatteredData

BUNDLED_ACETONE = Path(__file__).with_name("resources") / "acetone_standin.csv"


class IngestionError(ValueError):
    pass


def radical_inverse(i: int, base: int) -> float:
    inv, f = 0.0, 1.0 / base
    while i > 0:
        i, digit = divmod(i, base)
        inv += digit * f
        f /= base
    return inv


def halton(n: int, dim: int = 2) -> NodeSet:
    """Unscrambled Halton points with indices 1..n (the origin is skipped)."""
    if n < 1:
        raise ValueError("need at least one point")
    bases = (2, 3, 5, 7, 11, 13)[:dim]
    if len(bases) < dim:
        raise ValueError(f"dimension {dim} not supported")
    pts = np.array([[radical_inverse(i, b) for b in bases] for i in range(1, n + 1)])
    return NodeSet(pts)


def eval_grid(side: int) -> NodeSet:
    """side x side uniform grid on [0,1]^2 including the endpoints, x1 slowest."""
    if side < 2:
        raise ValueError("grid side must be at least 2")
    t = np.linspace(0.0, 1.0, side)
    x1, x2 = np.meshgrid(t, t, indexing="ij")
    return NodeSet(np.column_stack([x1.ravel(), x2.ravel()]))


# -- test functions -----------------------------------------------------------

def f1(X):
    """Franke-type function with the term pairs exactly as printed (two repeated pairs)."""
    x, y = X[:, 0], X[:, 1]
    a = 0.75 * np.exp(-((9 * x - 2) ** 2 + (9 * y - 2) ** 2) / 4)
    b = 0.75 * np.exp(-(9 * x + 1) ** 2 / 49 - (9 * y + 1) / 10)
    return a + b + a + b


def franke_classic(X):
    x, y = X[:, 0], X[:, 1]
    return (0.75 * np.exp(-((9 * x - 2) ** 2) / 4 - (9 * y - 2) ** 2 / 4)
            + 0.75 * np.exp(-((9 * x + 1) ** 2) / 49 - (9 * y + 1) / 10)
            + 0.5 * np.exp(-((9 * x - 7) ** 2) / 4 - (9 * y - 3) ** 2 / 4)
            - 0.2 * np.exp(-((9 * x - 4) ** 2) - (9 * y - 7) ** 2))


def f2(X):
    x, y = X[:, 0], X[:, 1]
    outside = (x - 0.5) ** 2 + (y - 0.5) ** 2 >= 0.08
    # exponent kept as printed: -(x-0.5)^2 + (y-0.5)^2
    return np.where(outside, -np.exp(-(x - 0.5) ** 2 + (y - 0.5) ** 2),
                    np.sin(x) + 4 * np.sin(y))


def f3(X):
    x, y = X[:, 0], X[:, 1]
    s = x + y
    ex = np.exp(x)
    return np.select([y >= ex, y < ex - 1],
                     [np.sin(0.4 * np.pi * s), np.sin(0.7 * np.pi * s) - 4],
                     default=np.sin(np.pi * s) + 4)


TEST_FUNCTIONS = {"f1": f1, "f2": f2, "f3": f3, "franke_classic": franke_classic}


def test_function(name: str, x) -> np.ndarray | float:
    try:
        fn = TEST_FUNCTIONS[name]
    except KeyError:
        raise ValueError(f"unknown test function {name!r}") from None
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        return float(fn(x[None, :])[0])
    return fn(x)


def sample(fn, nodes: NodeSet) -> ScatteredData:
    return ScatteredData(nodes, fn(nodes.points))


# -- acetone ------------------------------------------------------------------

@dataclass(frozen=True)
class AcetoneRecord:
    T: float
    p: float
    rho: float


def load_acetone_csv(path) -> list[AcetoneRecord]:
    """Read a ``T,p,rho`` CSV (header names case-insensitive, extra columns ignored)."""
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise IngestionError(f"{path}: empty file")
    header = [h.strip().lower() for h in rows[0]]
    cols = {}
    for name in ("t", "p", "rho"):
        if name not in header:
            raise IngestionError(f"{path}: missing column {'T' if name == 't' else name}")
        cols[name] = header.index(name)
    records = []
    for lineno, row in enumerate(rows[1:], start=2):
        vals = {}
        for name, j in cols.items():
            label = "T" if name == "t" else name
            if j >= len(row):
                raise IngestionError(f"{path}: row {lineno}: missing value in column {label}")
            try:
                v = float(row[j])
            except ValueError:
                raise IngestionError(
                    f"{path}: row {lineno}: non-numeric value {row[j]!r} in column {label}") from None
            if not np.isfinite(v):
                raise IngestionError(f"{path}: row {lineno}: non-finite value in column {label}")
            vals[name] = v
        records.append(AcetoneRecord(vals["t"], vals["p"], vals["rho"]))
    if not records:
        raise IngestionError(f"{path}: no data rows")
    return records


class DensitySurface:
    """Nearest-measurement density surface on the normalized (T, p) square."""

    def __init__(self, records):
        if len(records) < 3:
            raise IngestionError("need at least 3 records to build a surface")
        raw = np.array([[r.T, r.p, r.rho] for r in records], dtype=float)
        lo, hi = raw.min(axis=0), raw.max(axis=0)
        for j, name in enumerate(("T", "p")):
            if hi[j] == lo[j]:
                raise IngestionError(f"degenerate range in column {name}")
        span = hi - lo
        span[2] = span[2] if span[2] > 0 else 1.0
        scaled = (raw - lo) / span
        self.lo, self.hi = lo, hi
        self.points = scaled[:, :2]
        self.values = scaled[:, 2]
        self._tree = cKDTree(self.points)

    def __call__(self, X):
        _, idx = self._tree.query(np.asarray(X, dtype=float).reshape(-1, 2))
        return self.values[idx]


def build_f4_surface(records) -> DensitySurface:
    return DensitySurface(records)


def resolve_target(name: str, csv_path=None):
    """Map a target id to a callable on (N, 2) arrays."""
    if name == "f4":
        return build_f4_surface(load_acetone_csv(csv_path or BUNDLED_ACETONE))
    if name not in TEST_FUNCTIONS:
        raise ValueError(f"unknown target {name!r}")
    return TEST_FUNCTIONS[name]
