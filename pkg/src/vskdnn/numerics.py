"""Dense SPD solves with an auditable diagonal-jitter fallback."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

JITTER_LADDER = tuple(1e-12 * 10.0**k for k in range(7))
SYMMETRY_TOL = 1e-12
REFINE_STEPS = 3
EXTENDED_REFINE_MAX = 30
EXTENDED = np.longdouble


class SingularSystemError(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True, eq=False)
class SolveReport:
    solution: np.ndarray
    jitter_used: float
    factorization_ok: bool = True


@dataclass(frozen=True, eq=False)
class SPDFactor:
    """Cholesky factor of A + jitter*I, reusable for many right-hand sides."""

    matrix: np.ndarray
    lower: np.ndarray
    jitter: float

    def solve(self, b) -> np.ndarray:
        b = np.asarray(b, dtype=float)
        x = sla.cho_solve((self.lower, True), b, check_finite=False)
        if self.jitter == 0.0:
            return x
        # the factor is of a perturbed matrix: refine against the original one
        for _ in range(REFINE_STEPS):
            x = x + sla.cho_solve((self.lower, True), b - self.matrix @ x, check_finite=False)
        return x

    def solve_extended(self, b, matrix_ext) -> np.ndarray:
        """Mixed-precision refinement: float64 corrections, extended-precision residuals.

        ``matrix_ext`` is the system matrix in extended precision; the result is
        returned in extended precision so that rounding the coefficients does not
        undo the refinement.
        """
        b_ext = np.asarray(b, dtype=EXTENDED)
        x = np.asarray(sla.cho_solve((self.lower, True), np.asarray(b, dtype=float),
                                     check_finite=False), dtype=EXTENDED)
        best = np.inf
        for _ in range(EXTENDED_REFINE_MAX):
            r = b_ext - matrix_ext @ x
            size = float(np.max(np.abs(r))) if r.size else 0.0
            if size == 0.0 or size >= best:
                break
            best = size
            x = x + sla.cho_solve((self.lower, True), r.astype(float), check_finite=False)
        return x


def _check_symmetric(A):
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    asym = np.max(np.abs(A - A.T)) if A.size else 0.0
    if asym > SYMMETRY_TOL:
        raise ValueError(f"matrix is not symmetric (max asymmetry {asym:.3g})")


def spd_factor(A) -> SPDFactor:
    A = np.asarray(A, dtype=float)
    _check_symmetric(A)
    for jitter in (0.0,) + JITTER_LADDER:
        M = A if jitter == 0.0 else A + jitter * np.eye(A.shape[0])
        try:
            L = np.linalg.cholesky(M)
        except np.linalg.LinAlgError:
            continue
        return SPDFactor(matrix=A, lower=L, jitter=jitter)
    raise SingularSystemError(
        f"Cholesky failed for all jitters up to {JITTER_LADDER[-1]:g}")


def spd_solve(A, b) -> SolveReport:
    """Solve A x = b for symmetric positive definite A."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if b.shape[0] != A.shape[0]:
        raise ValueError(f"dimension mismatch: A is {A.shape}, b has {b.shape[0]} rows")
    fac = spd_factor(A)
    return SolveReport(solution=fac.solve(b), jitter_used=fac.jitter)


def residual_bound_ok(A, x, b, rtol=1e-8) -> bool:
    inf = np.inf
    lhs = np.linalg.norm(A @ x - b, inf)
    rhs = rtol * (np.linalg.norm(A, inf) * np.linalg.norm(x, inf) + np.linalg.norm(b, inf))
    return bool(lhs <= rhs)
