"""Small dense least-squares and SPD solves.

Weighted fits factor the row-scaled system sqrt(D) E with a QR
decomposition instead of forming (E^T D E)^-1; the minimizer is the same
but the conditioning is the square root of the normal-equation one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .polybasis import MonomialBasis, design_matrix

__all__ = [
    "RANK_TOL",
    "NonUnisolventError",
    "DegenerateStencilError",
    "NotPositiveDefiniteError",
    "WeightedFitProblem",
    "FitResult",
    "solve_weighted",
    "solve_weighted_batch",
    "solve_unweighted_linear",
    "solve_spd",
]

RANK_TOL = 1e-12


class NonUnisolventError(np.linalg.LinAlgError):
    """Weighted stencil does not determine a unique polynomial."""

    def __init__(self, rank: int, size: int):
        super().__init__(f"non-unisolvent weighted stencil (rank {rank} < {size})")
        self.rank = rank
        self.size = size


class DegenerateStencilError(ValueError):
    pass


class NotPositiveDefiniteError(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True)
class WeightedFitProblem:
    design: np.ndarray
    weights: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        design = np.atleast_2d(np.asarray(self.design, dtype=float))
        weights = np.asarray(self.weights, dtype=float).ravel()
        targets = np.asarray(self.targets, dtype=float).ravel()
        n = design.shape[0]
        if weights.shape[0] != n or targets.shape[0] != n:
            raise ValueError("design, weights and targets disagree on the number of rows")
        if np.any(weights < 0):
            raise ValueError("weights must be nonnegative")
        if not (np.all(np.isfinite(design)) and np.all(np.isfinite(weights))
                and np.all(np.isfinite(targets))):
            raise ValueError("non-finite entries in fit problem")
        object.__setattr__(self, "design", design)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "targets", targets)


@dataclass(frozen=True)
class FitResult:
    coefficients: np.ndarray
    residuals: np.ndarray
    condition_estimate: float


def _numeric_rank(singular_values, axis=-1):
    smax = np.max(singular_values, axis=axis, keepdims=True)
    return np.sum(singular_values > RANK_TOL * smax, axis=axis)


def solve_weighted(problem: WeightedFitProblem) -> FitResult:
    """Minimize sum_i w_i (f_i - (E c)_i)^2 over c."""
    E, w, f = problem.design, problem.weights, problem.targets
    J = E.shape[1]
    keep = w > 0
    sw = np.sqrt(w[keep])
    A = E[keep] * sw[:, None]
    if A.shape[0] < J:
        raise NonUnisolventError(A.shape[0], J)
    q, r = np.linalg.qr(A)
    sv = np.linalg.svd(r, compute_uv=False)
    rank = int(_numeric_rank(sv))
    if rank < J:
        raise NonUnisolventError(rank, J)
    coef = scipy.linalg.solve_triangular(r, q.T @ (sw * f[keep]))
    return FitResult(coef, f - E @ coef, float(sv[0] / sv[-1]))


def solve_weighted_batch(design, weights, targets):
    """Solve a stack of weighted fits sharing row count.

    ``design`` is (B, n, J), ``weights`` and ``targets`` are (B, n).
    Returns ``(coefficients, full_rank)`` where ``coefficients`` is (B, J)
    and rows with ``full_rank == False`` are NaN.
    """
    design = np.asarray(design, dtype=float)
    weights = np.asarray(weights, dtype=float)
    targets = np.asarray(targets, dtype=float)
    B, n, J = design.shape
    coef = np.full((B, J), np.nan)
    if B == 0:
        return coef, np.zeros(0, dtype=bool)
    if n < J:
        return coef, np.zeros(B, dtype=bool)
    sw = np.sqrt(weights)
    A = design * sw[..., None]
    q, r = np.linalg.qr(A)
    sv = np.linalg.svd(r, compute_uv=False)
    ok = (sv[:, -1] > RANK_TOL * sv[:, 0]) & (sv[:, 0] > 0)
    if np.any(ok):
        rhs = np.einsum("bnj,bn->bj", q[ok], sw[ok] * targets[ok])
        coef[ok] = np.linalg.solve(r[ok], rhs[..., None])[..., 0]
    return coef, ok


def solve_unweighted_linear(nodes, targets) -> FitResult:
    """Unit-weight degree-1 fit; the residuals feed the smoothness indicator."""
    nodes = np.atleast_2d(np.asarray(nodes, dtype=float))
    targets = np.asarray(targets, dtype=float).ravel()
    n, dim = nodes.shape
    if n < dim + 1:
        raise DegenerateStencilError("degenerate indicator stencil")
    center = nodes.mean(axis=0)
    scale = float(np.max(np.abs(nodes - center))) or 1.0
    E = design_matrix(MonomialBasis(dim, 1), nodes, center, scale)
    try:
        local = solve_weighted(WeightedFitProblem(E, np.ones(n), targets))
    except NonUnisolventError:
        raise DegenerateStencilError("degenerate indicator stencil") from None
    # back to global coordinates: p(x) = c0 + c . (x - center) / scale
    slope = local.coefficients[1:] / scale
    coef = np.concatenate([[local.coefficients[0] - slope @ center], slope])
    return FitResult(coef, local.residuals, local.condition_estimate)


def solve_spd(matrix, rhs) -> np.ndarray:
    """Cholesky solve of a symmetric positive definite system."""
    A = np.asarray(matrix, dtype=float)
    b = np.asarray(rhs, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    if not np.allclose(A, A.T, rtol=0, atol=1e-14 * max(1.0, np.abs(A).max())):
        raise ValueError("matrix is not symmetric")
    try:
        factor = scipy.linalg.cho_factor(A, lower=True, check_finite=True)
    except np.linalg.LinAlgError:
        raise NotPositiveDefiniteError("kernel matrix not positive definite") from None
    c = scipy.linalg.cho_solve(factor, b)
    resid = np.linalg.norm(A @ c - b)
    if resid > 1e-8 * np.linalg.norm(A, 2) * max(np.linalg.norm(c), np.finfo(float).tiny):
        raise NotPositiveDefiniteError("kernel matrix not positive definite")
    return c
