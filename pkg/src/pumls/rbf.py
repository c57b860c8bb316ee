"""Global RBF interpolation with a positive definite radial kernel."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist, pdist, squareform

from .kernels import ScaledWeight, evaluate
from .lsq import solve_spd
from .pointsets import PointSet

__all__ = ["RbfInterpolant", "kernel_matrix", "fit_rbf", "eval_rbf"]


def kernel_matrix(weight: ScaledWeight, nodes) -> np.ndarray:
    """A[i, j] = phi(shape * ||x_i - x_j||), built from the upper triangle."""
    nodes = np.atleast_2d(np.asarray(nodes, dtype=float))
    upper = evaluate(weight.kernel, weight.shape * pdist(nodes))
    A = squareform(upper)
    np.fill_diagonal(A, evaluate(weight.kernel, 0.0))
    return A


@dataclass(frozen=True)
class RbfInterpolant:
    weight: ScaledWeight
    centers: PointSet
    coefficients: np.ndarray

    def __call__(self, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if x.shape[1] != self.centers.dim:
            raise ValueError("dimension mismatch")
        r = self.weight.shape * cdist(x, self.centers.nodes)
        return evaluate(self.weight.kernel, r) @ self.coefficients


def fit_rbf(weight: ScaledWeight, data: PointSet) -> RbfInterpolant:
    if data.values is None:
        raise ValueError("data has no values to interpolate")
    coef = solve_spd(kernel_matrix(weight, data.nodes), data.values)
    return RbfInterpolant(weight, data, coef)


def eval_rbf(interp: RbfInterpolant, x) -> float:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("eval_rbf expects a single point; call the interpolant for arrays")
    return float(interp(x)[0])
