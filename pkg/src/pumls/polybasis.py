"""Monomial bases of Pi_m(R^n) and their evaluation / design matrices."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

__all__ = ["MonomialBasis", "basis_size", "evaluate_basis", "design_matrix"]


def basis_size(dim: int, degree: int) -> int:
    return comb(degree + dim, dim)


@lru_cache(maxsize=None)
def _graded_lex(dim: int, degree: int) -> tuple:
    out = []
    for total in range(degree + 1):
        block = [
            alpha
            for alpha in itertools.product(range(total + 1), repeat=dim)
            if sum(alpha) == total
        ]
        out.extend(sorted(block, reverse=True))
    return tuple(out)


@dataclass(frozen=True)
class MonomialBasis:
    """Monomials x^alpha with |alpha| <= degree in graded lexicographic order.

    For dim=2, degree=2 the order is 1, x, y, x^2, xy, y^2.
    """

    dim: int
    degree: int

    def __post_init__(self):
        if self.dim < 1 or self.degree < 0:
            raise ValueError("need dim >= 1 and degree >= 0")

    @property
    def exponents(self) -> np.ndarray:
        return np.array(_graded_lex(self.dim, self.degree), dtype=int).reshape(-1, self.dim)

    @property
    def size(self) -> int:
        return basis_size(self.dim, self.degree)

    def __len__(self) -> int:
        return self.size

    def __call__(self, x) -> np.ndarray:
        """Evaluate all monomials at points ``x`` of shape (..., dim) -> (..., J)."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {x.shape[-1]}")
        # powers[..., d, p] = x_d ** p
        powers = x[..., None] ** np.arange(self.degree + 1)
        exps = self.exponents
        out = np.ones(x.shape[:-1] + (len(exps),))
        for d in range(self.dim):
            out *= powers[..., d, exps[:, d]]
        return out


def evaluate_basis(basis: MonomialBasis, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("evaluate_basis expects a single point")
    return basis(x)


def design_matrix(basis: MonomialBasis, points, center=None, scale: float = 1.0) -> np.ndarray:
    """E[i, j] = p_j(x_i), optionally in local coordinates (x - center) / scale.

    ``points`` may be a PointSet or an (N, dim) array.
    """
    nodes = getattr(points, "nodes", points)
    nodes = np.atleast_2d(np.asarray(nodes, dtype=float))
    if nodes.shape[1] != basis.dim:
        raise ValueError(f"point dimension {nodes.shape[1]} != basis dimension {basis.dim}")
    if center is not None:
        nodes = (nodes - np.asarray(center, dtype=float)) / scale
    return basis(nodes)
