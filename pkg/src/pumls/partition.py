"""Ball coverings and the partition-of-unity moving least squares operator.

A covering is a family of balls B(c_k, delta) with a common radius.  On
each ball a moving least-squares polynomial p_k is fitted to the nodes
inside the ball, with weights w(shape * ||x - x_i||) centred at the
evaluation point x.  The local values are blended with Shepard weights
theta_k(x) = phi_k(x) / sum_j phi_j(x), phi_k being the kernel centred at
c_k and scaled so that its support is the ball.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from .kernels import (
    DEFAULT_TRUNCATION,
    RadialKernel,
    ScaledWeight,
    effective_support_radius,
    kernel_from_token,
)
from .lsq import NonUnisolventError, solve_weighted_batch
from .pointsets import DomainBox, PointSet, _probe_grid
from .polybasis import MonomialBasis, basis_size

__all__ = [
    "Covering",
    "CoveringReport",
    "PuConfig",
    "UncoveredPointError",
    "UnderfilledSubdomainError",
    "build_covering",
    "covering_from_centers",
    "validate_covering",
    "paper_shape",
    "shepard_weights",
    "local_mls_value",
    "pu_mls_eval",
    "LocalFits",
]

# pairs processed per batched QR call; bounds peak memory
_CHUNK = 8192


class UncoveredPointError(ValueError):
    def __init__(self, count: int = 1):
        super().__init__("uncovered evaluation point" + (f" ({count} points)" if count > 1 else ""))


class UnderfilledSubdomainError(ValueError):
    def __init__(self, k: int, count: int, needed: int):
        super().__init__(f"underfilled subdomain {k}: {count} nodes, need more than {needed}")
        self.k = k


@dataclass(frozen=True)
class Covering:
    centers: np.ndarray
    radius: float
    members: tuple
    per_axis: Optional[int] = None
    _tree: Optional[cKDTree] = field(default=None, repr=False, compare=False)

    @property
    def size(self) -> int:
        return len(self.centers)

    @property
    def counts(self) -> np.ndarray:
        return np.array([len(m) for m in self.members])

    @property
    def tree(self) -> cKDTree:
        if self._tree is None:
            object.__setattr__(self, "_tree", cKDTree(self.centers))
        return self._tree


def covering_from_centers(points: PointSet, centers, radius: float, per_axis=None) -> Covering:
    """Balls of a common radius; member lists hold nodes with ||x_i - c_k|| < radius."""
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    if centers.shape[1] != points.dim:
        raise ValueError("center dimension differs from node dimension")
    if not radius > 0:
        raise ValueError("radius must be positive")
    members = []
    for c, cand in zip(centers, points.tree.query_ball_point(centers, radius)):
        cand = np.array(sorted(cand), dtype=int)
        if cand.size:
            d = np.linalg.norm(points.nodes[cand] - c, axis=1)
            cand = cand[d < radius]
        members.append(cand)
    return Covering(centers, float(radius), tuple(members), per_axis)


def build_covering(points: PointSet, box: DomainBox, degree: Optional[int] = None) -> Covering:
    """Regular covering with floor(N**(1/n) / 2) balls per axis at cell midpoints.

    The radius is the cell diagonal, sqrt(2/M) on the unit square.  When
    ``degree`` is given, every ball must hold more nodes than the
    polynomial space has terms.
    """
    n = len(points)
    if n < 4:
        raise ValueError("need at least 4 nodes to build a covering")
    if box.dim != points.dim:
        raise ValueError("box dimension differs from node dimension")
    per_axis = max(1, int(math.floor(n ** (1.0 / points.dim) / 2.0 + 1e-12)))
    ticks = (np.arange(per_axis) + 0.5) / per_axis
    mesh = np.meshgrid(*([ticks] * points.dim), indexing="ij")
    unit = np.stack([m.ravel() for m in mesh], axis=1)
    centers = box.lower + unit * box.widths
    radius = float(np.linalg.norm(box.widths)) / per_axis
    cov = covering_from_centers(points, centers, radius, per_axis)
    if degree is not None:
        needed = basis_size(points.dim, degree)
        for k, m in enumerate(cov.members):
            if len(m) <= needed:
                raise UnderfilledSubdomainError(k, len(m), needed)
    return cov


@dataclass(frozen=True)
class CoveringReport:
    covered: bool
    min_count: int
    overlap_bound: int
    overlapping: bool
    every_node_assigned: bool
    underfilled: tuple

    @property
    def ok(self) -> bool:
        return self.covered and self.overlapping and self.every_node_assigned and not self.underfilled


def validate_covering(cov: Covering, points: PointSet, box: DomainBox, degree: int,
                      probe_resolution: int = 200) -> CoveringReport:
    probes = _probe_grid(box, probe_resolution)
    mult = np.array([len(h) for h in cov.tree.query_ball_point(probes, cov.radius)])
    counts = cov.counts
    needed = basis_size(points.dim, degree)
    if cov.size > 1:
        d, _ = cov.tree.query(cov.centers, k=2)
        overlapping = bool(np.all(d[:, 1] < 2 * cov.radius))
    else:
        overlapping = True
    assigned = np.zeros(len(points), dtype=bool)
    for m in cov.members:
        assigned[m] = True
    return CoveringReport(
        covered=bool(mult.min() >= 1),
        min_count=int(counts.min()),
        overlap_bound=int(mult.max()),
        overlapping=overlapping,
        every_node_assigned=bool(assigned.all()),
        underfilled=tuple(int(k) for k in np.flatnonzero(counts <= needed)),
    )


def paper_shape(kernel, per_axis: float) -> float:
    """Default MLS weight shape: per_axis / sqrt(2), or sqrt(2) * per_axis for the Gaussian."""
    kernel = kernel_from_token(kernel)
    if kernel is RadialKernel.GAUSSIAN:
        return math.sqrt(2.0) * per_axis
    return per_axis / math.sqrt(2.0)


@dataclass(frozen=True)
class PuConfig:
    """Parameters of the PU-MLS operator.

    ``shape`` scales the moving weights, ``blend_shape`` the Shepard
    weights.  Leaving ``blend_shape`` unset makes each Shepard weight's
    (effective) support coincide with its ball.  ``moving=False`` centres
    the local weights at the ball centre instead of at x (stationary fits).
    """

    degree: int = 2
    kernel: RadialKernel = RadialKernel.WENDLAND2
    shape: Optional[float] = None
    blend_shape: Optional[float] = None
    truncation: float = DEFAULT_TRUNCATION
    moving: bool = True

    def __post_init__(self):
        object.__setattr__(self, "kernel", kernel_from_token(self.kernel))
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")
        if self.shape is not None and not self.shape > 0:
            raise ValueError("shape must be positive")
        if self.blend_shape is not None and not self.blend_shape > 0:
            raise ValueError("blend_shape must be positive")

    def weight(self, cov: Covering) -> ScaledWeight:
        shape = self.shape
        if shape is None:
            # sqrt(2) / radius recovers the balls-per-axis count of the regular covering
            shape = paper_shape(self.kernel, math.sqrt(2.0) / cov.radius)
        return ScaledWeight(self.kernel, shape, self.truncation)

    def blend(self, cov: Covering) -> ScaledWeight:
        shape = self.blend_shape
        if shape is None:
            shape = effective_support_radius(self.kernel, self.truncation) / cov.radius
        return ScaledWeight(self.kernel, shape, self.truncation)


class LocalFits:
    """Per-(covering, data, config) machinery for the local MLS values p_k(x).

    Member lists are padded to a common length so that all (point, ball)
    pairs can be solved in large batches.
    """

    def __init__(self, cov: Covering, config: PuConfig, data: PointSet):
        if data.values is None:
            raise ValueError("data has no values")
        self.cov = cov
        self.config = config
        self.data = data
        self.basis = MonomialBasis(data.dim, config.degree)
        self.weight = config.weight(cov)
        self.blend = config.blend(cov)

        counts = cov.counts
        width = max(int(counts.max()), 1)
        M = cov.size
        self.index = np.zeros((M, width), dtype=int)
        self.mask = np.zeros((M, width), dtype=bool)
        for k, m in enumerate(cov.members):
            self.index[k, : len(m)] = m
            self.mask[k, : len(m)] = True
        nodes = data.nodes[self.index]
        self.local_nodes = np.where(
            self.mask[..., None], (nodes - cov.centers[:, None, :]) / cov.radius, 0.0
        )
        self.design = self.basis(self.local_nodes) * self.mask[..., None]
        self.targets = np.where(self.mask, data.values[self.index], 0.0)
        self._fallback = None
        self._stationary = None

    # unit weights over each ball, used when a moving stencil is rank deficient
    @property
    def fallback(self) -> np.ndarray:
        if self._fallback is None:
            coef, ok = solve_weighted_batch(self.design, self.mask.astype(float), self.targets)
            self._fallback = coef
        return self._fallback

    @property
    def stationary(self) -> np.ndarray:
        if self._stationary is None:
            dist = np.linalg.norm(self.local_nodes, axis=-1) * self.cov.radius
            w = self.weight.of_distance(dist) * self.mask
            coef, ok = solve_weighted_batch(self.design, w, self.targets)
            coef[~ok] = self.fallback[~ok]
            self._stationary = coef
        return self._stationary

    def active_pairs(self, x):
        """All (point, ball) pairs with positive Shepard weight.

        Returns point indices, ball indices and the unnormalized blend
        weights phi_k(x_p).
        """
        r = self.blend.support_radius
        hits = self.cov.tree.query_ball_point(x, r)
        lens = np.fromiter((len(h) for h in hits), dtype=int, count=len(hits))
        pts = np.repeat(np.arange(len(x)), lens)
        subs = np.fromiter((k for h in hits for k in h), dtype=int, count=int(lens.sum()))
        dist = np.linalg.norm(x[pts] - self.cov.centers[subs], axis=1)
        w = self.blend.of_distance(dist)
        keep = w > 0
        return pts[keep], subs[keep], w[keep]

    def local_values(self, x, pts, subs) -> np.ndarray:
        """p_k(x_p) for each pair (pts[i], subs[i])."""
        out = np.empty(len(pts))
        R = self.cov.radius
        for lo in range(0, len(pts), _CHUNK):
            p = pts[lo : lo + _CHUNK]
            k = subs[lo : lo + _CHUNK]
            z = (x[p] - self.cov.centers[k]) / R
            if self.config.moving:
                dist = np.linalg.norm(self.local_nodes[k] - z[:, None, :], axis=-1) * R
                w = self.weight.of_distance(dist) * self.mask[k]
                coef, ok = solve_weighted_batch(self.design[k], w, self.targets[k])
                coef[~ok] = self.fallback[k[~ok]]
            else:
                coef = self.stationary[k]
            out[lo : lo + _CHUNK] = np.einsum("pj,pj->p", self.basis(z), coef)
        if np.any(np.isnan(out)):
            bad = int(subs[np.flatnonzero(np.isnan(out))[0]])
            raise NonUnisolventError(int(self.cov.counts[bad]), self.basis.size)
        return out

    def local_value(self, k: int, x) -> float:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return float(self.local_values(x, np.zeros(1, dtype=int), np.array([k]))[0])

    def blend_sum(self, x, pts, weights) -> np.ndarray:
        return np.bincount(pts, weights=weights, minlength=len(x))

    def combine(self, x, weights, pts, subs) -> np.ndarray:
        total = self.blend_sum(x, pts, weights)
        if np.any(total <= 0):
            raise UncoveredPointError(int(np.sum(total <= 0)))
        vals = self.local_values(x, pts, subs)
        return np.bincount(pts, weights=weights * vals, minlength=len(x)) / total

    def evaluate(self, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        pts, subs, w = self.active_pairs(x)
        return self.combine(x, w, pts, subs)


def _points(x):
    x = np.asarray(x, dtype=float)
    return np.atleast_2d(x), x.ndim == 1


def shepard_weights(cov: Covering, config: PuConfig, x) -> dict:
    """Nonzero theta_k(x) as a {k: weight} mapping for a single point."""
    fits_blend = config.blend(cov)
    x = np.asarray(x, dtype=float)
    hits = cov.tree.query_ball_point(x, fits_blend.support_radius)
    hits = np.array(sorted(hits), dtype=int)
    w = fits_blend.of_distance(np.linalg.norm(cov.centers[hits] - x, axis=1)) if hits.size else np.zeros(0)
    total = w.sum()
    if not total > 0:
        raise UncoveredPointError()
    return {int(k): float(v / total) for k, v in zip(hits, w) if v > 0}


def local_mls_value(cov: Covering, config: PuConfig, k: int, data: PointSet, x) -> float:
    return LocalFits(cov, config, data).local_value(k, x)


def pu_mls_eval(cov: Covering, config: PuConfig, data: PointSet, x, fits: Optional[LocalFits] = None):
    """PU-MLS value at one point (shape (dim,)) or at many (shape (P, dim))."""
    fits = fits or LocalFits(cov, config, data)
    pts, single = _points(x)
    out = fits.evaluate(pts)
    return float(out[0]) if single else out
