"""Data-dependent partition of unity: Shepard weights rescaled by smoothness.

Each ball gets a smoothness indicator I_k, the mean absolute residual of
an unweighted linear fit to the data inside it.  The blend weights become

    alpha_k(x) = phi_k(x) / (eps + I_k)**t,   W_k = alpha_k / sum_j alpha_j

so balls cut by a jump, where I_k stays O(1), are suppressed relative to
smooth balls, where I_k = O(h^2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional

import numpy as np

from .lsq import solve_unweighted_linear
from .partition import Covering, LocalFits, PuConfig, UncoveredPointError, _points
from .pointsets import PointSet

__all__ = [
    "SmoothnessIndicators",
    "NonlinearConfig",
    "IndicatorStencilError",
    "smoothness_indicator",
    "compute_indicators",
    "nonlinear_weights",
    "ddpu_mls_eval",
    "weno_optimal_weights",
]


class IndicatorStencilError(ValueError):
    pass


@dataclass(frozen=True)
class SmoothnessIndicators:
    """I_k per ball; balls with too few nodes carry +inf and drop out of the blend."""

    values: np.ndarray
    counts: np.ndarray

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class NonlinearConfig(PuConfig):
    epsilon: float = 1e-6
    t: float = 2.0

    def __post_init__(self):
        super().__post_init__()
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if not self.t > 0:
            raise ValueError("t must be positive")


def smoothness_indicator(nodes, targets) -> float:
    """Mean absolute residual of the least-squares linear fit."""
    nodes = np.atleast_2d(np.asarray(nodes, dtype=float))
    if len(nodes) <= 3:
        raise IndicatorStencilError("indicator stencil too small")
    fit = solve_unweighted_linear(nodes, targets)
    return float(np.mean(np.abs(fit.residuals)))


def compute_indicators(cov: Covering, data: PointSet) -> SmoothnessIndicators:
    if data.values is None:
        raise ValueError("data has no values")
    counts = cov.counts
    values = np.full(cov.size, np.inf)
    for k, m in enumerate(cov.members):
        if len(m) > 3:
            values[k] = smoothness_indicator(data.nodes[m], data.values[m])
    return SmoothnessIndicators(values, counts)


def _alpha_scale(indicators, config: NonlinearConfig) -> np.ndarray:
    vals = np.asarray(getattr(indicators, "values", indicators), dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(np.isfinite(vals), (config.epsilon + vals) ** -config.t, 0.0)


def nonlinear_weights(cov: Covering, indicators, config: NonlinearConfig, x) -> dict:
    """Nonzero W_k(x) as a {k: weight} mapping for a single point."""
    blend = config.blend(cov)
    x = np.asarray(x, dtype=float)
    hits = np.array(sorted(cov.tree.query_ball_point(x, blend.support_radius)), dtype=int)
    if hits.size == 0:
        raise UncoveredPointError()
    phi = blend.of_distance(np.linalg.norm(cov.centers[hits] - x, axis=1))
    alpha = phi * _alpha_scale(indicators, config)[hits]
    total = alpha.sum()
    if not total > 0:
        raise UncoveredPointError()
    return {int(k): float(a / total) for k, a in zip(hits, alpha) if a > 0}


class DDPUFits(LocalFits):
    """LocalFits whose blend weights carry the indicator factor."""

    def __init__(self, cov: Covering, config: NonlinearConfig, data: PointSet,
                 indicators=None):
        super().__init__(cov, config, data)
        if indicators is None:
            indicators = compute_indicators(cov, data)
        self.indicators = indicators
        self.scale = _alpha_scale(indicators, config)

    def weights(self, x):
        """(pts, subs, W) for every active pair at points ``x``."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        pts, subs, phi = self.active_pairs(x)
        alpha = phi * self.scale[subs]
        total = self.blend_sum(x, pts, alpha)
        if np.any(total <= 0):
            raise UncoveredPointError(int(np.sum(total <= 0)))
        return pts, subs, alpha / total[pts]

    def evaluate(self, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        pts, subs, phi = self.active_pairs(x)
        keep = self.scale[subs] > 0
        pts, subs, phi = pts[keep], subs[keep], phi[keep]
        return self.combine(x, phi * self.scale[subs], pts, subs)


def ddpu_mls_eval(cov: Covering, indicators, config: NonlinearConfig, data: PointSet, x,
                  fits: Optional[DDPUFits] = None):
    """Data-dependent PU-MLS value at one point or at an (P, dim) array of points."""
    fits = fits or DDPUFits(cov, config, data, indicators)
    pts, single = _points(x)
    out = fits.evaluate(pts)
    return float(out[0]) if single else out


def weno_optimal_weights(r: int, exact: bool = False):
    """Linear WENO weights C_k = binom(2r, 2k+1) / 2**(2r-1), k = 0..r-1.

    With ``exact=True`` the weights are returned as Fractions.
    """
    if r < 1:
        raise ValueError("r must be positive")
    out = [Fraction(comb(2 * r, 2 * k + 1), 2 ** (2 * r - 1)) for k in range(r)]
    return out if exact else [float(c) for c in out]
