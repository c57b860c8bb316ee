"""Test functions, error metrics, convergence studies and jump studies on [0, 1]^2."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .ddpu import DDPUFits, NonlinearConfig, compute_indicators
from .partition import LocalFits, PuConfig, build_covering
from .pointsets import (
    PointSet,
    eval_grid,
    fill_distance,
    halton_points,
    uniform_grid,
    unit_box,
)

__all__ = [
    "TestFunction",
    "TEST_FUNCTIONS",
    "franke",
    "eval_test_function",
    "error_metrics",
    "convergence_rates",
    "ConvergenceReport",
    "DiscontinuityReport",
    "LevelError",
    "sample_points",
    "nominal_fill_distance",
    "make_operator",
    "run_convergence",
    "run_discontinuity_study",
]

CENTER = (0.5, 0.5)


def franke(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return (
        0.75 * np.exp(-((9 * x - 2) ** 2) / 4 - (9 * y - 2) ** 2 / 4)
        + 0.75 * np.exp(-((9 * x + 1) ** 2) / 49 - (9 * y + 1) / 10)
        + 0.5 * np.exp(-((9 * x - 7) ** 2) / 4 - (9 * y - 3) ** 2 / 4)
        - 0.2 * np.exp(-((9 * x - 4) ** 2) - (9 * y - 7) ** 2)
    )


def _r2(x, y):
    return (np.asarray(x, dtype=float) - CENTER[0]) ** 2 + (np.asarray(y, dtype=float) - CENTER[1]) ** 2


@dataclass(frozen=True)
class TestFunction:
    """A smooth or piecewise smooth function on [0, 1]^2.

    Piecewise functions are ``inner`` inside the circle about (0.5, 0.5)
    and ``outer`` outside; ``inside(x, y)`` is the exact region predicate
    and ``jump_radius`` the circle radius.
    """

    __test__ = False

    tag: str
    outer: Callable
    inner: Optional[Callable] = None
    inside: Optional[Callable] = None
    jump_radius: Optional[float] = None

    @property
    def has_jump(self) -> bool:
        return self.inner is not None

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if not self.has_jump:
            return self.outer(x, y)
        return np.where(self.inside(x, y), self.inner(x, y), self.outer(x, y))

    def distance_to_jump(self, x, y):
        if not self.has_jump:
            return np.full(np.broadcast(x, y).shape, np.inf)
        return np.abs(np.sqrt(_r2(x, y)) - self.jump_radius)

    def pieces(self):
        """(piece, selector) pairs: each smooth formula with the region it owns."""
        if not self.has_jump:
            return [(self.outer, lambda x, y: np.ones(np.broadcast(x, y).shape, dtype=bool))]
        return [
            (self.inner, self.inside),
            (self.outer, lambda x, y: ~self.inside(x, y)),
        ]


TEST_FUNCTIONS = {
    "franke": TestFunction("franke", franke),
    "franke-jump": TestFunction(
        "franke-jump",
        outer=franke,
        inner=lambda x, y: franke(x, y) + 1.0,
        inside=lambda x, y: _r2(x, y) <= 0.25**2,
        jump_radius=0.25,
    ),
    "trig-circle": TestFunction(
        "trig-circle",
        outer=lambda x, y: np.sin(x * y),
        inner=lambda x, y: np.cos(x * y),
        inside=lambda x, y: _r2(x, y) < 0.25**2,
        jump_radius=0.25,
    ),
    "exp-circle": TestFunction(
        "exp-circle",
        outer=lambda x, y: y * np.sin(x) + y * np.cos(x),
        inner=lambda x, y: np.exp(x * y) + 1.0,
        inside=lambda x, y: _r2(x, y) < 0.25**2,
        jump_radius=0.25,
    ),
    "mixed-jump": TestFunction(
        "mixed-jump",
        outer=lambda x, y: -(x + y + 1) * np.cos(4 * x) + np.sin(4 * (x + y)),
        inner=lambda x, y: np.exp(-10 * _r2(x, y)),
        inside=lambda x, y: _r2(x, y) < 0.1,
        jump_radius=math.sqrt(0.1),
    ),
}


def get_test_function(tag) -> TestFunction:
    if isinstance(tag, TestFunction):
        return tag
    try:
        return TEST_FUNCTIONS[tag]
    except KeyError:
        raise ValueError(
            f"unknown test function {tag!r}; expected one of {', '.join(TEST_FUNCTIONS)}"
        ) from None


def eval_test_function(tag, x, y):
    out = get_test_function(tag)(x, y)
    return float(out) if np.ndim(out) == 0 else out


def error_metrics(exact, approx):
    """(max abs error, root-mean-square error over all points)."""
    exact = np.asarray(exact, dtype=float).ravel()
    approx = np.asarray(approx, dtype=float).ravel()
    if exact.shape != approx.shape:
        raise ValueError(f"length mismatch: {exact.size} vs {approx.size}")
    if exact.size == 0:
        raise ValueError("no evaluation points")
    e = np.abs(exact - approx)
    return float(e.max()), float(np.sqrt(np.mean(e**2)))


def convergence_rates(errors: Sequence[float], h: Sequence[float]) -> list:
    """log(E_{l-1}/E_l) / log(h_{l-1}/h_l); the first entry (and any with a zero error) is None."""
    errors = [float(e) for e in errors]
    h = [float(v) for v in h]
    if len(errors) != len(h):
        raise ValueError("errors and h must have equal length")
    if len(h) < 2:
        raise ValueError("need at least two levels")
    if any(b >= a for a, b in zip(h, h[1:])):
        raise ValueError("fill distances must be strictly decreasing")
    rates: list = [None]
    for (e0, e1), (h0, h1) in zip(zip(errors, errors[1:]), zip(h, h[1:])):
        if e0 <= 0 or e1 <= 0:
            rates.append(None)
        else:
            rates.append(math.log(e0 / e1) / math.log(h0 / h1))
    return rates


class LevelError(RuntimeError):
    def __init__(self, level: int, cause: Exception):
        super().__init__(f"level {level}: {cause}")
        self.level = level


@dataclass
class ConvergenceReport:
    levels: list
    N: list
    h: list
    mae: list
    rmse: list
    rate_inf: list = field(default_factory=list)
    rate_2: list = field(default_factory=list)

    def __post_init__(self):
        if len(self.levels) >= 2:
            self.rate_inf = convergence_rates(self.mae, self.h)
            self.rate_2 = convergence_rates(self.rmse, self.h)
        else:
            self.rate_inf = [None] * len(self.levels)
            self.rate_2 = [None] * len(self.levels)

    HEADER = ("level", "N", "h", "mae", "rate_inf", "rmse", "rate_2")

    def rows(self):
        for i, level in enumerate(self.levels):
            yield (level, self.N[i], self.h[i], self.mae[i], self.rate_inf[i],
                   self.rmse[i], self.rate_2[i])

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(self.HEADER)
            for row in self.rows():
                writer.writerow(["" if v is None else v for v in row])

    def __str__(self):
        lines = ["   l      N          h        MAE    r_inf       RMSE      r_2"]
        for level, n, h, mae, ri, rmse, r2 in self.rows():
            fmt = lambda r: "       " if r is None else f"{r:7.4f}"
            lines.append(f"{level:4d} {n:6d} {h:10.4e} {mae:10.4e} {fmt(ri)} {rmse:10.4e} {fmt(r2)}")
        return "\n".join(lines)


def sample_points(sampling: str, level: int) -> PointSet:
    """Grid with spacing 2**-level, or the first (2**level + 1)**2 Halton points."""
    if sampling == "grid":
        return uniform_grid(level, 2)
    if sampling == "halton":
        return halton_points((2**level + 1) ** 2, 2)
    raise ValueError(f"unknown sampling {sampling!r}")


def nominal_fill_distance(level: int) -> float:
    """Half the cell diagonal of the level-l grid."""
    return 2.0**-level * math.sqrt(2.0) / 2.0


def make_operator(method: str, data: PointSet, degree: int = 2, kernel="w2",
                  epsilon: float = 1e-6, t: float = 2.0, shape=None, blend_shape=None,
                  moving: bool = True, indicators=None, cov=None):
    """Build the covering and the evaluation machinery for ``method`` in {pu, ddpu}."""
    cov = cov or build_covering(data, unit_box(data.dim), degree)
    if method == "pu":
        config = PuConfig(degree, kernel, shape, blend_shape, moving=moving)
        return LocalFits(cov, config, data)
    if method == "ddpu":
        config = NonlinearConfig(degree, kernel, shape, blend_shape, moving=moving,
                                 epsilon=epsilon, t=t)
        return DDPUFits(cov, config, data, indicators)
    raise ValueError(f"unknown method {method!r}")


def run_convergence(method: str = "pu", sampling: str = "grid", degree: int = 2,
                    kernel="w2", levels: Sequence[int] = (4, 5, 6, 7),
                    eval_resolution: int = 120, function="franke",
                    epsilon: float = 1e-6, t: float = 2.0,
                    h_mode: str = "nominal") -> ConvergenceReport:
    """MAE / RMSE and observed rates over refinement levels.

    ``h_mode="nominal"`` uses 2**-l * sqrt(2)/2 for both samplings (the
    Halton set at level l has as many points as the level-l grid);
    ``h_mode="probe"`` estimates the fill distance on a probe grid.
    """
    levels = list(levels)
    if not levels:
        raise ValueError("no levels given")
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise ValueError("levels must be strictly increasing (h must decrease)")
    fn = get_test_function(function)
    Z = eval_grid(eval_resolution, 2)
    exact = fn(*Z.T)
    Ns, hs, maes, rmses = [], [], [], []
    for level in levels:
        try:
            pts = sample_points(sampling, level)
            data = pts.with_values(fn)
            op = make_operator(method, data, degree, kernel, epsilon, t)
            approx = op.evaluate(Z)
        except (ValueError, np.linalg.LinAlgError) as exc:
            raise LevelError(level, exc) from exc
        mae, rmse = error_metrics(exact, approx)
        if h_mode == "nominal":
            h = nominal_fill_distance(level)
        elif h_mode == "probe":
            h = fill_distance(pts, unit_box(2), max(200, 8 * 2**level))
        else:
            raise ValueError(f"unknown h_mode {h_mode!r}")
        Ns.append(len(pts))
        hs.append(h)
        maes.append(mae)
        rmses.append(rmse)
    return ConvergenceReport(levels, Ns, hs, maes, rmses)


@dataclass
class DiscontinuityReport:
    """Gridded approximation of a jump function plus Gibbs summaries.

    ``overshoot`` is max(approx) - max(data) and ``undershoot`` is
    min(data) - min(approx); both are negative when the approximation
    stays inside the data range.  ``far_field_mae`` is the MAE over
    evaluation points farther than ``mask_distance`` from the jump curve;
    ``smooth_mae`` is the MAE obtained on the same points when each side's
    smooth formula is approximated on its own, without any jump.
    """

    points: np.ndarray
    exact: np.ndarray
    approx: np.ndarray
    overshoot: float
    undershoot: float
    far_field_mae: float
    smooth_mae: float
    mask_distance: float

    @property
    def abs_error(self) -> np.ndarray:
        return np.abs(self.approx - self.exact)

    @property
    def oscillation(self) -> float:
        return self.overshoot + self.undershoot

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(("x", "y", "exact", "approx", "abs_error"))
            for (x, y), e, a, d in zip(self.points, self.exact, self.approx, self.abs_error):
                writer.writerow((x, y, e, a, d))


def run_discontinuity_study(method: str = "ddpu", function="franke-jump", degree: int = 2,
                            kernel="w2", level: int = 6, eval_resolution: int = 120,
                            sampling: str = "grid", epsilon: float = 1e-6, t: float = 2.0,
                            mask_factor: float = 3.0) -> DiscontinuityReport:
    fn = get_test_function(function)
    if not fn.has_jump:
        raise ValueError(f"{fn.tag} has no discontinuity")
    pts = sample_points(sampling, level)
    Z = eval_grid(eval_resolution, 2)
    exact = fn(*Z.T)
    data = pts.with_values(fn)
    cov = build_covering(data, unit_box(2), degree)
    approx = make_operator(method, data, degree, kernel, epsilon, t, cov=cov).evaluate(Z)

    h = nominal_fill_distance(level)
    far = fn.distance_to_jump(*Z.T) > mask_factor * h
    far_mae = float(np.max(np.abs(approx - exact)[far]))
    smooth = 0.0
    for piece, selector in fn.pieces():
        sel = far & selector(*Z.T)
        if not np.any(sel):
            continue
        ref = make_operator(method, pts.with_values(piece), degree, kernel, epsilon, t, cov=cov)
        err = np.abs(ref.evaluate(Z[sel]) - piece(*Z[sel].T))
        smooth = max(smooth, float(err.max()))
    return DiscontinuityReport(
        points=Z,
        exact=exact,
        approx=approx,
        overshoot=float(approx.max() - data.values.max()),
        undershoot=float(data.values.min() - approx.min()),
        far_field_mae=far_mae,
        smooth_mae=smooth,
        mask_distance=mask_factor * h,
    )
