from fractions import Fraction

import numpy as np
import pytest

from pumls.ddpu import (
    DDPUFits,
    IndicatorStencilError,
    NonlinearConfig,
    compute_indicators,
    ddpu_mls_eval,
    nonlinear_weights,
    smoothness_indicator,
    weno_optimal_weights,
)
from pumls.experiments import TEST_FUNCTIONS, franke
from pumls.partition import (
    LocalFits,
    PuConfig,
    UncoveredPointError,
    build_covering,
    covering_from_centers,
    pu_mls_eval,
    shepard_weights,
)
from pumls.pointsets import PointSet, halton_points, uniform_grid, unit_box


CORNERS = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])


def test_indicator_corners():
    # residuals of the best plane for xy are +-1/4
    assert smoothness_indicator(CORNERS, CORNERS.prod(axis=1)) == pytest.approx(0.25)


def test_indicator_affine_zero(rng):
    nodes = rng.random((20, 2))
    assert smoothness_indicator(nodes, 3 - nodes @ [1.0, 2.0]) < 1e-13


def test_indicator_too_small():
    with pytest.raises(IndicatorStencilError, match="too small"):
        smoothness_indicator(CORNERS[:3], [0, 1, 2])


def test_indicator_scales_with_data(rng):
    nodes = rng.random((15, 2))
    f = np.sin(5 * nodes[:, 0]) * nodes[:, 1]
    assert smoothness_indicator(nodes, 7 * f) == pytest.approx(7 * smoothness_indicator(nodes, f))


def test_small_balls_get_infinite_indicator():
    data = PointSet([[0.1, 0.1], [0.12, 0.1], [0.1, 0.13], [0.6, 0.6], [0.62, 0.6],
                     [0.6, 0.63], [0.64, 0.64], [0.66, 0.61]], np.arange(8.0))
    cov = covering_from_centers(data, [[0.1, 0.1], [0.6, 0.6]], 0.2)
    ind = compute_indicators(cov, data)
    assert ind.counts.tolist() == [3, 5]
    assert ind.values[0] == np.inf and np.isfinite(ind.values[1])


@pytest.fixture(scope="module")
def setup():
    data = uniform_grid(4).with_values(franke)
    cov = build_covering(data, unit_box(2))
    return data, cov, compute_indicators(cov, data)


def test_weights_with_equal_indicators_are_shepard(setup, rng):
    _, cov, _ = setup
    cfg = NonlinearConfig()
    flat = np.full(cov.size, 0.3)
    for x in rng.random((20, 2)):
        W = nonlinear_weights(cov, flat, cfg, x)
        th = shepard_weights(cov, cfg, x)
        assert W.keys() == th.keys()
        for k in W:
            assert W[k] == pytest.approx(th[k], rel=1e-12)


def test_weights_brute(setup):
    _, cov, ind = setup
    cfg = NonlinearConfig(epsilon=1e-3, t=1.5)
    x = np.array([0.52, 0.33])
    th = shepard_weights(cov, cfg, x)
    alpha = {k: v / (1e-3 + ind.values[k]) ** 1.5 for k, v in th.items()}
    total = sum(alpha.values())
    W = nonlinear_weights(cov, ind, cfg, x)
    for k in th:
        assert W[k] == pytest.approx(alpha[k] / total, rel=1e-12)
    assert sum(W.values()) == pytest.approx(1.0, abs=1e-14)


def test_ddpu_equals_pu_with_forced_equal_indicators(setup, rng):
    data, cov, _ = setup
    x = rng.random((300, 2))
    pu = pu_mls_eval(cov, PuConfig(), data, x)
    dd = ddpu_mls_eval(cov, np.zeros(cov.size), NonlinearConfig(), data, x)
    np.testing.assert_allclose(dd, pu, rtol=0, atol=1e-12)


def test_weights_scale_covariance(setup):
    # multiplying data by c leaves the weights unchanged when eps scales by c
    data, cov, _ = setup
    x = np.array([0.41, 0.77])
    a = nonlinear_weights(cov, compute_indicators(cov, data), NonlinearConfig(epsilon=1e-6), x)
    scaled = data.with_values(5 * data.values)
    b = nonlinear_weights(cov, compute_indicators(cov, scaled), NonlinearConfig(epsilon=5e-6), x)
    for k in a:
        assert b[k] == pytest.approx(a[k], rel=1e-10)


def test_fits_weights_match_dict(setup):
    data, cov, ind = setup
    cfg = NonlinearConfig()
    fits = DDPUFits(cov, cfg, data, ind)
    x = np.array([[0.2, 0.9]])
    pts, subs, W = fits.weights(x)
    ref = nonlinear_weights(cov, ind, cfg, x[0])
    assert dict(zip(subs.tolist(), W.tolist())) == pytest.approx(ref)


def test_jump_ball_suppressed():
    fn = TEST_FUNCTIONS["franke-jump"]
    data = uniform_grid(6).with_values(fn)
    cov = build_covering(data, unit_box(2))
    ind = compute_indicators(cov, data)
    x = np.array([0.76, 0.5])
    W = nonlinear_weights(cov, ind, NonlinearConfig(), x)
    th = shepard_weights(cov, NonlinearConfig(), x)
    sides = {k: fn.inside(*data.nodes[cov.members[k]].T) for k in W}
    straddle = [k for k, s in sides.items() if s.any() and not s.all()]
    assert straddle
    for k in straddle:
        assert W[k] < 0.1 * th[k]
    assert sum(W[k] for k in straddle) < 0.1


def test_uncovered(setup):
    data, cov, ind = setup
    with pytest.raises(UncoveredPointError):
        nonlinear_weights(cov, ind, NonlinearConfig(), [5.0, 5.0])


def test_config_validation():
    with pytest.raises(ValueError):
        NonlinearConfig(epsilon=0.0)
    with pytest.raises(ValueError):
        NonlinearConfig(t=-1.0)


class TestWeno:
    def test_small_r(self):
        assert weno_optimal_weights(1, exact=True) == [Fraction(1)]
        assert weno_optimal_weights(2, exact=True) == [Fraction(1, 2)] * 2
        assert weno_optimal_weights(3, exact=True) == [Fraction(3, 16), Fraction(5, 8), Fraction(3, 16)]

    @pytest.mark.parametrize("r", range(1, 13))
    def test_sum_and_symmetry(self, r):
        c = weno_optimal_weights(r, exact=True)
        assert sum(c) == 1
        assert c == c[::-1]

    def test_float(self):
        assert weno_optimal_weights(3) == [0.1875, 0.625, 0.1875]

    def test_bad_r(self):
        with pytest.raises(ValueError):
            weno_optimal_weights(0)
