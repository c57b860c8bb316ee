import math

import numpy as np
import pytest

from conftest import normal_equation_fit
from pumls.experiments import franke
from pumls.kernels import ScaledWeight, evaluate
from pumls.lsq import NonUnisolventError
from pumls.partition import (
    LocalFits,
    PuConfig,
    UncoveredPointError,
    UnderfilledSubdomainError,
    build_covering,
    covering_from_centers,
    local_mls_value,
    paper_shape,
    pu_mls_eval,
    shepard_weights,
    validate_covering,
)
from pumls.pointsets import PointSet, halton_points, uniform_grid, unit_box
from pumls.polybasis import MonomialBasis, design_matrix


class TestCovering:
    def test_level4_grid(self, box2):
        cov = build_covering(uniform_grid(4), box2)
        assert cov.per_axis == 8 and cov.size == 64
        assert cov.radius == pytest.approx(math.sqrt(2) / 8)
        np.testing.assert_allclose(cov.centers[0], [1 / 16, 1 / 16])
        np.testing.assert_allclose(cov.centers[-1], [15 / 16, 15 / 16])

    def test_four_nodes_single_ball(self, box2):
        cov = build_covering(PointSet([[0, 0], [1, 0], [0, 1], [1, 1]]), box2)
        assert cov.size == 1
        np.testing.assert_allclose(cov.centers, [[0.5, 0.5]])
        assert cov.radius == pytest.approx(math.sqrt(2))

    def test_too_few_nodes(self, box2):
        with pytest.raises(ValueError):
            build_covering(PointSet([[0, 0], [1, 1], [0, 1]]), box2)

    def test_members_brute(self, box2):
        pts = halton_points(300, 2)
        cov = build_covering(pts, box2)
        for c, m in zip(cov.centers, cov.members):
            brute = np.flatnonzero(np.linalg.norm(pts.nodes - c, axis=1) < cov.radius)
            np.testing.assert_array_equal(m, brute)

    @pytest.mark.parametrize("level", [3, 4, 5])
    def test_report(self, box2, level):
        pts = uniform_grid(level)
        cov = build_covering(pts, box2, degree=2)
        rep = validate_covering(cov, pts, box2, degree=2)
        assert rep.ok
        assert rep.overlap_bound <= 9

    def test_underfilled(self, box2):
        pts = PointSet([[0.01, 0.01], [0.02, 0.03], [0.99, 0.99], [0.98, 0.97], [0.5, 0.5]])
        with pytest.raises(UnderfilledSubdomainError):
            build_covering(pts, box2, degree=3)


def test_paper_shape():
    assert paper_shape("w2", 8) == pytest.approx(8 / math.sqrt(2))
    assert paper_shape("g", 8) == pytest.approx(8 * math.sqrt(2))


@pytest.fixture(scope="module")
def setup():
    data = uniform_grid(4).with_values(franke)
    cov = build_covering(data, unit_box(2))
    return data, cov


def test_shepard_partition_of_unity(setup, rng):
    _, cov = setup
    cfg = PuConfig()
    for x in rng.random((50, 2)):
        th = shepard_weights(cov, cfg, x)
        assert sum(th.values()) == pytest.approx(1.0, abs=1e-14)
        assert all(0 < v <= 1 for v in th.values())
        # support of each theta_k lies inside its ball
        for k in th:
            assert np.linalg.norm(cov.centers[k] - x) < cov.radius


def test_shepard_brute(setup):
    _, cov = setup
    x = np.array([0.3, 0.71])
    phi = evaluate("w2", np.linalg.norm(cov.centers - x, axis=1) / cov.radius)
    th = shepard_weights(cov, PuConfig(), x)
    for k, v in th.items():
        assert v == pytest.approx(phi[k] / phi.sum(), rel=1e-12)
    assert len(th) == np.count_nonzero(phi)


def _brute_pu(cov, data, x, degree, kernel):
    """PU-MLS assembled from global-coordinate normal equations."""
    cfg = PuConfig(degree=degree, kernel=kernel)
    shape = paper_shape(kernel, cov.per_axis)
    basis = MonomialBasis(2, degree)
    th = shepard_weights(cov, cfg, x)
    total = 0.0
    for k, t in th.items():
        m = cov.members[k]
        nodes = data.nodes[m]
        w = evaluate(kernel, shape * np.linalg.norm(nodes - x, axis=1))
        w[w <= 1e-10] = 0.0
        E = design_matrix(basis, nodes, center=cov.centers[k], scale=cov.radius)
        c = normal_equation_fit(E, w, data.values[m])
        total += t * (design_matrix(basis, [x], cov.centers[k], cov.radius)[0] @ c)
    return total


@pytest.mark.parametrize("kernel", ["w2", "w4", "m2"])
def test_matches_brute_oracle(setup, kernel, rng):
    data, cov = setup
    x = rng.random((6, 2)) * 0.8 + 0.1
    got = pu_mls_eval(cov, PuConfig(kernel=kernel), data, x)
    want = [_brute_pu(cov, data, p, 2, kernel) for p in x]
    np.testing.assert_allclose(got, want, rtol=1e-8)


def test_scalar_and_array_forms(setup):
    data, cov = setup
    cfg = PuConfig()
    one = pu_mls_eval(cov, cfg, data, [0.4, 0.4])
    assert isinstance(one, float)
    arr = pu_mls_eval(cov, cfg, data, [[0.4, 0.4]])
    assert arr.shape == (1,) and arr[0] == one


@pytest.mark.parametrize("degree", [1, 2, 3])
@pytest.mark.parametrize("moving", [True, False])
def test_polynomial_reproduction(degree, moving, rng):
    basis = MonomialBasis(2, degree)
    c = rng.standard_normal(basis.size)
    data = uniform_grid(5).with_values(lambda x, y: basis(np.stack([x, y], -1)) @ c)
    cov = build_covering(data, unit_box(2))
    x = rng.random((200, 2))
    got = pu_mls_eval(cov, PuConfig(degree=degree, kernel="w4", moving=moving), data, x)
    np.testing.assert_allclose(got, basis(x) @ c, atol=1e-9)


def test_convex_combination_of_local_values(setup, rng):
    data, cov = setup
    cfg = PuConfig()
    x = rng.random(2)
    th = shepard_weights(cov, cfg, x)
    locs = [local_mls_value(cov, cfg, k, data, x) for k in th]
    val = pu_mls_eval(cov, cfg, data, x)
    assert min(locs) - 1e-14 <= val <= max(locs) + 1e-14
    assert val == pytest.approx(sum(t * v for t, v in zip(th.values(), locs)))


def test_continuity(setup):
    data, cov = setup
    cfg = PuConfig()
    fits = LocalFits(cov, cfg, data)
    s = np.linspace(0, 1, 2001)
    line = np.column_stack([s, 0.37 + 0 * s])
    v = fits.evaluate(line)
    # C^2 weights: first differences scale like the step
    assert np.max(np.abs(np.diff(v))) < 5 * 1e-3 * np.max(np.abs(np.gradient(v, s)))


def test_uncovered_point(setup):
    data, cov = setup
    with pytest.raises(UncoveredPointError):
        pu_mls_eval(cov, PuConfig(), data, [3.0, 3.0])


def test_nonunisolvent_local_stencil():
    # every node on a line: no ball can determine a quadratic
    s = np.linspace(0, 1, 30)
    data = PointSet(np.column_stack([s, s]), s)
    cov = covering_from_centers(data, [[0.5, 0.5]], 1.0)
    with pytest.raises(NonUnisolventError):
        pu_mls_eval(cov, PuConfig(degree=2), data, [0.5, 0.5])


def test_requires_values(setup):
    _, cov = setup
    with pytest.raises(ValueError):
        LocalFits(cov, PuConfig(), uniform_grid(4))


def test_weight_shape_default(setup):
    _, cov = setup
    assert PuConfig().weight(cov) == ScaledWeight("w2", 8 / math.sqrt(2))
    assert PuConfig().blend(cov).support_radius == pytest.approx(cov.radius)
