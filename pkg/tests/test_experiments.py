import math

import numpy as np
import pytest

from pumls.experiments import (
    TEST_FUNCTIONS,
    ConvergenceReport,
    LevelError,
    convergence_rates,
    error_metrics,
    eval_test_function,
    franke,
    get_test_function,
    nominal_fill_distance,
    run_convergence,
    run_discontinuity_study,
    sample_points,
)


def test_franke_values():
    # hand expansion at the origin and at (1, 1)
    at0 = 0.75 * math.exp(-2) + 0.75 * math.exp(-1 / 49 - 0.1) + 0.5 * math.exp(-49 / 4 - 9 / 4) - 0.2 * math.exp(-16 - 49)
    assert franke(0.0, 0.0) == pytest.approx(at0, rel=1e-14)
    assert franke(0.5, 0.5) == pytest.approx(0.32576, abs=1e-5)


def test_jump_functions():
    fj = TEST_FUNCTIONS["franke-jump"]
    assert fj(0.5, 0.5) == pytest.approx(franke(0.5, 0.5) + 1)
    assert fj(0.75, 0.5) == pytest.approx(franke(0.75, 0.5) + 1)  # closed disc
    assert fj(0.9, 0.5) == pytest.approx(franke(0.9, 0.5))
    assert eval_test_function("trig-circle", 0.75, 0.5) == pytest.approx(math.sin(0.375))
    assert eval_test_function("exp-circle", 0.5, 0.5) == pytest.approx(math.exp(0.25) + 1)
    assert eval_test_function("mixed-jump", 0.5, 0.5) == 1.0
    x, y = 0.1, 0.2
    assert eval_test_function("mixed-jump", x, y) == pytest.approx(
        -(x + y + 1) * math.cos(4 * x) + math.sin(4 * (x + y)))


def test_distance_to_jump():
    fn = get_test_function("mixed-jump")
    assert fn.distance_to_jump(0.5, 0.5) == pytest.approx(math.sqrt(0.1))
    assert fn.distance_to_jump(0.5 + math.sqrt(0.1), 0.5) == pytest.approx(0.0, abs=1e-15)
    assert np.isinf(get_test_function("franke").distance_to_jump(0.2, 0.2))


def test_unknown_function():
    with pytest.raises(ValueError, match="unknown test function"):
        get_test_function("runge")


def test_error_metrics():
    mae, rmse = error_metrics([0.0, 0.0], [3.0, -4.0])
    assert mae == 4.0
    assert rmse == pytest.approx(2.5 * math.sqrt(2))
    with pytest.raises(ValueError):
        error_metrics([1.0], [1.0, 2.0])


def test_rates():
    assert convergence_rates([1.0, 0.25], [0.2, 0.1]) == [None, pytest.approx(2.0)]
    # a published PU column with halving h
    r = convergence_rates([1.0660e-2, 8.9460e-4], [1.0, 0.5])
    assert r[1] == pytest.approx(3.5748, abs=1e-4)
    with pytest.raises(ValueError, match="strictly decreasing"):
        convergence_rates([1.0, 0.5], [0.1, 0.1])


def test_nominal_h():
    assert nominal_fill_distance(4) == pytest.approx(math.sqrt(2) / 32)


def test_sample_sizes():
    assert len(sample_points("grid", 3)) == 81
    assert len(sample_points("halton", 3)) == 81
    with pytest.raises(ValueError):
        sample_points("sobol", 3)


def test_report_rates_recompute():
    rep = run_convergence("pu", "grid", 2, "w2", [2, 3, 4], eval_resolution=40)
    again = convergence_rates(rep.mae, rep.h)
    for a, b in zip(rep.rate_inf[1:], again[1:]):
        assert abs(a - b) <= 1e-12
    assert rep.N == [25, 81, 289]
    assert rep.rate_inf[0] is None


def test_report_deterministic():
    a = run_convergence("ddpu", "halton", 2, "w2", [3, 4], eval_resolution=30)
    b = run_convergence("ddpu", "halton", 2, "w2", [3, 4], eval_resolution=30)
    assert a.mae == b.mae and a.rmse == b.rmse


def test_report_csv(tmp_path):
    rep = ConvergenceReport([4, 5], [289, 1089], [0.1, 0.05], [1e-2, 1e-3], [1e-3, 1e-4])
    out = tmp_path / "r.csv"
    rep.to_csv(out)
    lines = out.read_text().splitlines()
    assert lines[0] == "level,N,h,mae,rate_inf,rmse,rate_2"
    assert lines[1].endswith(",,0.001,")
    assert float(lines[2].split(",")[4]) == pytest.approx(math.log2(10))


def test_bad_levels():
    with pytest.raises(ValueError):
        run_convergence(levels=[5, 4])


def test_level_error_propagates():
    # a level-1 grid has 9 nodes: too few for a cubic in every ball
    with pytest.raises(LevelError, match="level 1"):
        run_convergence("pu", "grid", 3, "w4", [1, 2], eval_resolution=10)


def test_discontinuity_study_small():
    rep = run_discontinuity_study("pu", "franke-jump", 2, "w2", level=4, eval_resolution=40)
    assert rep.points.shape == (1600, 2)
    assert rep.mask_distance == pytest.approx(3 * nominal_fill_distance(4))
    assert rep.oscillation == rep.overshoot + rep.undershoot
    with pytest.raises(ValueError, match="no discontinuity"):
        run_discontinuity_study("pu", "franke", level=3)


@pytest.mark.slow
def test_jump_study_level6_franke():
    pu = run_discontinuity_study("pu", "franke-jump", 2, "w2", level=6)
    dd = run_discontinuity_study("ddpu", "franke-jump", 2, "w2", level=6)
    # the linear blend rings at the unit jump; the global max sits on the inner plateau,
    # so the ringing shows mostly as undershoot
    assert pu.oscillation > 0.05
    assert dd.oscillation < pu.oscillation
    smooth = run_convergence("ddpu", "grid", 2, "w2", [5, 6]).mae[-1]
    assert dd.far_field_mae <= 10 * smooth
