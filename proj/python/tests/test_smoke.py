import math
from pathlib import Path

import numpy as np
import pytest

import osglith as osg

CONFIGS = Path(__file__).resolve().parents[2] / "configs"


def test_vacuum_normalization():
    state = osg.product_state(osg.fock(0, 0), osg.fock(0, 0))
    grid = osg.momentum_distribution(state, osg.AtomPrep.ground(), osg.SimParams(lambda_=4.0),
                                     osg.GridSpec(512, 64, 60.0))
    assert grid.W.shape == (512, 64)
    assert np.all(grid.W >= 0)
    assert grid.integral == pytest.approx(1.0, abs=1e-3)


def test_reference_plan_and_round_trip():
    plan = osg.plan_fields(osg.LithTarget(20.0, math.pi / 4), 4.0, 1.0, 1.0)
    assert plan.abs_alpha == pytest.approx(9.06, abs=5e-3)
    back = osg.predict_deflection(plan.mean_a, plan.mean_b, plan.sign_a, plan.sign_b, 4.0)
    assert back.p == pytest.approx(20.0, abs=1e-9)
    assert back.phi == pytest.approx(math.pi / 4, abs=1e-9)


def test_infeasible_squeeze_raises_with_kind():
    with pytest.raises(osg.OsgError) as info:
        osg.plan_fields(osg.LithTarget(4.0, math.pi / 4), 4.0, 1.0, 1.0)
    assert info.value.kind == "infeasible-squeeze"


def test_squeezed_mean_photon():
    mode = osg.squeezed_coherent(9.06j, 1.0, math.pi, 80)
    assert mode.mean_photon == pytest.approx(12.49, abs=0.01)


def test_grid_file_round_trip(tmp_path):
    state = osg.product_state(osg.coherent(1j, 12), osg.fock(0, 0))
    grid = osg.momentum_distribution(state, osg.AtomPrep.from_phase(math.pi / 2), osg.SimParams(),
                                     osg.GridSpec(64, 32, 0.0), threads=2)
    path = tmp_path / "g.bin"
    osg.write_grid_bin(path, grid)
    again = osg.read_grid_bin(path)
    assert np.array_equal(grid.W, again.W)
    peak = osg.locate_peak(grid)
    assert peak.p > 2.0


def test_simulate_config_and_quadrature():
    grid = osg.simulate_config(CONFIGS / "vacuum.json")
    assert grid.integral == pytest.approx(grid.captured_weight, abs=1e-3)
    result = osg.quadrature_suite(osg.SimParams(), n_max=2, points=3)
    assert result.passed and result.max_error < 1e-6
