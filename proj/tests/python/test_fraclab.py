import math

import numpy as np
import pytest

import fraclab


def test_normalization_half():
    r = fraclab.normalization_constant(1, 0.5)
    assert abs(r["value"] - 1.0 / math.pi) < 1e-8
    assert abs(r["ratio"] - 0.5) < 1e-8


def test_solve_matches_baseline_shape():
    r = fraclab.solve(0.5, dirichlet=[(-math.inf, -1.0), (1.0, math.inf)], h=0.04)
    assert r["converged"]
    assert 1.15 < r["lambda1"] < 1.17
    assert r["x"].shape == r["u"].shape
    assert np.all(r["u"] >= -1e-12)


def test_fixed_neumann_interval_lowers_eigenvalue():
    full = fraclab.solve(0.5, neumann=[], h=0.05)["lambda1"]
    mixed = fraclab.solve(0.5, neumann=[(1.0, 2.0)], h=0.05)["lambda1"]
    assert mixed < 0.95 * full


def test_run_config_records():
    cfg = {
        "schema": 1,
        "name": "py",
        "order": {"N": 1, "s": 0.5},
        "omega": [-1, 1],
        "family": {"kind": "traveling_ball", "length": 1, "base": 1, "ratio": 2, "k": [0, 1, 2]},
        "discretization": {"h": 0.1, "L": 8},
    }
    recs = fraclab.run_config(cfg, jobs=2)
    assert [r["k"] for r in recs] == [0, 1, 2]
    assert all(r["error"] is None for r in recs)
    gaps = [r["gap"] for r in recs]
    assert gaps[0] > gaps[1] > gaps[2] > 0


def test_bad_config_raises():
    with pytest.raises(fraclab.FraclabError, match="ConfigError"):
        fraclab.run_config({"schema": 1, "bogus": 1})


def test_analytic_helpers():
    assert fraclab.dini_power(1.0, 0.5) == pytest.approx(2.0, abs=1e-9)
    assert fraclab.dini_power(0.5, 1.0) is None
    lhs, rhs = fraclab.indicator_identity([(0.0, 1.0)], 0.5)
    assert lhs == pytest.approx(8.0, abs=1e-6)
    assert rhs == pytest.approx(8.0, abs=1e-6)
    with pytest.raises(fraclab.FraclabError, match="DivergentIntegral"):
        fraclab.e_of_r(0.1, 0.8)


def test_identity_suite_passes():
    assert fraclab.identity_suite(0.3, functions=3)["pass"]
