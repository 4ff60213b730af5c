import math

import numpy as np
import pytest

import sbpsat


def test_operators_satisfy_sbp_identity():
    ops = sbpsat.build_operators(6, "narrow", 40)
    n = ops["N"] + 1
    B = np.zeros((n, n))
    B[0, 0], B[-1, -1] = -1.0, 1.0
    assert np.abs(ops["Q"] + ops["Q"].T - B).max() < 1e-13
    assert np.allclose(np.diag(ops["H"]) @ ops["D1"], ops["Q"], atol=1e-12)
    assert abs(ops["H"].sum() - 1.0) < 1e-14


def test_wide_q_value():
    ops = sbpsat.build_operators(4, "wide", 32)
    assert abs(ops["q"] * ops["h"] - 48 / 17) < 1e-12


def test_verify_reports_checks():
    passed, checks = sbpsat.verify_sbp(4, "narrow", 32)
    assert passed
    assert checks["Q_plus_QT"][2]


def test_scalar_penalties_dirichlet():
    p = sbpsat.scalar_penalties(1.0, 0.1, 1.0, 0.0, 1.0, 0.0, 2.0, 10.0)
    assert p["mu0"] == pytest.approx(-1.5 - 1.0)
    assert p["nuN"] == pytest.approx(0.1)
    inf = sbpsat.scalar_penalties(0.0, 0.01, 0.0, 1.0, 0.0, 1.0, math.inf, 5.0)
    assert inf["mu0"] == pytest.approx(0.01)


def test_presets():
    assert "ns_wall_system" in sbpsat.preset_names()


def test_run_case_certificate():
    r = sbpsat.run_case("heat_dirichlet_steady", 32, order=4, keep_solution=True)
    assert r["certificate"]["dual_consistent"]
    assert r["certificate"]["verdict"] == "dual_consistent"
    assert r["solution"].shape == (33,)
    assert r["func_errors"][0] < r["sol_error"]


def test_convergence_superconverges():
    rows = sbpsat.convergence_study("heat_dirichlet_steady", [32, 64, 128], order=6, variant="narrow",
                                    omega_mode="q_eps")
    assert rows[0]["sol_order"] is None
    assert rows[-1]["func_orders"][0] > 5.5


def test_omega_sweep_rows():
    rows = sbpsat.omega_sweep("heat_dirichlet_steady", [1.0, 10.0], 32, order=4)
    assert [r["omega"] for r in rows] == [1.0, 10.0]


def test_errors_raise():
    with pytest.raises(sbpsat.SbpsatError, match="GridTooSmall"):
        sbpsat.build_operators(8, "wide", 5)
    with pytest.raises(sbpsat.SbpsatError, match="omega"):
        sbpsat.run_case("heat_dirichlet_steady", 32, omega_mode="sideways")
