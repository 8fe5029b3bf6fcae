import math

import numpy as np
import pytest

from cdtrade.exceptions import InfeasibleError
from cdtrade.gaussian import (GaussianSystem, QGParams, c_qg, c_qg_curve, c_qg_threshold, gaussian_cond_mi,
                              gaussian_cond_var, qg_bc_point, qg_bc_system, qg_d2, qg_mac_point,
                              qg_mac_system, qg_mmse_estimator_coeffs, qg_mmse_monte_carlo, qg_p2p_system)

P = QGParams(5.0, 1.0, 1.0, 0.3)


def test_params_validation():
    with pytest.raises(ValueError):
        QGParams(-1, 1, 1)
    with pytest.raises(ValueError):
        QGParams(1, 0, 1)
    with pytest.raises(ValueError):
        QGParams(1, 1, 1, float("nan"))
    assert QGParams(1, 1, 1, math.inf).N_T == math.inf


def test_scalar_awgn_mi():
    sys = GaussianSystem.from_linear({"X": 3.0, "Z": 1.0}, {"Y": {"X": 1, "Z": 1}})
    assert gaussian_cond_mi(sys, "X", "Y") == pytest.approx(0.5 * math.log2(4.0))
    assert gaussian_cond_var(sys, "X", "Y") == pytest.approx(3.0 / 4.0)


def test_rank_drop_gives_inf():
    sys = GaussianSystem.from_linear({"X": 1.0}, {"Y": {"X": 2.0}})
    assert gaussian_cond_mi(sys, "X", "Y") == math.inf


def test_not_psd_rejected():
    with pytest.raises(ValueError):
        GaussianSystem(("A", "B"), [[1.0, 2.0], [2.0, 1.0]])


def test_threshold_is_min_mmse():
    # With a noiseless description the error floor is Var(S | S_T, S + W).
    sys = qg_p2p_system(P, 0.0)
    floor = gaussian_cond_var(sys, "S", ("ST", "SW"))
    assert c_qg_threshold(QGParams(P.P, P.Q, P.N, P.N_T)) >= floor - 1e-12
    with pytest.raises(InfeasibleError):
        c_qg(0.5 * c_qg_threshold(P), P)


def test_saturation_at_capacity():
    cap = 0.5 * math.log2(1 + P.P / (P.Q + P.N))
    assert c_qg(P.Q * P.N / (P.Q + P.N), P) == pytest.approx(cap)
    assert c_qg(10.0, P) == pytest.approx(cap)


def test_curve_monotone_and_nan_below_threshold():
    grid = np.linspace(0.01, 1.0, 100)
    vals = c_qg_curve(grid, P)
    th = c_qg_threshold(P)
    assert np.all(np.isnan(vals[grid < th * (1 - 1e-9)]))
    ok = vals[~np.isnan(vals)]
    assert np.all(np.diff(ok) >= -1e-12)


def test_perfect_sit_and_no_sit():
    perfect = QGParams(5, 1, 1, 0.0)
    # rate hits zero where the description eats the whole capacity
    assert c_qg_threshold(perfect) == pytest.approx(1 / 7)
    assert c_qg(1 / 7, perfect) == pytest.approx(0.0, abs=1e-12)
    none = QGParams(5, 1, 1, math.inf)
    assert c_qg_threshold(none) == pytest.approx(0.5)
    with pytest.raises(InfeasibleError):
        qg_d2(0.6, none)


@pytest.mark.parametrize("D", [0.3, 0.35, 0.4, 0.45])
def test_qg_d2_reaches_target(D):
    d2 = qg_d2(D, P)
    sys = qg_p2p_system(P, d2)
    assert gaussian_cond_var(sys, "S", ("V1", "SW")) == pytest.approx(D, rel=1e-10)


def test_qg_d2_two_descriptions():
    assert qg_d2(0.35, P, n_descriptions=2) == pytest.approx(1.7333, abs=5e-4)
    d2 = qg_d2(0.35, P, n_descriptions=2)
    sys = qg_p2p_system(P, d2, n_descriptions=2)
    assert gaussian_cond_var(sys, "S", ("V1", "V2", "SW")) == pytest.approx(0.35, rel=1e-10)


def test_qg_d2_no_description_needed():
    with pytest.raises(InfeasibleError):
        qg_d2(0.5, P)


def test_estimator_coeffs_match_monte_carlo():
    d2 = qg_d2(0.4, P)
    mean, se = qg_mmse_monte_carlo(P, d2, 400_000, seed=1)
    assert abs(mean - 0.4) < 5 * se
    a_v, a_y = qg_mmse_estimator_coeffs(P, math.inf)
    assert (a_v, a_y) == (0.0, 0.5)


def test_bc_point_orderings():
    pt = qg_bc_point(qg_bc_system(5, 1, 1, 1, 0.3, 0.4, 1.0, 3.0))
    assert pt["R1_seq"] <= pt["R1_sim"] + 1e-12
    assert pt["R2_seq"] <= pt["R2_sim"] + 1e-12
    assert pt["R1_sim"] - pt["R1_seq"] == pytest.approx(pt["gap"], abs=1e-12)
    assert pt["D2"] >= pt["D1"] - 1e-12


def test_mac_point_no_description():
    pt = qg_mac_point(qg_mac_system(5, 5, 1, 1, 0.3, math.inf, math.inf, 0.0, 0.0))
    # Independent inputs, nothing to describe: plain Gaussian MAC sum rate.
    assert pt["sum_b"] == pytest.approx(0.5 * math.log2(1 + 10 / 2))
