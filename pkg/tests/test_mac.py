import numpy as np
import pytest

from cdtrade import oracles
from cdtrade.exceptions import InfeasibleError
from cdtrade.mac import (MACScenario, MACVars, c_mu, c_mu_curve, cooperative_embedding, double_usage_example,
                         half_entropy_p, mac_inner_bounds, mac_joint, mac_no_feedback_bounds, mac_outer_sum,
                         mac_region)
from cdtrade.prob import DistortionFn, FiniteDist, Kernel, binary_entropy, cond_mutual_information
from cdtrade.random_systems import random_mac, random_mac_vars

B = (0, 1)


def test_half_entropy_p():
    assert binary_entropy(half_entropy_p()) == pytest.approx(0.5, abs=1e-12)


def test_classical_mac_reduction():
    # No feedback, no state information, no descriptions: the textbook pentagon.
    rng = np.random.default_rng(0)
    for _ in range(10):
        scen = random_mac(rng, feedback=False, state_info=False)
        v = MACVars.independent(scen, rng.dirichlet([1, 1]), rng.dirichlet([1, 1]))
        j = mac_joint(scen, v)
        b = mac_inner_bounds(scen, v, j)
        assert b.raw["R1"] == pytest.approx(cond_mutual_information(j, "X1", "Y", "X2"), abs=1e-12)
        assert b.raw["R2"] == pytest.approx(cond_mutual_information(j, "X2", "Y", "X1"), abs=1e-12)
        assert b.raw["sum_a"] == pytest.approx(cond_mutual_information(j, ("X1", "X2"), "Y"), abs=1e-12)


def test_no_feedback_form_agrees():
    rng = np.random.default_rng(1)
    for _ in range(10):
        scen = random_mac(rng, feedback=False)
        v = random_mac_vars(rng, scen, layers=False)
        j = mac_joint(scen, v)
        b = mac_inner_bounds(scen, v, j)
        nf = mac_no_feedback_bounds(j)
        assert b.raw["R1"] == pytest.approx(nf["R1"], abs=1e-10)
        assert b.raw["R2"] == pytest.approx(nf["R2"], abs=1e-10)
        assert b.raw["sum_a"] == pytest.approx(nf["sum"], abs=1e-10)


def test_embedding_reproduces_distortion_and_dominates():
    rng = np.random.default_rng(2)
    for _ in range(10):
        scen = random_mac(rng)
        v = random_mac_vars(rng, scen)
        inner = mac_inner_bounds(scen, v)
        p, comp = cooperative_embedding(scen, v)
        outer, D = mac_outer_sum(scen, p, comp)
        assert D <= inner.D + 1e-9
        assert min(inner.sum_a, inner.sum_b) <= outer + 1e-9


def test_region_filters_by_distortion():
    rng = np.random.default_rng(3)
    scen = random_mac(rng)
    samples = [random_mac_vars(rng, scen) for _ in range(5)]
    hull, bounds = mac_region(scen, samples)
    assert len(bounds) == 5
    with pytest.raises(InfeasibleError):
        mac_region(scen, samples, D=-1.0)


def test_double_usage():
    res = double_usage_example(n_grid=64)
    a, b, c = res["a"], res["b"], res["c"]
    assert (a.R1, a.R2) == pytest.approx((1.0, 1.0), abs=1e-9)
    assert (c.R1, c.R2, c.D) == pytest.approx((1.0, 0.5, 0.0), abs=1e-9)
    assert res["b_max_R1"] == pytest.approx(0.5, abs=1e-9)
    assert a.D > 0 and c.D == pytest.approx(0.0, abs=1e-12)


def test_c_mu_matches_oracle():
    rng = np.random.default_rng(5)
    for _ in range(4):
        prior = FiniteDist(B, rng.dirichlet([1, 1]))
        chan = Kernel((B, B, B), (B,), rng.dirichlet([1, 1], size=(2, 2, 2)))
        d = DistortionFn.hamming(B)
        for D in (0.2, 0.35, 0.5):
            o = oracles.oracle_c_mu(prior.pmf, chan.table, d.table, D)
            try:
                v = c_mu(prior, chan, d, D)
            except InfeasibleError:
                assert np.isnan(o)
                continue
            assert v == pytest.approx(o, abs=5e-3)


def test_c_mu_point_is_certified():
    rng = np.random.default_rng(6)
    prior = FiniteDist(B, rng.dirichlet([1, 1]))
    chan = Kernel((B, B, B), (B,), rng.dirichlet([1, 1], size=(2, 2, 2)))
    d = DistortionFn.hamming(B)
    res = c_mu(prior, chan, d, 0.45, return_point=True)
    assert res.distortion <= 0.45 + 1e-9
    assert res.pu.sum() == pytest.approx(1.0)
    with pytest.raises(ValueError):
        c_mu(prior, chan, d, 0.45, u_size=1)


def test_c_mu_curve_nondecreasing():
    rng = np.random.default_rng(7)
    prior = FiniteDist(B, rng.dirichlet([1, 1]))
    chan = Kernel((B, B, B), (B,), rng.dirichlet([1, 1], size=(2, 2, 2)))
    vals = c_mu_curve(prior, chan, DistortionFn.hamming(B), np.linspace(0, 0.5, 11))
    ok = vals[~np.isnan(vals)]
    assert np.all(np.diff(ok) >= -1e-12)
