import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from cdtrade import oracles
from cdtrade.exceptions import InfeasibleError
from cdtrade.p2p import (CapacityDistortion, CausalCapacityDistortion, P2PScenario, cd_curve, cd_objective,
                         radar_distortions, radar_min_distortion)
from cdtrade.prob import DistortionFn, FiniteDist, Kernel, mutual_information
from cdtrade.random_systems import random_p2p

B = (0, 1)


@pytest.fixture(scope="module")
def scen():
    return random_p2p(np.random.default_rng(123), 2, 2, 2, 2, feedback=True)


@pytest.fixture(scope="module")
def model(scen):
    return CapacityDistortion(v_size=2, random_state=0).fit(scen)


def _arrays(s):
    return s.pss_t.values, s.chan.table, s.feedback.table, s.distortion.table


def test_matches_grid_oracle(scen, model):
    Ds = [model.d_min_ + f * (model.d_at_capacity_ - model.d_min_) + 1e-9 for f in (0.3, 0.7)]
    got = [model.point(D).rate for D in Ds]
    want = np.maximum(oracles.oracle_cd(*_arrays(scen), Ds), 0.0)
    assert np.max(np.abs(np.array(got) - want)) <= 5e-3


def test_point_is_certified(model):
    D = 0.5 * (model.d_min_ + model.d_at_capacity_)
    pt = model.point(D)
    assert pt.distortion <= D + 1e-9
    assert pt.rate == pytest.approx(max(cd_objective(pt.joint), 0.0), abs=1e-12)


def test_below_dmin_raises(model):
    with pytest.raises(InfeasibleError):
        model.point(model.d_min_ - 1e-3)


def test_curve_is_monotone(scen):
    grid = np.linspace(0.0, 1.0, 9)
    pts, env = cd_curve(scen, grid, v_size=2, n_starts=5)
    assert len(pts) == len(env)
    assert np.all(np.diff(env) >= -1e-12)


def test_no_description_reduces_to_capacity():
    # Without SIT and feedback the best large-D rate is the channel capacity.
    rng = np.random.default_rng(4)
    W = rng.dirichlet([1, 1], size=(2, 2))
    ps = np.array([[0.4], [0.6]])
    scen = P2PScenario.from_arrays(ps, W)
    m = CapacityDistortion(v_size=1, n_starts=5).fit(scen)
    px = oracles.simplex_grid(2, 4096)
    Wxy = np.einsum("st,xsy->xy", ps, W)
    cap = oracles._input_mi_bits(px, Wxy).max()
    assert m.capacity_ == pytest.approx(cap, abs=1e-6)
    pt = m.point(10.0)
    assert pt.rate == pytest.approx(mutual_information(pt.joint, "X", "Y"), abs=1e-9)


def test_causal_dominates_strictly_causal(scen, model):
    cm = CausalCapacityDistortion(v_size=2, n_starts=5, random_state=0).fit(scen)
    for f in (0.5, 1.0):
        D = model.d_min_ + f * (model.d_at_capacity_ - model.d_min_) + 1e-9
        assert cm.point(D).rate >= model.point(D).rate - 5e-3
    assert cm.d_min_ <= model.d_min_ + 1e-6


def test_sklearn_api():
    m = CapacityDistortion(n_starts=3)
    assert m.get_params()["n_starts"] == 3
    assert clone(m).get_params() == m.get_params()
    with pytest.raises(NotFittedError):
        m.point(0.1)
    with pytest.raises(TypeError):
        m.fit("not a scenario")


def test_fit_is_deterministic(scen):
    a = CapacityDistortion(v_size=2, n_starts=4, random_state=5).fit(scen)
    b = CapacityDistortion(v_size=2, n_starts=4, random_state=5).fit(scen)
    assert a.d_min_ == b.d_min_ and a.capacity_ == b.capacity_


def test_radar():
    prior = FiniteDist(B, [0.3, 0.7])
    # x = 1 reveals the state, x = 0 reveals nothing
    table = np.zeros((2, 2, 2))
    table[0, :, 0] = 1.0
    table[1, 0, 0] = table[1, 1, 1] = 1.0
    echo = Kernel((B, B), (B,), table)
    vals = radar_distortions(prior, echo, DistortionFn.hamming(B))
    assert vals.tolist() == pytest.approx([0.3, 0.0])
    x, D = radar_min_distortion(prior, echo, DistortionFn.hamming(B))
    assert (x, D) == (1, 0.0)


def test_radar_tie_lowest_index():
    prior = FiniteDist(B, [0.5, 0.5])
    echo = Kernel((B, B), (B,), np.full((2, 2, 2), 0.5))
    assert radar_min_distortion(prior, echo, DistortionFn.hamming(B))[0] == 0


def test_causal_single_strategy_has_zero_rate(scen):
    cm = CausalCapacityDistortion(u_size=1, v_size=2, n_starts=5).fit(scen)
    assert cm.point(10.0).rate == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        CausalCapacityDistortion(u_size=0).fit(scen)


def test_larger_v_never_hurts(scen):
    small = CapacityDistortion(v_size=1, random_state=1).fit(scen)
    big = CapacityDistortion(v_size=3, random_state=1).fit(scen)
    for D in np.linspace(big.d_min_, big.d_at_capacity_, 4)[1:]:
        r_small = small.point(D).rate if D >= small.d_min_ else 0.0
        assert big.point(D).rate >= r_small - 1e-3


def test_feedback_never_hurts():
    rng = np.random.default_rng(8)
    pss_t = rng.dirichlet(np.ones(4)).reshape(2, 2)
    W = rng.dirichlet(np.ones(2), size=(2, 2))
    none = CapacityDistortion(v_size=2).fit(P2PScenario.from_arrays(pss_t, W))
    full = CapacityDistortion(v_size=2).fit(P2PScenario.from_arrays(pss_t, W, phi=[0, 1]))
    assert full.d_min_ <= none.d_min_ + 1e-6
    for D in np.linspace(none.d_min_, none.d_at_capacity_, 4)[1:]:
        assert full.point(D).rate >= none.point(D).rate - 1e-3


def test_dmin_matches_radar():
    # No SIT, no feedback: the receiver's best distortion is the radar minimum.
    prior = FiniteDist(B, [0.35, 0.65])
    echo_tab = np.array([[[0.8, 0.2], [0.3, 0.7]], [[0.6, 0.4], [0.1, 0.9]]])
    scen = P2PScenario.from_arrays(prior.pmf[:, None], echo_tab)
    _, D_star = radar_min_distortion(prior, Kernel((B, B), (B,), echo_tab), DistortionFn.hamming(B))
    assert CapacityDistortion(v_size=1, n_starts=5).fit(scen).d_min_ == pytest.approx(D_star, abs=1e-6)


def test_dmin_zero_with_perfect_observation():
    W = np.zeros((2, 2, 2))
    for s in range(2):
        W[:, s, s] = 1.0
    scen = P2PScenario.from_arrays(np.array([[0.5], [0.5]]), W)
    assert CapacityDistortion(v_size=1, n_starts=3).fit(scen).d_min_ == pytest.approx(0.0, abs=1e-9)


def test_radar_null_symbol_avoided():
    X = (-1, 0, 1)
    prior = FiniteDist(B, [0.4, 0.6])
    table = np.zeros((3, 2, 2))
    table[1, :, 0] = 1.0  # x = 0 carries nothing
    for i in (0, 2):
        table[i] = [[0.9, 0.1], [0.2, 0.8]]
    x, _ = radar_min_distortion(prior, Kernel((X, B), (B,), table), DistortionFn.hamming(B))
    assert x == -1
