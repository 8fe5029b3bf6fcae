import math

import numpy as np
import pytest

from cdtrade import oracles


def test_simplex_grid():
    g = oracles.simplex_grid(3, 4)
    assert len(g) == 15
    assert np.allclose(g.sum(axis=1), 1.0)


def test_oracle_cd_bsc_capacity():
    # Constant state, no SIT: C(D) is the BSC capacity for any feasible D.
    p = 0.11
    W = np.array([[[1 - p, p]], [[p, 1 - p]]])
    pss_t = np.array([[1.0]])
    out = oracles.oracle_cd(pss_t, W, np.zeros(2, int), np.zeros((1, 1)), [0.0, 1.0], q_step=4)
    cap = 1 + p * math.log2(p) + (1 - p) * math.log2(1 - p)
    assert out == pytest.approx([cap, cap], abs=1e-3)


def test_oracle_c_md_infeasible():
    prior = np.array([0.5, 0.5])
    echo = np.full((2, 2, 2), 0.5)
    down = np.full((2, 2, 2), 0.5)
    assert math.isnan(oracles.oracle_c_md(prior, echo, down, 1 - np.eye(2), 0.1))
    assert oracles.oracle_c_md(prior, echo, down, 1 - np.eye(2), 0.5) == pytest.approx(0.0, abs=1e-12)


def test_oracle_c_mu_noiseless():
    # Y = X1 with the state invisible: one bit for any feasible D.
    chan = np.zeros((2, 2, 2, 2))
    for a in range(2):
        chan[a, :, :, a] = 1.0
    assert oracles.oracle_c_mu(np.array([0.5, 0.5]), chan, 1 - np.eye(2), 0.5) == pytest.approx(1.0)
    assert math.isnan(oracles.oracle_c_mu(np.array([0.5, 0.5]), chan, 1 - np.eye(2), 0.4))


def test_bayes_enumeration_trivial():
    p = np.array([[0.2, 0.1], [0.3, 0.4]])
    # best map: o=0 -> 1, o=1 -> 1
    assert oracles.oracle_bayes_enumeration(p, 1 - np.eye(2)) == pytest.approx(0.3)
