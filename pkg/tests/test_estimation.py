import itertools

import numpy as np
import pytest
from sklearn.base import clone

from cdtrade.estimation import (BayesStateEstimator, Estimator, MarkovViolationError, bayes_distortion,
                                bayes_estimator, bern_xor_joint, bern_xor_min_distortion, expected_distortion,
                                markov_reduction_check, monte_carlo_distortion)
from cdtrade.oracles import oracle_bayes_enumeration
from cdtrade.prob import DistortionFn, JointTable

B = (0, 1)


def random_joint(rng, ns, no):
    p = rng.dirichlet(np.ones(ns * no)).reshape(ns, no)
    return JointTable((("S", tuple(range(ns))), ("Y", tuple(range(no)))), p)


@pytest.mark.parametrize("seed", range(25))
def test_bayes_matches_enumeration(seed):
    rng = np.random.default_rng(seed)
    ns, no = rng.integers(2, 4), rng.integers(2, 5)
    j = random_joint(rng, ns, no)
    d = DistortionFn(rng.uniform(0, 1, size=(ns, ns)))
    exact = oracle_bayes_enumeration(j.values, d.table)
    assert bayes_distortion(j, "S", "Y", d) == pytest.approx(exact, abs=1e-12)
    est = bayes_estimator(j, "S", "Y", d)
    assert expected_distortion(j, est, d) == pytest.approx(exact, abs=1e-12)


def test_ties_go_to_lowest_index():
    j = JointTable((("S", B), ("Y", B)), np.full((2, 2), 0.25))
    est = bayes_estimator(j, "S", "Y", DistortionFn.hamming(B))
    assert est.table.tolist() == [0, 0]


def test_zero_mass_observation_uses_prior_choice():
    j = JointTable((("S", B), ("Y", (0, 1, 2))), np.array([[0.1, 0.2, 0.0], [0.4, 0.3, 0.0]]))
    est = bayes_estimator(j, "S", "Y", DistortionFn.hamming(B))
    assert est(2) == 1


def test_no_observation():
    j = JointTable((("S", B),), np.array([0.3, 0.7]))
    assert bayes_distortion(j, "S", (), DistortionFn.hamming(B)) == pytest.approx(0.3)


def test_state_in_obs_rejected():
    j = JointTable((("S", B), ("Y", B)), np.full((2, 2), 0.25))
    with pytest.raises(ValueError):
        bayes_distortion(j, "S", ("S",), DistortionFn.hamming(B))


def test_estimator_validates_table():
    with pytest.raises(ValueError):
        Estimator("S", ("Y",), (B,), B, np.array([0, 2]))


@pytest.mark.parametrize("p1,p2", [(0.05, 0.1), (0.3, 0.2), (0.5, 0.5), (0.0, 0.4)])
def test_bern_xor(p1, p2):
    j = bern_xor_joint(p1, p2)
    assert bayes_distortion(j, "S", "V", DistortionFn.hamming(B)) == pytest.approx(bern_xor_min_distortion(p1, p2))


def test_bern_xor_range():
    with pytest.raises(ValueError):
        bern_xor_min_distortion(0.6, 0.1)


def _markov_chain_joint(rng):
    ps = rng.dirichlet(np.ones(2))
    v_s = rng.dirichlet(np.ones(3), size=2)
    w_v = rng.dirichlet(np.ones(2), size=3)
    vals = ps[:, None, None] * v_s[:, :, None] * w_v[None, :, :]
    return JointTable((("S", B), ("V", (0, 1, 2)), ("W", B)), vals)


def test_markov_reduction():
    rng = np.random.default_rng(3)
    for _ in range(20):
        j = _markov_chain_joint(rng)
        full, reduced = markov_reduction_check(j, "S", "V", "W", DistortionFn.hamming(B))
        assert full == pytest.approx(reduced, abs=1e-12)


def test_markov_violation_raises():
    # W copies S, so W carries information V does not.
    vals = np.zeros((2, 2, 2))
    vals[0, 0, 0] = vals[1, 0, 1] = 0.5
    j = JointTable((("S", B), ("V", B), ("W", B)), vals)
    with pytest.raises(MarkovViolationError):
        markov_reduction_check(j, "S", "V", "W", DistortionFn.hamming(B))


def test_monte_carlo_agrees():
    rng = np.random.default_rng(11)
    j = random_joint(rng, 3, 4)
    d = DistortionFn(rng.uniform(0, 1, size=(3, 3)))
    est = bayes_estimator(j, "S", "Y", d)
    mean, se = monte_carlo_distortion(j, est, d, 200_000, seed=5)
    assert abs(mean - expected_distortion(j, est, d)) < 5 * se
    again = monte_carlo_distortion(j, est, d, 200_000, seed=5)
    assert again == (mean, se)


def test_sklearn_wrapper():
    rng = np.random.default_rng(0)
    j = random_joint(rng, 2, 3)
    d = DistortionFn.hamming(B)
    model = BayesStateEstimator(state="S", obs=("Y",), distortion=d)
    assert set(model.get_params()) == {"state", "obs", "distortion"}
    assert clone(model).get_params()["state"] == "S"
    model.fit(j)
    assert model.score(j) == pytest.approx(-bayes_distortion(j, "S", "Y", d))
    pred = model.predict([[0], [1], [2]])
    assert pred.tolist() == [model.estimator_(y) for y in range(3)]
    with pytest.raises(ValueError):
        model.predict([[0, 1]])


def test_sklearn_wrapper_unfitted():
    from sklearn.exceptions import NotFittedError
    with pytest.raises(NotFittedError):
        BayesStateEstimator(distortion=DistortionFn.hamming(B)).predict([[0]])
    with pytest.raises(ValueError):
        BayesStateEstimator().fit(random_joint(np.random.default_rng(0), 2, 2))
