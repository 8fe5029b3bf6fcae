import math

import numpy as np
import pytest

from cdtrade import oracles
from cdtrade.bc import (BCScenario, bc_outer, bc_region_sequential, bc_region_simultaneous, binary_bc_example,
                        binary_bc_scenario, binary_bc_vars, c_md, check_degraded)
from cdtrade.exceptions import InfeasibleError
from cdtrade.prob import DistortionFn, FiniteDist, Kernel, binary_entropy, star_convolve
from cdtrade.random_systems import random_bc, random_bc_vars

B = (0, 1)


def test_binary_example_closed_forms():
    res = binary_bc_example(0.05, 0.1, np.linspace(0, 0.5, 21))
    assert res["max_error"] <= 1e-9
    # Scheme B always lets decoder 2 reach p1; scheme A is capped at p2.
    assert np.allclose(res["B"]["D2"], 0.05)
    assert np.all(res["A"]["D2"] <= 0.1 + 1e-12)


def test_binary_scheme_b_point():
    scen = binary_bc_scenario(0.05, 0.1)
    b = bc_region_simultaneous(scen, binary_bc_vars(0.2, "B"))
    p2t = star_convolve(0.05, 0.1)
    assert b.raw["R1"] == pytest.approx(binary_entropy(0.2))
    assert b.raw["R2"] == pytest.approx(1 - binary_entropy(0.2) - binary_entropy(p2t))


def test_binary_validation():
    with pytest.raises(ValueError):
        binary_bc_scenario(0.2, 0.1)
    with pytest.raises(ValueError):
        binary_bc_vars(0.2, "C")


def test_binary_is_physically_degraded():
    assert check_degraded(binary_bc_scenario(0.05, 0.1)).kind == "physical"


def test_random_bc_degraded_and_ordered():
    rng = np.random.default_rng(9)
    for _ in range(30):
        scen = random_bc(rng)
        assert check_degraded(scen).kind == "physical"
        v = random_bc_vars(rng, scen)
        sim = bc_region_simultaneous(scen, v)
        seq = bc_region_sequential(scen, v)
        out = bc_outer(scen, v)
        assert seq.raw["R1"] <= sim.raw["R1"] + 1e-9
        assert seq.raw["R2"] <= sim.raw["R2"] + 1e-9
        assert sim.raw["R2"] <= out.raw["R2"] + 1e-9


def test_statistical_but_not_physical():
    # Y1 and Y2 conditionally independent given (X, S) with a degraded Y2 marginal.
    p = 0.1
    w1 = np.array([[1 - p, p], [p, 1 - p]])
    w2 = np.array([[1 - 0.3, 0.3], [0.3, 1 - 0.3]])
    W = np.zeros((2, 1, 2, 2))
    for x in range(2):
        W[x, 0] = np.outer(w1[x], w2[x])
    scen = BCScenario.from_arrays(np.array([[1.0]]), W)
    assert check_degraded(scen).kind == "statistical"


def test_not_degraded():
    W = np.zeros((2, 1, 2, 2))
    W[0, 0] = np.outer([1.0, 0.0], [0.5, 0.5])
    W[1, 0] = np.outer([1.0, 0.0], [0.0, 1.0])
    scen = BCScenario.from_arrays(np.array([[1.0]]), W)
    assert check_degraded(scen).kind == "none"


def test_c_md_matches_oracle():
    rng = np.random.default_rng(2)
    for _ in range(5):
        prior = FiniteDist(B, rng.dirichlet([1, 1]))
        echo = Kernel((B, B), (B,), rng.dirichlet([1, 1], size=(2, 2)))
        down = Kernel((B, B), ((0, 1, 2),), rng.dirichlet([1, 1, 1], size=(2, 2)))
        d = DistortionFn.hamming(B)
        for D in (0.2, 0.35, 0.5):
            o = oracles.oracle_c_md(prior.pmf, echo.table, down.table, d.table, D)
            if math.isnan(o):
                with pytest.raises(InfeasibleError):
                    c_md(prior, echo, down, d, D)
            else:
                assert c_md(prior, echo, down, d, D) == pytest.approx(o, abs=1e-4)


def test_c_md_returns_budget_feasible_input():
    prior = FiniteDist(B, [0.5, 0.5])
    echo = Kernel((B, B), (B,), np.array([[[0.5, 0.5], [0.5, 0.5]], [[1, 0], [0, 1]]], dtype=float))
    down = Kernel((B, B), (B,), np.array([[[1, 0], [1, 0]], [[0, 1], [0, 1]]], dtype=float))
    val, px = c_md(prior, echo, down, DistortionFn.hamming(B), 0.25, return_input=True)
    # sensing cost is 0.5 P(x=0); budget 0.25 forces P(x=0) <= 1/2
    assert px.pmf[0] == pytest.approx(0.5, abs=1e-6)
    assert val == pytest.approx(1.0, abs=1e-6)


def test_simultaneous_r1_exceeds_outer_r1_on_shared_variables():
    # Pointwise counterexample: the description V2 = U xor X carries information
    # about X given (U, Y1), which only the simultaneous bound credits.
    scen = binary_bc_scenario(0.05, 0.1)
    v = binary_bc_vars(0.2, "B")
    sim, out = bc_region_simultaneous(scen, v), bc_outer(scen, v)
    assert sim.R1 == pytest.approx(binary_entropy(0.2))
    assert out.R1 == pytest.approx(binary_entropy(star_convolve(0.2, 0.05)) - binary_entropy(0.05))
    assert sim.R1 - out.R1 > 0.2
