"""Acceptance suite: every numbered criterion as one or more named checks.

The report body depends only on the seed and level; wall-clock timings are
kept in ``Check.seconds`` and printed separately.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import bc, gaussian, mac, oracles
from .estimation import (bayes_distortion, bern_xor_joint, bern_xor_min_distortion,
                         markov_reduction_check)
from .exceptions import InfeasibleError
from .p2p import CapacityDistortion, CausalCapacityDistortion
from .prob import DistortionFn, FiniteDist, JointTable, Kernel, binary_entropy, get_units, set_units
from .random_systems import random_bc, random_bc_vars, random_mac, random_mac_vars, random_p2p

__all__ = ["Check", "LEVELS", "run_checks", "format_report", "format_timings"]

LEVELS = {
    "fast": {"n_systems": 200, "n_oracle": 4, "n_lemma1": 200, "n_lemma2": 100},
    "full": {"n_systems": 1000, "n_oracle": 20, "n_lemma1": 200, "n_lemma2": 100},
}
SLACK = 1e-6
ORACLE_TOL = 5e-3


@dataclass
class Check:
    criterion: str
    name: str
    tolerance: str
    observed: float
    passed: bool
    seconds: float = field(default=0.0, compare=False)
    note: str = ""

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        obs = "nan" if self.observed is None or math.isnan(self.observed) else f"{self.observed:.6g}"
        extra = f" ({self.note})" if self.note else ""
        return f"[{tag}] {self.criterion} {self.name}: observed={obs} tolerance={self.tolerance}{extra}"


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), stream]))


# ---------------------------------------------------------------------------
# 1. Quadratic-Gaussian curves


def check_qg_curves(seed: int, level: str) -> list[Check]:
    nts = (0.0, 0.3, 1.0)
    grid = np.linspace(0.0, 1.0, 401)
    curves = {nt: gaussian.c_qg_curve(grid, gaussian.QGParams(5, 1, 1, nt)) for nt in nts}
    out = []

    worst = math.inf
    ok_support = True
    for a, b in zip(nts, nts[1:]):
        ca, cb = curves[a], curves[b]
        both = ~np.isnan(ca) & ~np.isnan(cb)
        worst = min(worst, float(np.min(ca[both] - cb[both])))
        # Where the better curve is infeasible the worse one must be too.
        ok_support &= bool(np.all(np.isnan(cb[np.isnan(ca)])))
    out.append(Check("1a", "c_qg ordered N_T=0 >= 0.3 >= 1", "min gap >= -1e-12", worst,
                     worst >= -1e-12 and ok_support))

    mono, conc = math.inf, -math.inf
    for nt in nts:
        c = curves[nt][~np.isnan(curves[nt])]
        mono = min(mono, float(np.min(np.diff(c))))
        conc = max(conc, float(np.max(np.diff(c, 2))))
    out.append(Check("1b", "c_qg non-decreasing", "min step >= -1e-12", mono, mono >= -1e-12))
    out.append(Check("1b", "c_qg concave", "max second difference <= 1e-9", conc, conc <= 1e-9))

    sat = 0.5 * math.log2(3.5)
    err = max(abs(gaussian.c_qg(D, gaussian.QGParams(5, 1, 1, nt)) - sat) for nt in nts for D in (0.5, 1.0, 10.0))
    out.append(Check("1c", "c_qg saturates at log2(3.5)/2", "abs error <= 1e-12", err, err <= 1e-12))

    p0 = gaussian.QGParams(5, 1, 1, 0.0)
    th = gaussian.c_qg_threshold(p0)
    at = gaussian.c_qg(1 / 7, p0)
    after = gaussian.c_qg(1 / 7 + 1e-6, p0)
    err = abs(th - 1 / 7) + abs(at)
    out.append(Check("1d", "N_T=0 zero exactly at D=1/7", "abs error <= 1e-12, positive just above",
                     err, err <= 1e-12 and after > 0))
    return out


# ---------------------------------------------------------------------------
# 2. Description noise round trip


def check_qg_d2(seed: int, level: str) -> list[Check]:
    p = gaussian.QGParams(5, 1, 1, 0.3)
    d2 = gaussian.qg_d2(0.35, p, n_descriptions=2)
    out = [Check("2", "qg_d2 for two descriptions", "|d2 - 1.7333| <= 5e-4", abs(d2 - 1.7333),
                 abs(d2 - 1.7333) <= 5e-4)]
    sys = gaussian.qg_p2p_system(p, d2, n_descriptions=2)
    var = gaussian.gaussian_cond_var(sys, "S", ("V1", "V2", "SW"))
    out.append(Check("2", "Var(S | V1, V2, S+W) at that d2", "|var - 0.35| <= 1e-6", abs(var - 0.35),
                     abs(var - 0.35) <= 1e-6))
    mse, se = gaussian.qg_mmse_monte_carlo(p, d2, 10**6, seed, n_descriptions=2)
    z = abs(mse - 0.35) / se
    out.append(Check("2", "Monte-Carlo MMSE with 1e6 samples", "|mse - 0.35| / stderr <= 3", z, z <= 3))
    return out


# ---------------------------------------------------------------------------
# 3. Binary broadcast example


def check_binary_bc(seed: int, level: str) -> list[Check]:
    p1, p2 = 1 / 20, 1 / 10
    res = bc.binary_bc_example(p1, p2)
    alpha = res["alpha"]
    A, B = res["A"], res["B"]
    out = []
    err = float(np.max(np.abs(B["D2"] - p1)))
    out.append(Check("3", "scheme B reaches D2 = p1 for every alpha", "abs error <= 1e-12", err, err <= 1e-12))
    h = np.array([binary_entropy(a) for a in alpha])
    pos = alpha > 0
    err = float(np.max(np.abs(B["R1_raw"] - h)))
    out.append(Check("3", "scheme B R1 bound equals H2(alpha)", "abs error <= 1e-9", err,
                     err <= 1e-9 and bool(np.all(B["R1"][pos] > 0))))
    ok = A["D2"] <= p1 + 1e-12
    only_zero = bool(np.all(alpha[ok] == 0)) and bool(ok[alpha == 0].all())
    margin = float(np.min(A["D2"][pos] - p1))
    out.append(Check("3", "scheme A meets D2 <= p1 only at alpha = 0", "min excess over p1 for alpha > 0 > 0",
                     margin, only_zero and margin > 0))
    err = res["max_error"]
    out.append(Check("3", "closed forms vs generic evaluator", "max abs error <= 1e-9", err, err <= 1e-9))
    return out


# ---------------------------------------------------------------------------
# 4. Double usage


def check_double_usage(seed: int, level: str) -> list[Check]:
    res = mac.double_usage_example(n_grid=256)
    c = res["c"]
    err = max(abs(c.R1 - 1), abs(c.R2 - 0.5), abs(min(c.sum_a, c.sum_b) - 1))
    out = [Check("4", "configuration (c) region {R1<=1, R2<=1/2, R1+R2<=1}", "max abs error <= 1e-9", err,
                 err <= 1e-9)]
    out.append(Check("4", "configuration (c) distortion", "D <= 1e-12", c.D, abs(c.D) <= 1e-12))
    m = res["b_max_R1"]
    out.append(Check("4", "configuration (b) max R1 over 256-point grid", "<= 0.5 + 1e-9", m, m <= 0.5 + 1e-9))
    return out


# ---------------------------------------------------------------------------
# 5. Region inclusions


def check_inclusions(seed: int, level: str) -> list[Check]:
    n = LEVELS[level]["n_systems"]
    rng = _rng(seed, 5)
    w = {"a1": math.inf, "a2": math.inf, "b1": math.inf, "b2": math.inf}
    t0 = time.perf_counter()
    for _ in range(n):
        scen = random_bc(rng)
        v = random_bc_vars(rng, scen)
        j = bc.bc_joint(scen, v)
        sim = bc.bc_region_simultaneous(scen, v, j)
        seq = bc.bc_region_sequential(scen, v, j)
        out_ = bc.bc_outer(scen, v, j)
        w["a1"] = min(w["a1"], sim.R1 - seq.R1)
        w["a2"] = min(w["a2"], sim.R2 - seq.R2)
        w["b1"] = min(w["b1"], out_.R1 - sim.R1)
        w["b2"] = min(w["b2"], out_.R2 - sim.R2)
    t_bc = time.perf_counter() - t0
    res = [
        Check("5a", f"BC sequential R1 <= simultaneous R1 ({n} systems)", f"min slack >= -{SLACK:g}", w["a1"],
              w["a1"] >= -SLACK, t_bc / 4),
        Check("5a", f"BC sequential R2 <= simultaneous R2 ({n} systems)", f"min slack >= -{SLACK:g}", w["a2"],
              w["a2"] >= -SLACK, t_bc / 4),
        Check("5b", f"BC simultaneous R1 <= outer R1 on the same variables ({n} systems)",
              f"min slack >= -{SLACK:g}", w["b1"], w["b1"] >= -SLACK, t_bc / 4),
        Check("5b", f"BC simultaneous R2 <= outer R2 on the same variables ({n} systems)",
              f"min slack >= -{SLACK:g}", w["b2"], w["b2"] >= -SLACK, t_bc / 4),
    ]
    t0 = time.perf_counter()
    worst, dgap = math.inf, 0.0
    for _ in range(n):
        scen = random_mac(rng)
        v = random_mac_vars(rng, scen)
        b = mac.mac_inner_bounds(scen, v)
        p, k = mac.cooperative_embedding(scen, v)
        o, D = mac.mac_outer_sum(scen, p, k)
        inner_sum = min(b.sum_a, b.sum_b, b.R1 + b.R2)
        worst = min(worst, o - inner_sum)
        dgap = max(dgap, D - b.D)
    res.append(Check("5c", f"MAC inner sum <= matched-distortion outer sum ({n} systems)",
                     f"min slack >= -{SLACK:g}, outer D <= inner D + 1e-9", worst,
                     worst >= -SLACK and dgap <= 1e-9, time.perf_counter() - t0))
    return res


# ---------------------------------------------------------------------------
# 6. Oracle equivalence


def _arrays(scen):
    return scen.pss_t.values, scen.chan.table, np.asarray(scen.feedback.table), scen.distortion.table


def _p2p_instances(seed, n, stream):
    rng = _rng(seed, stream)
    return [random_p2p(rng, 2, 2, 2, 2, feedback=bool(rng.integers(2))) for _ in range(n)]


def check_oracles(seed: int, level: str) -> list[Check]:
    n = LEVELS[level]["n_oracle"]
    res = []

    t0 = time.perf_counter()
    worst = 0.0
    for scen in _p2p_instances(seed, n, 61):
        m = CapacityDistortion(v_size=2, random_state=seed).fit(scen)
        Ds = [m.d_min_ + f * (m.d_at_capacity_ - m.d_min_) for f in (0.25, 0.5, 0.75, 1.0)]
        Ds = [D + 1e-9 for D in Ds]
        sol = np.array([m.point(D).rate for D in Ds])
        orc = np.maximum(oracles.oracle_cd(*_arrays(scen), Ds), 0.0)
        worst = max(worst, float(np.max(np.abs(sol - orc))))
    res.append(Check("6", f"solve_cd vs grid oracle ({n} instances)", f"max abs diff <= {ORACLE_TOL:g} bits",
                     worst, worst <= ORACLE_TOL, time.perf_counter() - t0))

    t0 = time.perf_counter()
    worst = 0.0
    for scen in _p2p_instances(seed, n, 62):
        m = CausalCapacityDistortion(v_size=2, random_state=seed).fit(scen)
        top = max(mm.d_at_capacity_ for mm in m.models_)
        Ds = [m.d_min_ + f * (top - m.d_min_) + 1e-9 for f in (0.25, 0.5, 0.75, 1.0)]
        sol = np.array([m.point(D).rate for D in Ds])
        orc = np.maximum(oracles.oracle_causal_cd(*_arrays(scen), Ds), 0.0)
        worst = max(worst, float(np.max(np.abs(sol - orc))))
    res.append(Check("6", f"causal_cd vs Shannon-strategy grid oracle ({n} instances)",
                     f"max abs diff <= {ORACLE_TOL:g} bits", worst, worst <= ORACLE_TOL, time.perf_counter() - t0))

    rng = _rng(seed, 63)
    B = (0, 1)
    t0 = time.perf_counter()
    worst, mismatch = 0.0, 0
    for _ in range(n):
        prior = FiniteDist(B, rng.dirichlet([1, 1]))
        echo = Kernel((B, B), (B,), rng.dirichlet([1, 1], size=(2, 2)))
        down = Kernel((B, B), ((0, 1, 2),), rng.dirichlet([1, 1, 1], size=(2, 2)))
        d = DistortionFn.hamming(B)
        for D in rng.uniform(0, 0.5, 3):
            o = oracles.oracle_c_md(prior.pmf, echo.table, down.table, d.table, D)
            try:
                v = bc.c_md(prior, echo, down, d, D)
            except InfeasibleError:
                v = math.nan
            if math.isnan(o) != math.isnan(v):
                mismatch += 1
            elif not math.isnan(o):
                worst = max(worst, abs(o - v))
    res.append(Check("6", f"c_md vs grid oracle ({n} instances)", f"max abs diff <= {ORACLE_TOL:g} bits",
                     worst, worst <= ORACLE_TOL and mismatch == 0, time.perf_counter() - t0,
                     note=f"feasibility mismatches={mismatch}"))

    t0 = time.perf_counter()
    worst, mismatch = 0.0, 0
    for _ in range(n):
        prior = FiniteDist(B, rng.dirichlet([1, 1]))
        chan = Kernel((B, B, B), (B,), rng.dirichlet([1, 1], size=(2, 2, 2)))
        d = DistortionFn.hamming(B)
        for D in rng.uniform(0, 0.5, 3):
            o = oracles.oracle_c_mu(prior.pmf, chan.table, d.table, D)
            try:
                v = mac.c_mu(prior, chan, d, D)
            except InfeasibleError:
                v = math.nan
            if math.isnan(o) != math.isnan(v):
                mismatch += 1
            elif not math.isnan(o):
                worst = max(worst, abs(o - v))
    res.append(Check("6", f"c_mu vs grid oracle ({n} instances)", f"max abs diff <= {ORACLE_TOL:g} bits",
                     worst, worst <= ORACLE_TOL and mismatch == 0, time.perf_counter() - t0,
                     note=f"feasibility mismatches={mismatch}"))
    return res


# ---------------------------------------------------------------------------
# 7. Estimator lemmas


def check_estimators(seed: int, level: str) -> list[Check]:
    cfg = LEVELS[level]
    rng = _rng(seed, 7)
    res = []

    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(cfg["n_lemma1"]):
        ns, no, nr = (int(x) for x in rng.integers(2, [4, 5, 4]))
        p = rng.dirichlet(np.ones(ns * no)).reshape(ns, no)
        d = rng.random((ns, nr))
        joint = JointTable((("S", tuple(range(ns))), ("O", tuple(range(no)))), p)
        got = bayes_distortion(joint, "S", ("O",), DistortionFn(d))
        worst = max(worst, abs(got - oracles.oracle_bayes_enumeration(p, d)))
    res.append(Check("7", f"Bayes estimator vs exhaustive enumeration ({cfg['n_lemma1']} systems)",
                     "max abs diff <= 1e-12", worst, worst <= 1e-12, time.perf_counter() - t0))

    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(cfg["n_lemma2"]):
        ns, nv, nw = (int(x) for x in rng.integers(2, 4, size=3))
        ps = rng.dirichlet(np.ones(ns))
        pv = rng.dirichlet(np.ones(nv), size=ns)
        pw = rng.dirichlet(np.ones(nw), size=nv)
        vals = ps[:, None, None] * pv[:, :, None] * pw[None, :, :]
        joint = JointTable((("S", tuple(range(ns))), ("V", tuple(range(nv))), ("W", tuple(range(nw)))), vals)
        with_w, without = markov_reduction_check(joint, "S", ("V",), ("W",), DistortionFn(rng.random((ns, ns))))
        worst = max(worst, abs(with_w - without))
    res.append(Check("7", f"extra Markov observation leaves Bayes distortion unchanged ({cfg['n_lemma2']} joints)",
                     "max abs diff <= 1e-9", worst, worst <= 1e-9, time.perf_counter() - t0))

    t0 = time.perf_counter()
    worst = 0.0
    ham = DistortionFn.hamming((0, 1))
    for p1 in np.linspace(0, 0.5, 50):
        for p2 in np.linspace(0, 0.5, 50):
            joint = bern_xor_joint(p1, p2)
            closed = bern_xor_min_distortion(p1, p2)
            brute = oracles.oracle_bayes_enumeration(joint.values, ham.table)
            generic = bayes_distortion(joint, "S", ("V",), ham)
            worst = max(worst, abs(closed - brute), abs(generic - brute))
    res.append(Check("7", "Bernoulli xor closed form vs brute force (50x50 grid)", "max abs diff <= 1e-12",
                     worst, worst <= 1e-12, time.perf_counter() - t0))
    return res


# ---------------------------------------------------------------------------
# 8. Gaussian broadcast structure


def check_qg_bc(seed: int, level: str) -> list[Check]:
    alpha = np.linspace(0.0, 1.0, 21)
    d1sq = np.concatenate([np.geomspace(1e-2, 1e2, 25), [math.inf]])
    s = gaussian.qg_bc_surfaces(5, 1, 1, 1, 0.3, 0.5, alpha, d1sq)
    # Each surface keeps the points where its own rate bounds are nonnegative.
    sim = (s["R1_sim"] >= 0) & (s["R2_sim"] >= 0)
    seq = (s["R1_seq"] >= 0) & (s["R2_seq"] >= 0)
    r2s, r2q = s["R2_sim"][sim], s["R2_seq"][seq]
    err = max(abs(r2s.min() - r2q.min()), abs(r2s.max() - r2q.max()))
    out = [Check("8", "equal R2 ranges", "abs diff <= 1e-9", err, err <= 1e-9)]
    err = abs(s["D1"][sim].max() - s["D1"][seq].max())
    out.append(Check("8", "equal max D1", "abs diff <= 1e-9", err, err <= 1e-9))
    i_sim = int(np.argmax(s["R1_sim"]))
    gap = s["R1_sim"].max() - s["R1_seq"].max()
    target = s["gap"][i_sim]
    err = abs(gap - target)
    out.append(Check("8", "max R1 gap equals I(X;V2|U,Y1) at the maximizer", "abs diff <= 1e-9, gap > 0",
                     err, err <= 1e-9 and target > 0, note=f"gap={gap:.6g}"))
    return out


CRITERIA = (
    ("1", check_qg_curves),
    ("2", check_qg_d2),
    ("3", check_binary_bc),
    ("4", check_double_usage),
    ("5", check_inclusions),
    ("6", check_oracles),
    ("7", check_estimators),
    ("8", check_qg_bc),
)


def run_checks(level: str = "fast", seed: int = 0, only=None) -> list[Check]:
    """Run the selected criteria in bits and return their checks in a fixed order."""
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}; use one of {sorted(LEVELS)}")
    prev = get_units()
    set_units("bits")
    try:
        out = []
        for key, fn in CRITERIA:
            if only is not None and key not in only:
                continue
            t0 = time.perf_counter()
            checks = fn(seed, level)
            elapsed = time.perf_counter() - t0
            untimed = [c for c in checks if c.seconds == 0.0]
            for c in untimed:
                c.seconds = elapsed / len(untimed)
            out.extend(checks)
        return out
    finally:
        set_units(prev)


def format_report(checks, level: str, seed: int) -> str:
    n_fail = sum(not c.passed for c in checks)
    lines = [f"# cdtrade verify level={level} seed={seed}"]
    lines += [c.line() for c in checks]
    lines.append(f"# {len(checks) - n_fail} passed, {n_fail} failed")
    return "\n".join(lines) + "\n"


def format_timings(checks) -> str:
    return "\n".join(f"{c.seconds:8.2f}s  {c.criterion} {c.name}" for c in checks) + "\n"
