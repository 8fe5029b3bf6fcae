"""Command-line front end: ``cdtrade run`` and ``cdtrade verify``."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, bc, gaussian, mac
from ._validation import InvalidDistributionError
from .exceptions import InfeasibleError, ResourceGuardrailError
from .p2p import CapacityDistortion, CausalCapacityDistortion, P2PScenario, radar_distortions, radar_min_distortion
from .prob import FiniteDist, JointTable, Kernel, get_units, set_units
from .random_systems import random_kernel, random_pmf
from .scenario_spec import (ScenarioSpec, SpecError, apply_override, build_dist, build_distortion,
                            build_joint, build_kernel, build_map, builtin_names, load_spec)

EXIT_OK, EXIT_FAIL, EXIT_SCHEMA, EXIT_INFEASIBLE, EXIT_GUARDRAIL = 0, 1, 2, 3, 4
SIG = 12


class Table:
    def __init__(self, columns, rows=None):
        self.columns = list(columns)
        self.rows = [] if rows is None else [list(r) for r in rows]

    def add(self, *row):
        self.rows.append(list(row))


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), f".{SIG}g")
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        f = float(v)
        if not math.isfinite(f):
            return str(f)
        return float(format(f, f".{SIG}g"))
    return v


# ---------------------------------------------------------------------------
# Per-kind runners: each returns (tables, summary, solver_evaluations)


def _solver_opts(spec: ScenarioSpec, seed: int, threads: int) -> dict:
    s = spec.solver
    opts = {"random_state": seed, "n_jobs": threads}
    for k in ("v_size", "n_starts", "tol", "max_iter"):
        if k in s:
            opts[k] = s[k]
    return opts


def _p2p_scenario(p) -> P2PScenario:
    pss_t = build_joint(p["pss_t"])
    chan = build_kernel(p["channel"])
    fb = build_map(p.get("feedback"), chan.outputs)
    d = build_distortion(p.get("distortion"), pss_t.axes[0][1])
    return P2PScenario(pss_t, chan, fb, d)


def _cd_tables(model, grid):
    pts, env = model.curve(grid)
    if not pts:
        raise InfeasibleError(f"every D in the grid is below the minimum distortion {model.d_min_:g}")
    t = Table(["D", "rate", "raw_rate", "distortion", "envelope"])
    for p, e in zip(pts, env):
        t.add(p.D, p.rate, p.raw_rate, p.distortion, e)
    return t


def run_p2p(spec, seed, threads):
    p = spec.parameters
    scen = _p2p_scenario(p)
    model = CapacityDistortion(**_solver_opts(spec, seed, threads)).fit(scen)
    t = _cd_tables(model, p["D_grid"])
    return {"curve": t}, {"d_min": model.d_min_, "capacity": model.capacity_}, len(model.candidates_)


def run_p2p_causal(spec, seed, threads):
    p = spec.parameters
    scen = _p2p_scenario(p)
    opts = _solver_opts(spec, seed, threads)
    if "u_size" in spec.solver:
        opts["u_size"] = spec.solver["u_size"]
    model = CausalCapacityDistortion(**opts).fit(scen)
    t = _cd_tables(model, p["D_grid"])
    evals = sum(len(m.candidates_) for m in model.models_)
    return {"curve": t}, {"d_min": model.d_min_}, evals


def run_bc(spec, seed, threads):
    p = spec.parameters
    pss_t = build_joint(p["pss_t"])
    chan = build_kernel(p["channel"])
    states = pss_t.axes[0][1]
    scen = bc.BCScenario(pss_t, chan, build_map(p.get("feedback"), chan.outputs),
                         build_distortion(p.get("d1"), states), build_distortion(p.get("d2"), states))
    rng = np.random.default_rng(seed)
    nu, nv1, nv2 = p.get("u_size", 2), p.get("v1_size", 2), p.get("v2_size", 2)
    u = tuple(range(nu))
    t = Table(["sample", "R1_sim", "R2_sim", "R1_seq", "R2_seq", "R1_out", "R2_out", "sum_out", "D1", "D2"])
    for i in range(p["n_samples"]):
        p_ux = JointTable((("U", u), ("X", scen.x_alphabet)),
                          random_pmf(rng, nu * len(scen.x_alphabet)).reshape(nu, -1))
        comp = random_kernel(rng, (u, scen.x_alphabet, scen.st_alphabet, scen.z_alphabet),
                             (tuple(range(nv1)), tuple(range(nv2))))
        v = bc.BCVars(p_ux, comp)
        j = bc.bc_joint(scen, v)
        sim, seq, out = (f(scen, v, j) for f in (bc.bc_region_simultaneous, bc.bc_region_sequential, bc.bc_outer))
        t.add(i, sim.R1, sim.R2, seq.R1, seq.R2, out.R1, out.R2, out.sum_rate, sim.D1, sim.D2)
    deg = bc.check_degraded(scen)
    return {"samples": t}, {"degradedness": deg.kind, "degradedness_residual": deg.residual}, p["n_samples"]


def run_mac(spec, seed, threads):
    p = spec.parameters
    psss = build_joint(p["psss"])
    chan = build_kernel(p["channel"])
    scen = mac.MACScenario(psss, chan, build_map(p.get("feedback1"), chan.outputs),
                           build_map(p.get("feedback2"), chan.outputs),
                           build_distortion(p.get("distortion"), psss.axes[0][1]))
    rng = np.random.default_rng(seed)
    samples = []
    for _ in range(p["n_samples"]):
        px1 = FiniteDist(scen.alphabet("X1"), random_pmf(rng, len(scen.alphabet("X1"))))
        px2 = FiniteDist(scen.alphabet("X2"), random_pmf(rng, len(scen.alphabet("X2"))))
        c1 = random_kernel(rng, (scen.alphabet("X1"), scen.alphabet("S1")), ((0, 1),))
        c2 = random_kernel(rng, (scen.alphabet("X2"), scen.alphabet("S2")), ((0, 1),))
        samples.append(mac.MACVars.independent(scen, px1, px2, c1, c2))
    D = p.get("D", math.inf)
    hull, bounds = mac.mac_region(scen, samples, D)
    ts = Table(["sample", "R1", "R2", "sum_a", "sum_b", "D"])
    for i, b in enumerate(bounds):
        ts.add(i, b.R1, b.R2, b.sum_a, b.sum_b, b.D)
    th = Table(["R1", "R2"], hull)
    return {"samples": ts, "region": th}, {"D": D}, len(samples)


def run_qg_p2p(spec, seed, threads):
    p = spec.parameters
    tables = {}
    summary = {}
    for nt in p["N_T"]:
        qp = gaussian.QGParams(p["P"], p["Q"], p["N"], nt)
        vals = gaussian.c_qg_curve(p["D_grid"], qp)
        t = Table(["D", "C"])
        for D, c in zip(p["D_grid"], vals):
            if not math.isnan(c):
                t.add(D, c)
        tables[f"NT{format(float(nt), 'g')}"] = t
        summary[f"threshold_NT{format(float(nt), 'g')}"] = gaussian.c_qg_threshold(qp)
    if not any(t.rows for t in tables.values()):
        raise InfeasibleError("every D in the grid is below the minimum distortion")
    return tables, summary, 0


def run_qg_bc(spec, seed, threads):
    p = spec.parameters
    s = gaussian.qg_bc_surfaces(p["P"], p["Q"], p["N1"], p["N2"], p["N_T"], p["D2"],
                                p["alpha_grid"], p["d1sq_grid"])
    tables = {}
    for scheme in ("sim", "seq"):
        t = Table(["alpha", "d1sq", "d2sq", "R1", "R2", "D1", "feasible"])
        for i in range(len(s["alpha"])):
            r1, r2 = s[f"R1_{scheme}"][i], s[f"R2_{scheme}"][i]
            t.add(s["alpha"][i], s["d1sq"][i], s["d2sq"][i], r1, r2, s["D1"][i], r1 >= 0 and r2 >= 0)
        tables["simultaneous" if scheme == "sim" else "sequential"] = t
    summary = {"max_R1_sim": float(s["R1_sim"].max()), "max_R1_seq": float(s["R1_seq"].max()),
               "dropped_alpha": list(s["dropped_alpha"])}
    return tables, summary, 0


def run_qg_mac(spec, seed, threads):
    p = spec.parameters
    r = gaussian.qg_mac_regions(p["P1"], p["P2"], p["Q"], p["N"], p["N_T"], p["d1sq"], p["d2sq"],
                                p["alpha1_grid"], p["alpha2_grid"])
    c1, c2 = r["ts_corners"]
    o = r["outer_sum"]
    tables = {
        "proposed": Table(["R1", "R2"], r["proposed_hull"]),
        "ts": Table(["R1", "R2"], [[0.0, 0.0], [c1, 0.0], [0.0, c2]]),
        "outer": Table(["R1", "R2"], [[0.0, 0.0], [o, 0.0], [0.0, o]]),
    }
    return tables, {"D": r["D"], "outer_sum": o, "ts_corners": [c1, c2]}, 0


def run_radar(spec, seed, threads):
    p = spec.parameters
    prior = build_dist(p["prior"])
    echo = build_kernel(p["echo"])
    d = build_distortion(p.get("distortion"), prior.labels)
    vals = radar_distortions(prior, echo, d)
    x, D = radar_min_distortion(prior, echo, d)
    t = Table(["x", "distortion"], [[str(xx), v] for xx, v in zip(echo.inputs[0], vals)])
    return {"per_input": t}, {"x_star": str(x), "D_star": D}, 0


def run_isac_md(spec, seed, threads):
    p = spec.parameters
    prior = build_dist(p["prior"])
    echo, down = build_kernel(p["echo"]), build_kernel(p["downlink"])
    d = build_distortion(p.get("distortion"), prior.labels)
    t = Table(["D", "C"])
    for D in p["D_grid"]:
        try:
            t.add(D, bc.c_md(prior, echo, down, d, D))
        except InfeasibleError:
            continue
    if not t.rows:
        raise InfeasibleError("every D in the grid is below the minimum sensing distortion")
    return {"curve": t}, {"min_distortion": float(radar_distortions(prior, echo, d).min())}, 0


def run_isac_mu(spec, seed, threads):
    p = spec.parameters
    prior = build_dist(p["prior"])
    chan = build_kernel(p["channel"])
    d = build_distortion(p.get("distortion"), prior.labels)
    vals = mac.c_mu_curve(prior, chan, d, p["D_grid"], u_size=p.get("u_size", 2))
    t = Table(["D", "C"], [[D, v] for D, v in zip(p["D_grid"], vals) if not math.isnan(v)])
    if not t.rows:
        raise InfeasibleError("every D in the grid is below the minimum sensing distortion")
    return {"curve": t}, {}, 0


def run_binary_bc(spec, seed, threads):
    p = spec.parameters
    r = bc.binary_bc_example(p["p1"], p["p2"], p["alpha_grid"])
    tables = {}
    for s in "AB":
        t = Table(["alpha", "R1", "R2", "D1", "D2"])
        for i, a in enumerate(r["alpha"]):
            t.add(a, r[s]["R1"][i], r[s]["R2"][i], r[s]["D1"][i], r[s]["D2"][i])
        tables[f"scheme_{s}"] = t
    return tables, {"max_error": r["max_error"]}, 0


def run_double_usage(spec, seed, threads):
    r = mac.double_usage_example(spec.parameters.get("n_grid", 256))
    t = Table(["config", "R1", "R2", "sum_a", "sum_b", "D"])
    for c in "abc":
        b = r[c]
        t.add(c, b.R1, b.R2, b.sum_a, b.sum_b, b.D)
    g = Table(["P_X2_1", "R1"], [[q, v] for q, v in zip(r["b_grid"], r["b_R1"])])
    return {"configurations": t, "b_sweep": g}, {"p": r["p"], "b_max_R1": r["b_max_R1"]}, 0


RUNNERS = {
    "p2p": run_p2p, "p2p-causal": run_p2p_causal, "bc": run_bc, "mac": run_mac,
    "qg-p2p": run_qg_p2p, "qg-bc": run_qg_bc, "qg-mac": run_qg_mac, "radar": run_radar,
    "isac-md": run_isac_md, "isac-mu": run_isac_mu, "binary-bc": run_binary_bc,
    "double-usage": run_double_usage,
}


# ---------------------------------------------------------------------------
# Output


def write_csv(path: Path, table: Table) -> None:
    lines = ["# units=bits", ",".join(table.columns)]
    lines += [",".join(_fmt(v) for v in row) for row in table.rows]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def bundle(spec: ScenarioSpec, seed: int, tables, summary, evals) -> dict:
    return _jsonable({
        "metadata": {
            "kind": spec.kind,
            "name": spec.name,
            "spec_sha256": spec.sha256(),
            "seed": seed,
            "units": "bits",
            "version": __version__,
            "solver_evaluations": evals,
        },
        "spec": spec.to_dict(),
        "summary": summary,
        "tables": {k: {"columns": t.columns, "rows": t.rows} for k, t in tables.items()},
    })


def run(spec: ScenarioSpec, out_dir, seed: int = 0, threads: int = 1, fmt: str = "both") -> dict:
    """Solve ``spec`` and write its CSV tables and/or JSON bundle into ``out_dir``."""
    prev = get_units()
    set_units("bits")
    try:
        tables, summary, evals = RUNNERS[spec.kind](spec, seed, threads)
    finally:
        set_units(prev)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    doc = bundle(spec, seed, tables, summary, evals)
    if fmt in ("csv", "both"):
        for name, t in tables.items():
            write_csv(out / f"{spec.name}_{name}.csv", t)
    if fmt in ("json", "both"):
        with open(out / f"{spec.name}.json", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return doc


# ---------------------------------------------------------------------------
# Entry point


def _threads(arg) -> int:
    if arg is not None:
        return int(arg)
    env = os.environ.get("CDTRADE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise SpecError(f"CDTRADE_THREADS={env!r} is not an integer") from None
    return 1


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cdtrade", description="Capacity-distortion solvers and region evaluators.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="solve a scenario spec and write CSV/JSON results")
    r.add_argument("--spec", required=True, help="spec file path or builtin name")
    r.add_argument("--out", default=".", help="output directory")
    r.add_argument("--seed", type=int, default=None)
    r.add_argument("--threads", type=int, default=None)
    r.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
    r.add_argument("--format", choices=("csv", "json", "both"), default="both")

    v = sub.add_parser("verify", help="run the acceptance checks")
    v.add_argument("--level", choices=("fast", "full"), default="fast")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out", default=None, help="also write the report to this file")
    v.add_argument("--only", default=None, help="comma-separated criteria, e.g. 1,3,6")
    v.add_argument("--timings", action="store_true", help="print per-check timings to stderr")

    s = sub.add_parser("show", help="print a builtin or file spec in canonical form")
    s.add_argument("spec", nargs="?", help="spec file path or builtin name; omit to list builtins")
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "verify":
        from .verification import format_report, format_timings, run_checks

        only = None if args.only is None else set(args.only.split(","))
        checks = run_checks(args.level, args.seed, only)
        report = format_report(checks, args.level, args.seed)
        sys.stdout.write(report)
        if args.timings:
            sys.stderr.write(format_timings(checks))
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(report)
        return EXIT_OK if all(c.passed for c in checks) else EXIT_FAIL

    try:
        if args.command == "show":
            if args.spec is None:
                print("\n".join(builtin_names()))
                return EXIT_OK
            sys.stdout.write(load_spec(args.spec).to_json())
            return EXIT_OK
        spec = load_spec(args.spec)
        for o in args.overrides:
            spec = apply_override(spec, o)
        seed = args.seed if args.seed is not None else int(spec.solver.get("seed", 0))
        doc = run(spec, args.out, seed, _threads(args.threads), args.format)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ResourceGuardrailError as exc:
        print(f"resource guardrail: {exc}", file=sys.stderr)
        return EXIT_GUARDRAIL
    except (SpecError, InvalidDistributionError, ValueError, KeyError, TypeError) as exc:
        print(f"invalid spec: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    print(f"wrote {len(doc['tables'])} table(s) for {spec.name} to {args.out}", file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
