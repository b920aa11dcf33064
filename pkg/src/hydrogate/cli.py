"""Batch CLI: simulations, analytical sweeps, fitting, comparisons.

All numeric output uses shortest round-trip float formatting and SI
units, so repeated runs with identical inputs produce byte-identical
files.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

import numpy as np

from . import __version__, calibration, hydraulics, metrics, params, pulse_model
from .errors import HydrogateError, MissingCache, UnknownParameter
from .oracle import GatingSchedule, build_grid, measure_pulse, run

SWEEPABLE = tuple(name for name, _, _ in params.SCENARIO_TABLE)


def _fmt(v) -> str:
    return repr(float(v))


def _write_csv(path, header, rows):
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_params(args) -> params.SystemParameters:
    if getattr(args, "config", None):
        return params.load_config(args.config)
    return params.validate(params.SystemParameters())


def _load_k(spec: str) -> pulse_model.FittingParams:
    if spec == "paper":
        return pulse_model.PAPER_FIT
    if spec.startswith("refit:"):
        with open(spec.split(":", 1)[1]) as fh:
            d = json.load(fh)
        kd = d["best"] if "best" in d else d
        return pulse_model.FittingParams(
            k_g=kd["k_g"], k_a=kd["k_a"], k_w=kd["k_w"], k_t=kd["k_t"])
    raise UnknownParameter(f"--k must be 'paper' or 'refit:FILE', got {spec!r}")


def _cache_key(name: str) -> str:
    return name.replace("/", "_per_")


def _cache_path(cache_dir, name):
    return os.path.join(cache_dir, _cache_key(name) + ".json")


def load_cached_triples(cache_dir, scenarios):
    """Load oracle triples for the given scenarios, or raise MissingCache."""
    out = []
    for sc in scenarios:
        path = _cache_path(cache_dir, sc.name)
        if not os.path.exists(path):
            raise MissingCache(f"no cached oracle result for scenario "
                               f"{sc.name!r} ({path})")
        with open(path) as fh:
            d = json.load(fh)
        out.append(pulse_model.PulseShape(A_p=d["A_p"], W_p=d["W_p"],
                                          T_d=d["T_d"], x_s=d["x_s"]))
    return out


def measure_scenario_cached(sc, cache_dir=None, **kw):
    """Oracle triple for one scenario, via the cache when possible."""
    if cache_dir:
        path = _cache_path(cache_dir, sc.name)
        if os.path.exists(path):
            with open(path) as fh:
                d = json.load(fh)
            return pulse_model.PulseShape(A_p=d["A_p"], W_p=d["W_p"],
                                          T_d=d["T_d"], x_s=d["x_s"])
    m = measure_pulse(sc.params, **kw)
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        _write_json(_cache_path(cache_dir, sc.name), {
            "name": sc.name, "A_p": m.A_p, "W_p": m.W_p, "T_d": m.T_d,
            "x_s": m.x_s, "t_peak": m.t_peak,
            "params": sc.params.to_dict(),
        })
    return pulse_model.PulseShape(A_p=m.A_p, W_p=m.W_p, T_d=m.T_d,
                                  x_s=m.x_s)


def cmd_hydraulics(args):
    p = _load_params(args)
    print(json.dumps(hydraulics.report(p), indent=2, sort_keys=True))
    return 0


def cmd_analytic(args):
    p = _load_params(args)
    k = _load_k(args.k)
    shape = pulse_model.propagated_pulse(p, k)
    x = np.linspace(0.0, p.l_ch, args.samples)
    sidecar = {"A_p": shape.A_p, "W_p": shape.W_p, "T_d": shape.T_d,
               "d": None}
    if args.train and args.train > 1:
        train, trace = pulse_model.pulse_train(p, k, args.train)
        c = trace(x)
        sidecar["d"] = train.d
    else:
        c = pulse_model.eval_pulse(shape, x)
    out = args.out or "."
    os.makedirs(out, exist_ok=True)
    _write_csv(os.path.join(out, "analytic.csv"), ("x_m", "c_mol_m3"),
               zip(x, c))
    _write_json(os.path.join(out, "analytic.json"), sidecar)
    return 0


def _parse_windows(text):
    wins = []
    for part in text.split(","):
        start, dur = part.split(":")
        wins.append((float(start), float(dur)))
    return tuple(wins)


def cmd_simulate(args):
    p = _load_params(args)
    windows = _parse_windows(args.schedule)
    horizon = args.horizon
    schedule = GatingSchedule(windows, horizon)
    probe_x = tuple(args.probe_x or ())
    snap_t = tuple(args.snapshot_t or ())
    profile_t = tuple(args.profile_t or ())
    grid = build_grid(p, args.cells_across)
    res = run(p, schedule, grid=grid, probe_x=probe_x,
              profile_every=args.profile_every if profile_t == () else 0.0,
              snapshot_times=tuple(sorted(set(snap_t) | set(profile_t))))
    out = args.out or "."
    os.makedirs(out, exist_ok=True)
    for x in probe_x:
        _write_csv(os.path.join(out, f"trace_t_x{_fmt(x)}.csv"),
                   ("t_s", "c_mol_m3"),
                   zip(res.times, res.probe_series[x]))
    j1, j2 = grid.j_mid
    for t in profile_t:
        c = res.snapshots[t]
        row = 0.5 * (c[j1, :] + c[j2, :])
        _write_csv(os.path.join(out, f"trace_x_t{_fmt(t)}.csv"),
                   ("x_m", "c_mol_m3"), zip(res.x_centers, row))
    for t in snap_t:
        c = res.snapshots[t]
        rows = []
        for j in range(grid.ny):
            for i in range(grid.nx):
                if grid.fluid[j, i]:
                    rows.append((grid.x_centers[i], grid.y_centers[j],
                                 c[j, i]))
        _write_csv(os.path.join(out, f"field_t{_fmt(t)}.csv"),
                   ("x_m", "y_m", "c_mol_m3"), rows)
    _write_json(os.path.join(out, "run.json"),
                {"dt": res.dt, "n_steps": res.n_steps,
                 "mass_error": res.mass_error})
    return 0


def cmd_measure(args):
    data = np.loadtxt(args.infile, delimiter=",", skiprows=1)
    window = (args.window_start, args.window_duration) \
        if args.window_start is not None else None
    mp = metrics.extract_pulse(data[:, 0], data[:, 1], kind=args.kind,
                               window=window, smooth=args.smooth)
    print(json.dumps(dataclasses.asdict(mp), indent=2, sort_keys=True))
    return 0


def _sweep_values(param):
    for name, values, _ in params.SCENARIO_TABLE:
        if name == param:
            return values
    raise UnknownParameter(f"sweepable parameters are {SWEEPABLE}, got "
                           f"{param!r}")


def cmd_sweep(args):
    base = _load_params(args)
    k = _load_k(args.k)
    names = SWEEPABLE if args.param == "all" else (args.param,)
    rows = []
    header = ["param", "param_value", "A_p_ana", "W_p_ana", "T_d_ana"]
    if args.with_oracle:
        header += ["A_p_sim", "W_p_sim", "T_d_sim"]
    for name in names:
        values = args.values or _sweep_values(name)
        for v in values:
            sc = params.Scenario(params._scenario_name(
                name, v, dict((n, u) for n, _, u in
                              params.SCENARIO_TABLE)[name]), {name: v}, base)
            shape = pulse_model.propagated_pulse(sc.params, k)
            row = [v, shape.A_p, shape.W_p, shape.T_d]
            if args.with_oracle:
                sim = measure_scenario_cached(
                    sc, cache_dir=args.oracle_cache,
                    cells_across=args.cells_across, horizon=args.horizon)
                row += [sim.A_p, sim.W_p, sim.T_d]
            rows.append([name] + row)
    out = args.out or "sweep.csv"
    with open(out, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(row[0] + "," + ",".join(_fmt(v) for v in row[1:])
                     + "\n")
    return 0


def cmd_fit(args):
    base = _load_params(args)
    scenarios = params.expand_scenarios(base)
    if args.subset:
        idx = [int(i) for i in args.subset.split(",")]
        scenarios = [scenarios[i] for i in idx]
    triples = load_cached_triples(args.oracle_cache, scenarios)
    ga = calibration.GAConfig(seed=args.seed)
    result = calibration.fit(scenarios, triples, ga=ga,
                             error_mode=args.error_mode,
                             n_workers=args.workers)
    out = args.out or "kfit.json"
    _write_json(out, {
        "best": {"k_g": result.best.k_g, "k_a": result.best.k_a,
                 "k_w": result.best.k_w, "k_t": result.best.k_t},
        "best_error": result.best_error,
        "error_mode": result.error_mode,
        "config": dataclasses.asdict(ga),
        "history": list(result.history),
    })
    print(json.dumps({"best_error": result.best_error, "out": out}))
    return 0


def cmd_compare(args):
    base = _load_params(args)
    k = _load_k(args.k)
    scenarios = params.expand_scenarios(base)
    triples = load_cached_triples(args.oracle_cache, scenarios)
    rows = []
    sums = np.zeros(3)
    for sc, sim in zip(scenarios, triples):
        ana = pulse_model.propagated_pulse(sc.params, k)
        rel = [abs(a - s) / s for s, a in zip(sim.triple(), ana.triple())]
        sums += rel
        rows.append((sc.name, *sim.triple(), *ana.triple(), *rel))
    report = {
        "mean_rel_err_A_p": sums[0] / len(rows),
        "mean_rel_err_W_p": sums[1] / len(rows),
        "mean_rel_err_T_d": sums[2] / len(rows),
        "n_scenarios": len(rows),
    }
    out = args.out or "compare"
    with open(out + ".csv", "w") as fh:
        fh.write("scenario,A_p_sim,W_p_sim,T_d_sim,A_p_ana,W_p_ana,"
                 "T_d_ana,rel_A_p,rel_W_p,rel_T_d\n")
        for row in rows:
            fh.write(row[0] + "," + ",".join(_fmt(v) for v in row[1:])
                     + "\n")
    _write_json(out + ".json", report)
    print(json.dumps(report, indent=2, sort_keys=True))
    return 0


def cmd_train(args):
    p = _load_params(args)
    if args.T_p is not None:
        p = params.validate(p.replace(T_p=args.T_p))
    k = _load_k(args.k)
    train, _ = pulse_model.pulse_train(p, k, args.n)
    grid = build_grid(p, args.cells_across)
    start = args.window_start
    schedule = GatingSchedule.uniform(start, p.T_g, p.T_p, args.n,
                                      args.horizon)
    snap_t = args.snapshot_t or (start + (args.n - 1) * p.T_p + p.T_g + 1.0,)
    res = run(p, schedule, grid=grid, probe_x=(p.l_ch / 2.0, p.x_s),
              snapshot_times=tuple(snap_t))
    out = args.out or "."
    os.makedirs(out, exist_ok=True)
    j1, j2 = grid.j_mid
    for t, c in res.snapshots.items():
        row = 0.5 * (c[j1, :] + c[j2, :])
        _write_csv(os.path.join(out, f"train_x_t{_fmt(t)}.csv"),
                   ("x_m", "c_mol_m3"), zip(res.x_centers, row))
    for x in (p.l_ch / 2.0, p.x_s):
        _write_csv(os.path.join(out, f"train_t_x{_fmt(x)}.csv"),
                   ("t_s", "c_mol_m3"), zip(res.times, res.probe_series[x]))
    _write_json(os.path.join(out, "train.json"),
                {"d_analytical": train.d, "N": args.n, "T_p": p.T_p,
                 "snapshot_times": list(res.snapshots)})
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="hydrogate")
    ap.add_argument("--version", action="version",
                    version=f"hydrogate {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON parameter file (SI units)")
        sp.add_argument("--out")
        sp.add_argument("--seed", type=int, default=42)
        sp.add_argument("--k", default="paper",
                        help="'paper' or 'refit:FILE'")

    sp = sub.add_parser("hydraulics", help="circuit-analogy report")
    common(sp)
    sp.set_defaults(func=cmd_hydraulics)

    sp = sub.add_parser("analytic", help="closed-form pulse profile")
    common(sp)
    sp.add_argument("--train", type=int, default=0)
    sp.add_argument("--samples", type=int, default=2001)
    sp.set_defaults(func=cmd_analytic)

    sp = sub.add_parser("simulate", help="run the transport oracle")
    common(sp)
    sp.add_argument("--schedule", required=True,
                    help="off-windows 'start:dur[,start:dur...]'")
    sp.add_argument("--horizon", type=float, default=25.0)
    sp.add_argument("--cells-across", type=int, default=20)
    sp.add_argument("--probe-x", type=float, nargs="*")
    sp.add_argument("--snapshot-t", type=float, nargs="*")
    sp.add_argument("--profile-t", type=float, nargs="*",
                    help="times for centerline spatial traces")
    sp.add_argument("--profile-every", type=float, default=0.0)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("measure", help="extract a pulse from a trace")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--kind", choices=("spatial", "temporal"),
                    default="spatial")
    sp.add_argument("--window-start", type=float)
    sp.add_argument("--window-duration", type=float)
    sp.add_argument("--smooth", action="store_true")
    sp.set_defaults(func=cmd_measure)

    sp = sub.add_parser("sweep", help="parameter sweep (analytic/oracle)")
    common(sp)
    sp.add_argument("--param", required=True,
                    help=f"one of {SWEEPABLE} or 'all'")
    sp.add_argument("--values", type=float, nargs="*")
    sp.add_argument("--with-oracle", action="store_true")
    sp.add_argument("--oracle-cache")
    sp.add_argument("--cells-across", type=int, default=20)
    sp.add_argument("--horizon", type=float, default=None,
                    help="default: auto from the estimated travel time")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("fit", help="GA calibration from cached oracle runs")
    common(sp)
    sp.add_argument("--scenarios", default="auto")
    sp.add_argument("--oracle-cache", required=True)
    sp.add_argument("--error-mode", choices=("normalized", "paper_raw"),
                    default="normalized")
    sp.add_argument("--subset", help="comma-separated scenario indices")
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_fit)

    sp = sub.add_parser("compare", help="residuals against cached oracle")
    common(sp)
    sp.add_argument("--oracle-cache", required=True)
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("train", help="successive-pulse oracle run")
    common(sp)
    sp.add_argument("--n", type=int, default=5)
    sp.add_argument("--T-p", type=float, dest="T_p",
                    help="override the gating period")
    sp.add_argument("--window-start", type=float, default=2.0)
    sp.add_argument("--horizon", type=float, default=30.0)
    sp.add_argument("--cells-across", type=int, default=20)
    sp.add_argument("--snapshot-t", type=float, nargs="*")
    sp.set_defaults(func=cmd_train)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except HydrogateError as exc:
        print(json.dumps({"error": type(exc).__name__,
                          "message": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
