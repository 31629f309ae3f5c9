"""Command-line interface.

Subcommands: solve, verify, lp, ensemble, fit, sweep, evt, sdp, analytic.
Exit codes: 0 success, 2 capacity error, 3 config/input error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

from . import analytic, evt
from .bounds import ConstraintAssignment, homogeneous_optimum, solve_lp, verify_assignment
from .fitting import fit_power_law
from .harness import (
    ConfigError,
    EnsembleConfig,
    SampleSchedule,
    evt_pipeline,
    read_csv,
    run_ensemble,
    scaling_sweep,
    sdp_pipeline,
    sweep_rows,
    write_csv,
    write_ensemble_csvs,
)
from .instances import GraphSpec, IsingInstance, encode_maxcut, load_instance
from .parity import layout
from .sdp import c1_sdp_bound, solve_maxcut_sdp
from .solver import CapacityError

EXIT_OK = 0
EXIT_CAPACITY = 2
EXIT_CONFIG = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad arguments, which collides with the
    # capacity-error code; route usage problems to the config exit code
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _emit(doc, out: str | None, name: str) -> None:
    text = json.dumps(doc, indent=1, default=_jsonable)
    if out:
        os.makedirs(out, exist_ok=True)
        path = os.path.join(out, name)
        with open(path, "w") as fh:
            fh.write(text + "\n")
        print(path)
    else:
        print(text)


def _jsonable(obj):
    import numpy as np

    if dataclasses.is_dataclass(obj):
        return dataclasses.asdict(obj)
    if isinstance(obj, frozenset):
        return sorted(map(list, obj))
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj)}")


def _instance_from_args(args) -> IsingInstance:
    if args.instance:
        return load_instance(args.instance)
    if args.ferro:
        n = args.ferro
        return IsingInstance(n=n, couplings={(i, j): -1.0 for i in range(1, n + 1)
                                             for j in range(i + 1, n + 1)}, dense=True)
    if args.antiferro:
        return encode_maxcut(GraphSpec.complete(args.antiferro))
    raise ConfigError("need --instance FILE or one of --ferro N / --antiferro N")


def _add_instance_flags(sub) -> None:
    sub.add_argument("--instance", help="instance JSON file")
    sub.add_argument("--ferro", type=int, help="built-in all J=-1 K_n instance")
    sub.add_argument("--antiferro", type=int, help="built-in all J=+1 K_n instance")


def _load_config(path, expected_type: str) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as ex:
        raise ConfigError(f"cannot read config {path}: {ex}") from ex
    if doc.get("type") != expected_type:
        raise ConfigError(
            f"config {path} has type {doc.get('type')!r}, expected {expected_type!r}")
    return doc


def cmd_solve(args) -> int:
    inst = _instance_from_args(args)
    lay = layout(inst.n)
    report = homogeneous_optimum(inst, lay, k_max=args.kmax, full=args.full)
    if args.lp:
        report.lp = solve_lp(inst, lay, k_max=args.kmax, full=args.full)
    _emit(report.to_dict(), args.out, "bounds_report.json")
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = _instance_from_args(args)
    lay = layout(inst.n)
    if args.assignment:
        with open(args.assignment) as fh:
            doc = json.load(fh)
        assign = ConstraintAssignment.from_map({tuple(p): v for p, v in doc["c_ij"]})
    elif args.c is not None:
        assign = ConstraintAssignment.homogeneous(args.c)
    else:
        raise ConfigError("need --c VALUE or --assignment FILE")
    verdict = verify_assignment(inst, lay, assign, k_max=args.kmax, full=args.full)
    _emit({
        "satisfied": verdict.satisfied,
        "slack": verdict.slack,
        "worst_omega": sorted(map(list, verdict.worst_omega)) if verdict.worst_omega else None,
        "checked_profiles": verdict.checked,
        "family": verdict.family,
    }, args.out, "verify.json")
    return EXIT_OK


def cmd_lp(args) -> int:
    inst = _instance_from_args(args)
    solution = solve_lp(inst, layout(inst.n), k_max=args.kmax, full=args.full)
    _emit(solution.to_dict(), args.out, "lp.json")
    return EXIT_OK


def cmd_ensemble(args) -> int:
    doc = _load_config(args.config, "ensemble")
    cfg = EnsembleConfig.from_dict(doc)
    if args.threads:
        cfg = dataclasses.replace(cfg, parallelism=args.threads)
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, master_seed=args.seed)
    result = run_ensemble(cfg)
    paths = write_ensemble_csvs(result, args.out or ".", stem=doc.get("name", "ensemble"))
    for p in paths:
        print(p)
    return EXIT_OK


def cmd_fit(args) -> int:
    _, rows = read_csv(args.csv)
    points = [(row[args.x], row[args.y]) for row in rows if row.get(args.y) is not None]
    fit = fit_power_law(points)
    _emit({
        "alpha": fit.alpha, "beta": fit.beta, "gamma": fit.gamma,
        "rms": fit.rms, "flagged": fit.flagged, "n_points": len(points),
    }, args.out, "fit.json")
    return EXIT_OK


def cmd_sweep(args) -> int:
    doc = _load_config(args.config, "sweep")
    try:
        cells = scaling_sweep(
            kinds=doc["kinds"],
            ratios=doc["ratios"],
            n_range=list(range(doc["n_range"]["min"], doc["n_range"]["max"] + 1))
            if isinstance(doc["n_range"], dict) else doc["n_range"],
            samples=SampleSchedule.from_json(doc.get("samples", {})),
            master_seed=args.seed if args.seed is not None else int(doc.get("master_seed", 0)),
            k_max=int(doc.get("k_max", 1)),
            parallelism=args.threads or int(doc.get("parallelism", 1)),
        )
    except KeyError as ex:
        raise ConfigError(f"sweep config missing {ex}") from ex
    out = args.out or "."
    os.makedirs(out, exist_ok=True)
    path = os.path.join(out, "sweep.csv")
    write_csv(path, sweep_rows(cells), "sweep")
    print(path)
    return EXIT_OK


def cmd_evt(args) -> int:
    out = args.out or "."
    os.makedirs(out, exist_ok=True)
    if args.config:
        doc = _load_config(args.config, "evt")
        res = evt_pipeline(
            n_range=_range_from(doc["n_range"]),
            samples=SampleSchedule.from_json(doc.get("samples", {})),
            master_seed=args.seed if args.seed is not None else int(doc.get("master_seed", 0)),
            delta=doc.get("delta"),
            parallelism=args.threads or int(doc.get("parallelism", 1)),
        )
        path = os.path.join(out, "evt_curves.csv")
        write_csv(path, res["rows"], "evt")
        cal = res["calibration"]
        _emit({
            "delta": cal.delta,
            "fit_range": list(cal.fit_range),
            "residual_rms": cal.residual,
            "delta_used": res["delta_used"],
        }, out, "evt_calibration.json")
        print(path)
        return EXIT_OK
    rows = evt.model_curve_rows(list(range(args.n_min, args.n_max + 1)), args.delta)
    path = os.path.join(out, "evt_model.csv")
    write_csv(path, rows, "evt")
    print(path)
    return EXIT_OK


def _range_from(obj):
    if isinstance(obj, dict):
        return list(range(int(obj["min"]), int(obj["max"]) + 1, int(obj.get("step", 1))))
    return [int(x) for x in obj]


def cmd_sdp(args) -> int:
    if args.config:
        doc = _load_config(args.config, "sdp")
        rows = sdp_pipeline(
            n_list=_range_from(doc["n_list"]),
            p_edge=float(doc.get("p_edge", 0.4)),
            seeds_per_n=int(doc.get("seeds_per_n", 20)),
            master_seed=args.seed if args.seed is not None else int(doc.get("master_seed", 0)),
            exact_max_n=int(doc.get("exact_max_n", 14)),
        )
        out = args.out or "."
        os.makedirs(out, exist_ok=True)
        path = os.path.join(out, "sdp.csv")
        write_csv(path, rows, "sdp")
        print(path)
        return EXIT_OK
    if args.complete:
        graph = GraphSpec.complete(args.complete)
    elif args.er:
        n, p = args.er.split(",")
        graph = GraphSpec.erdos_renyi(int(n), float(p), seed=args.seed or 0)
    else:
        raise ConfigError("need --config FILE, --complete N or --er N,P")
    result = solve_maxcut_sdp(graph, seed=args.seed or 0)
    doc = dataclasses.asdict(result)
    if graph.n >= 6:
        bound = c1_sdp_bound(graph, seed=args.seed or 0, sdp=result)
        doc["a1_plus"] = bound.a1_plus
        doc["c1_sdp"] = bound.value
    _emit(doc, args.out, "sdp.json")
    return EXIT_OK


def cmd_analytic(args) -> int:
    if args.ferro:
        _emit(dataclasses.asdict(analytic.ferro_limit(args.ferro)), args.out, "analytic.json")
    elif args.antiferro:
        _emit(dataclasses.asdict(analytic.antiferro_limit(args.antiferro)), args.out,
              "analytic.json")
    else:
        raise ConfigError("need --ferro N or --antiferro N")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="paritybounds",
                     description="Minimal parity-encoding constraint strengths")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, instance=False):
        p.add_argument("--out", help="output directory (default: print to stdout)")
        p.add_argument("--seed", type=int, help="override master seed")
        p.add_argument("--threads", type=int, help="worker processes")
        p.add_argument("--kmax", type=int, default=2, help="defect-count range")
        if instance:
            _add_instance_flags(p)

    p = sub.add_parser("solve", help="bounds report for one instance")
    common(p, instance=True)
    p.add_argument("--full", action="store_true", help="sweep every defect count (n <= 8)")
    p.add_argument("--lp", action="store_true", help="attach the inhomogeneous LP solution")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("verify", help="check a constraint assignment")
    common(p, instance=True)
    p.add_argument("--c", type=float, help="homogeneous strength")
    p.add_argument("--assignment", help="per-plaquette JSON from the lp subcommand")
    p.add_argument("--full", action="store_true", help="enumerate all profiles (n <= 6)")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("lp", help="inhomogeneous LP optimum")
    common(p, instance=True)
    p.add_argument("--full", action="store_true", help="full profile family (n <= 6)")
    p.set_defaults(fn=cmd_lp)

    p = sub.add_parser("ensemble", help="run an ensemble config to CSVs")
    common(p)
    p.add_argument("--config", required=True)
    p.set_defaults(fn=cmd_ensemble)

    p = sub.add_parser("fit", help="power-law fit of a CSV column")
    common(p)
    p.add_argument("--csv", required=True)
    p.add_argument("--x", default="n")
    p.add_argument("--y", default="c_minus_1_mean")
    p.set_defaults(fn=cmd_fit)

    p = sub.add_parser("sweep", help="scaling-exponent sweep over distributions")
    common(p)
    p.add_argument("--config", required=True)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("evt", help="extreme-value model curves / calibration")
    common(p)
    p.add_argument("--config")
    p.add_argument("--n-min", type=int, default=4)
    p.add_argument("--n-max", type=int, default=30)
    p.add_argument("--delta", type=float, default=evt.DEFAULT_DELTA)
    p.set_defaults(fn=cmd_evt)

    p = sub.add_parser("sdp", help="MaxCut SDP bound pipeline")
    common(p)
    p.add_argument("--config")
    p.add_argument("--complete", type=int, help="run on K_n")
    p.add_argument("--er", help="run on one ER graph: N,P")
    p.set_defaults(fn=cmd_sdp)

    p = sub.add_parser("analytic", help="closed-form limit values")
    common(p)
    p.add_argument("--ferro", type=int)
    p.add_argument("--antiferro", type=int)
    p.set_defaults(fn=cmd_analytic)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except CapacityError as ex:
        print(f"capacity error: {ex}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ConfigError, FileNotFoundError, ValueError) as ex:
        print(f"config error: {ex}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
