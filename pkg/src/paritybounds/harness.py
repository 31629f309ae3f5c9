"""Ensemble orchestration: sampling, aggregation, sweeps, CSV emission.

A run is fully determined by its config and master seed: every sample gets a
SplitMix64-derived seed from (master_seed, n, sample index), results are
collected in (n, sample) order and aggregated with compensated summation, so
aggregates are bit-identical across reruns and independent of the worker
count.

Capacity errors (enumeration caps, combinatorial budgets) are recorded on the
affected sample's row instead of aborting the run.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .fitting import FitResult, fit_power_law
from .instances import (
    AUTO,
    DistributionSpec,
    GraphSpec,
    encode_maxcut,
    encode_minbisection,
    sample_instance,
)
from .parity import layout
from .rng import derive_seed
from .sdp import c1_sdp_bound, solve_maxcut_sdp, tripartition_a1_upper
from .solver import CapacityError, logical_spectrum, min_over_defect_count
from . import evt

CSV_VERSION = 1

SPECTRUM_QUANTITIES = ("l0", "e", "gap")
KNOWN_QUANTITIES = ("l0", "e", "gap", "a1", "a2", "c_minus_1", "c_minus_2",
                    "c_hat", "upper_bounds", "c1_sdp")


class ConfigError(Exception):
    """Invalid or inconsistent experiment configuration."""


@dataclass(frozen=True)
class SampleSchedule:
    """Samples per size: fixed map, constant, or geometric halving decay."""

    start: float = 1024.0
    minimum: int = 64
    halve_from: int = 4
    per_n: dict | None = None
    constant: int | None = None

    def count(self, n: int) -> int:
        if self.per_n is not None:
            if n not in self.per_n:
                raise ConfigError(f"sample schedule has no entry for n={n}")
            return int(self.per_n[n])
        if self.constant is not None:
            return int(self.constant)
        return max(self.minimum, int(round(self.start * 2.0 ** -(n - self.halve_from))))

    @classmethod
    def from_json(cls, obj) -> "SampleSchedule":
        if isinstance(obj, int):
            return cls(constant=obj)
        if isinstance(obj, dict):
            if "per_n" in obj:
                return cls(per_n={int(k): int(v) for k, v in obj["per_n"].items()})
            return cls(start=float(obj.get("start", 1024)),
                       minimum=int(obj.get("min", 64)),
                       halve_from=int(obj.get("halve_from", 4)))
        raise ConfigError(f"cannot parse sample schedule from {obj!r}")

    def to_json(self):
        if self.per_n is not None:
            return {"per_n": {str(k): v for k, v in self.per_n.items()}}
        if self.constant is not None:
            return self.constant
        return {"start": self.start, "min": self.minimum, "halve_from": self.halve_from}


def _parse_n_range(obj) -> tuple[int, ...]:
    if isinstance(obj, dict):
        step = int(obj.get("step", 1))
        return tuple(range(int(obj["min"]), int(obj["max"]) + 1, step))
    return tuple(int(n) for n in obj)


@dataclass(frozen=True)
class EnsembleConfig:
    """One ensemble study: problem family, sizes, schedule, quantities."""

    n_range: tuple
    problem: str = "couplings"          # couplings | maxcut | minbisection
    dist: DistributionSpec | None = None
    graph: str = "complete"             # complete | erdos_renyi
    p_edge: float = 1.0
    samples: SampleSchedule = field(default_factory=SampleSchedule)
    master_seed: int = 0
    quantities: tuple = ("l0", "e", "gap", "a1", "c_minus_1")
    k_max: int = 1
    budget: int | None = None
    penalty_u: float | str = AUTO
    parallelism: int = 1

    def __post_init__(self):
        if not self.n_range:
            raise ConfigError("empty n_range")
        if self.problem not in ("couplings", "maxcut", "minbisection"):
            raise ConfigError(f"unknown problem {self.problem!r}")
        if self.problem == "couplings" and self.dist is None:
            raise ConfigError("couplings ensembles need a distribution")
        if self.graph not in ("complete", "erdos_renyi"):
            raise ConfigError(f"unknown graph family {self.graph!r}")
        for q in self.quantities:
            if q not in KNOWN_QUANTITIES:
                raise ConfigError(f"unknown quantity {q!r}")
        if "c1_sdp" in self.quantities and self.problem != "maxcut":
            raise ConfigError("c1_sdp is only defined for maxcut ensembles")
        for n in self.n_range:
            if self.samples.count(n) < 2:
                raise ConfigError(f"need >= 2 samples at n={n} for variance estimates")

    @classmethod
    def from_dict(cls, doc: dict) -> "EnsembleConfig":
        try:
            dist = None
            if doc.get("dist") is not None:
                d = doc["dist"]
                kind = d["kind"]
                if "ratio" in d:
                    dist = DistributionSpec.from_ratio(kind, float(d["ratio"]))
                elif kind == "normal":
                    dist = DistributionSpec.normal(float(d["mu"]), float(d["sigma"]))
                elif kind == "uniform":
                    dist = DistributionSpec.uniform(float(d["a"]), float(d["b"]))
                elif kind == "bimodal":
                    dist = DistributionSpec.bimodal(float(d["p"]))
                else:
                    raise ConfigError(f"unknown distribution kind {kind!r}")
            return cls(
                n_range=_parse_n_range(doc["n_range"]),
                problem=doc.get("problem", "couplings"),
                dist=dist,
                graph=doc.get("graph", "complete"),
                p_edge=float(doc.get("p_edge", 1.0)),
                samples=SampleSchedule.from_json(doc.get("samples", {})),
                master_seed=int(doc.get("master_seed", 0)),
                quantities=tuple(doc.get("quantities", ("l0", "e", "gap", "a1", "c_minus_1"))),
                k_max=int(doc.get("k_max", 1)),
                budget=doc.get("budget"),
                penalty_u=doc.get("penalty_u", AUTO),
                parallelism=int(doc.get("parallelism", 1)),
            )
        except (KeyError, TypeError, ValueError) as ex:
            raise ConfigError(f"bad ensemble config: {ex}") from ex


def _build_instance(cfg: EnsembleConfig, n: int, seed: int):
    if cfg.graph == "complete":
        graph = GraphSpec.complete(n)
    else:
        graph = GraphSpec.erdos_renyi(n, cfg.p_edge, seed=derive_seed(seed, 1))
    if cfg.problem == "couplings":
        return sample_instance(cfg.dist, graph, derive_seed(seed, 2)), graph
    if cfg.problem == "maxcut":
        return encode_maxcut(graph), graph
    return encode_minbisection(graph, cfg.penalty_u), graph


def _needed_defect_counts(cfg: EnsembleConfig) -> list[int]:
    ks = set()
    for q in cfg.quantities:
        if q in ("a1", "c_minus_1"):
            ks.add(1)
        elif q in ("a2", "c_minus_2"):
            ks.add(2)
        elif q in ("c_hat", "upper_bounds"):
            ks.update(range(1, cfg.k_max + 1))
    return sorted(ks)


def compute_sample(cfg: EnsembleConfig, n: int, index: int, seed: int) -> dict:
    """One sample record; capacity problems land in the 'error' field."""
    record = {"n": n, "sample": index, "seed": seed, "error": None}
    try:
        inst, graph = _build_instance(cfg, n, seed)
    except ValueError as ex:  # e.g. empty maxcut graph realization
        record["error"] = f"instance: {ex}"
        return record
    try:
        spectrum = logical_spectrum(inst)
    except CapacityError as ex:
        record["error"] = f"capacity: {ex}"
        return record
    for q in SPECTRUM_QUANTITIES:
        if q in cfg.quantities:
            record[q] = getattr(spectrum, q)
    lay = layout(n)
    a_vals = {}
    errors = []
    for k in _needed_defect_counts(cfg):
        try:
            a_vals[k] = min_over_defect_count(inst, lay, k, budget=cfg.budget)
        except CapacityError as ex:
            errors.append(f"capacity a_{k}: {ex}")
    e = spectrum.e
    if "a1" in cfg.quantities and 1 in a_vals:
        record["a1"] = a_vals[1]
    if "a2" in cfg.quantities and 2 in a_vals:
        record["a2"] = a_vals[2]
    if "c_minus_1" in cfg.quantities and 1 in a_vals:
        record["c_minus_1"] = e - a_vals[1]
    if "c_minus_2" in cfg.quantities and 2 in a_vals:
        record["c_minus_2"] = (e - a_vals[2]) / 2.0
    chain_ks = [k for k in range(1, cfg.k_max + 1)]
    if "c_hat" in cfg.quantities and all(k in a_vals for k in chain_ks):
        record["c_hat"] = max((e - a_vals[k]) / k for k in chain_ks)
    if "upper_bounds" in cfg.quantities and all(k in a_vals for k in chain_ks):
        diff0 = (e - inst.offset) - inst.p0()
        record["c_0"] = diff0
        running = -math.inf
        for i in chain_ks:
            running = max(running, (e - a_vals[i]) / i)
            record[f"c_{i}"] = max(running, diff0 / (i + 1))
    if "c1_sdp" in cfg.quantities:
        if n >= 6 and graph.edges():
            bound = c1_sdp_bound(graph, seed=derive_seed(seed, 3))
            record["c1_sdp"] = bound.value
        else:
            errors.append("c1_sdp: needs n >= 6 and a non-empty graph")
    if errors:
        record["error"] = "; ".join(errors)
    return record


def _worker(args):
    return compute_sample(*args)


@dataclass
class EnsembleResult:
    config: EnsembleConfig
    records: list          # one dict per (n, sample)
    aggregates: list       # one dict per n

    def aggregate_points(self, quantity: str) -> list[tuple[int, float]]:
        key = f"{quantity}_mean"
        return [(row["n"], row[key]) for row in self.aggregates if row.get(key) is not None]


def _value_columns(cfg: EnsembleConfig) -> list[str]:
    cols = [q for q in cfg.quantities if q != "upper_bounds"]
    if "upper_bounds" in cfg.quantities:
        cols.extend(f"c_{i}" for i in range(0, cfg.k_max + 1))
    return cols


def run_ensemble(cfg: EnsembleConfig) -> EnsembleResult:
    """Run all samples, deterministically; aggregate means/variances per n."""
    tasks = [(cfg, n, i, derive_seed(cfg.master_seed, n, i))
             for n in cfg.n_range for i in range(cfg.samples.count(n))]
    if cfg.parallelism > 1:
        with ProcessPoolExecutor(max_workers=cfg.parallelism) as pool:
            records = list(pool.map(_worker, tasks, chunksize=16))
    else:
        records = [compute_sample(*t) for t in tasks]
    records.sort(key=lambda r: (r["n"], r["sample"]))
    columns = _value_columns(cfg)
    aggregates = []
    for n in cfg.n_range:
        rows = [r for r in records if r["n"] == n]
        agg = {"n": n, "samples": len(rows),
               "errors": sum(1 for r in rows if r["error"])}
        for q in columns:
            vals = [r[q] for r in rows if q in r]
            agg[f"{q}_count"] = len(vals)
            if not vals:
                agg[f"{q}_mean"] = agg[f"{q}_var"] = agg[f"{q}_se"] = None
                continue
            mean = math.fsum(vals) / len(vals)
            agg[f"{q}_mean"] = mean
            if len(vals) > 1:
                var = math.fsum((v - mean) ** 2 for v in vals) / (len(vals) - 1)
                agg[f"{q}_var"] = var
                agg[f"{q}_se"] = math.sqrt(var / len(vals))
            else:
                agg[f"{q}_var"] = agg[f"{q}_se"] = None
        aggregates.append(agg)
    return EnsembleResult(config=cfg, records=records, aggregates=aggregates)


def write_csv(path, rows: list[dict], kind: str, columns: list[str] | None = None) -> None:
    """Versioned CSV: a comment header line, then a regular header row."""
    if columns is None:
        columns = []
        for row in rows:
            for key in row:
                if key not in columns:
                    columns.append(key)
    with open(path, "w", newline="") as fh:
        fh.write(f"# paritybounds-csv v{CSV_VERSION} kind={kind}\n")
        writer = csv.DictWriter(fh, fieldnames=columns, extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: ("" if row.get(k) is None else row.get(k)) for k in columns})


def read_csv(path) -> tuple[str, list[dict]]:
    """Read a versioned CSV back; numeric fields are parsed when possible."""
    with open(path) as fh:
        header = fh.readline().strip()
        rows = []
        for row in csv.DictReader(fh):
            parsed = {}
            for k, v in row.items():
                if v is None or v == "":
                    parsed[k] = None
                    continue
                try:
                    parsed[k] = float(v) if ("." in v or "e" in v or "E" in v
                                             or "inf" in v or "nan" in v) else int(v)
                except ValueError:
                    parsed[k] = v
            rows.append(parsed)
    return header, rows


def write_ensemble_csvs(result: EnsembleResult, out_dir, stem: str = "ensemble") -> list[str]:
    import os

    os.makedirs(out_dir, exist_ok=True)
    raw_cols = ["n", "sample", "seed"] + _value_columns(result.config) + ["error"]
    raw_path = os.path.join(out_dir, f"{stem}_raw.csv")
    agg_path = os.path.join(out_dir, f"{stem}_aggregate.csv")
    write_csv(raw_path, result.records, "raw", raw_cols)
    write_csv(agg_path, result.aggregates, "aggregate")
    return [raw_path, agg_path]


@dataclass
class SweepCell:
    kind: str
    ratio: float
    fit: FitResult
    points: list


def scaling_sweep(kinds, ratios, n_range, samples: SampleSchedule,
                  master_seed: int = 0, k_max: int = 1,
                  parallelism: int = 1) -> list[SweepCell]:
    """Fit the growth exponent of the mean c_{-1} for each (kind, ratio) cell."""
    cells = []
    for kind_idx, kind in enumerate(kinds):
        for ratio_idx, ratio in enumerate(ratios):
            dist = DistributionSpec.from_ratio(kind, float(ratio))
            cfg = EnsembleConfig(
                n_range=tuple(n_range),
                problem="couplings",
                dist=dist,
                samples=samples,
                master_seed=derive_seed(master_seed, kind_idx, ratio_idx),
                quantities=("c_minus_1",),
                k_max=max(1, k_max),
                parallelism=parallelism,
            )
            result = run_ensemble(cfg)
            points = result.aggregate_points("c_minus_1")
            fit = fit_power_law(points)
            cells.append(SweepCell(kind=kind, ratio=float(ratio), fit=fit, points=points))
    return cells


def sweep_rows(cells: list[SweepCell]) -> list[dict]:
    return [{
        "kind": c.kind,
        "ratio": c.ratio,
        "alpha": c.fit.alpha,
        "beta": c.fit.beta,
        "gamma": c.fit.gamma,
        "rms": c.fit.rms,
        "flagged": c.fit.flagged,
        "n_points": len(c.points),
    } for c in cells]


def evt_pipeline(n_range, samples: SampleSchedule, master_seed: int = 0,
                 delta: float | None = None, parallelism: int = 1) -> dict:
    """Empirical SK means, delta calibration, and model curves side by side."""
    cfg = EnsembleConfig(
        n_range=tuple(n_range),
        problem="couplings",
        dist=DistributionSpec.normal(0.0, 1.0),
        samples=samples,
        master_seed=master_seed,
        quantities=("l0", "e", "gap", "a1", "c_minus_1"),
        parallelism=parallelism,
    )
    result = run_ensemble(cfg)
    l0_points = result.aggregate_points("l0")
    calibration = evt.calibrate_delta(l0_points)
    use_delta = calibration.delta if delta is None else delta
    model = evt.model_curve_rows([row["n"] for row in result.aggregates], use_delta)
    empirical = []
    for row, mrow in zip(result.aggregates, model):
        empirical.append({
            "n": row["n"],
            "l0_mean": row["l0_mean"],
            "l0_se": row["l0_se"],
            "a1_mean": row["a1_mean"],
            "a1_se": row["a1_se"],
            "c_minus_1_mean": row["c_minus_1_mean"],
            "l0_model": mrow["l0_model"],
            "a1_model": mrow["a1_model"],
            "f1": mrow["f1"],
        })
    return {
        "ensemble": result,
        "rows": empirical,
        "calibration": calibration,
        "delta_used": use_delta,
    }


def sdp_pipeline(n_list, p_edge: float = 0.4, seeds_per_n: int = 20,
                 master_seed: int = 0, exact_max_n: int = 14) -> list[dict]:
    """Certified SDP lower bounds on ER graphs, with exact c_{-1} where feasible."""
    rows = []
    for n in n_list:
        for s in range(seeds_per_n):
            gseed = derive_seed(master_seed, n, s)
            graph = GraphSpec.erdos_renyi(n, p_edge, seed=gseed)
            edges = graph.edges()
            row = {"n": n, "seed": s, "n_edges": len(edges)}
            if not edges or n < 6:
                row.update(primal=None, dual=None, a1_plus=None, c1_sdp=None,
                           c_minus_1=None, error="degenerate graph or n < 6")
                rows.append(row)
                continue
            sdp = solve_maxcut_sdp(graph, seed=derive_seed(gseed, 1))
            inst = encode_maxcut(graph)
            row["primal"] = sdp.primal_value
            row["dual"] = sdp.dual_value
            row["a1_plus"] = tripartition_a1_upper(inst)
            row["c1_sdp"] = -2.0 * sdp.dual_value + len(edges) + 2.0 - row["a1_plus"]
            if n <= exact_max_n:
                spectrum = logical_spectrum(inst)
                a1 = min_over_defect_count(inst, layout(n), 1)
                row["c_minus_1"] = spectrum.e - a1
            else:
                row["c_minus_1"] = None
            rows.append(row)
    return rows
