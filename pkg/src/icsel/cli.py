"""Command-line front end and all file serialization.

Commands: fit, path, simulate, metrics, impute. Dataset files are headered
CSV with columns left,right[,trunc] followed by covariate columns; `right`
accepts the literal `inf` for right-censored subjects. Floats are written
with 17 significant digits so outputs are reproducible bit for bit.

Exit codes: 0 ok, 2 parse error, 3 validation error, 4 degenerate support,
5 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .data import Dataset, StandardizationRecord, standardize, validate
from .em import EMWorkspace
from .errors import (
    DegenerateSupportError,
    NumericalError,
    ParseError,
    ValidationError,
)
from .metrics import FitReport, aggregate, hazard_sup_distance, score
from .path import PathResult, adaptive_lasso_pipeline, run_path
from .simulate import (
    PRESETS,
    ScenarioConfig,
    impute_genotypes,
    make_replicate,
    midpoint_impute,
    replicate_seeds,
    scenario_from_preset,
)
from .support import maximal_intersections, maximal_intersections_truncated

THREADS_ENV = "ICSEL_THREADS"
FAMILY_CHOICES = ("lasso", "adaptive_lasso", "scad", "mcp")


def _fmt(x) -> str:
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def default_threads() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValidationError(f"{THREADS_ENV} must be an integer, got {env!r}")
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# serialization


def read_dataset_csv(path) -> tuple[Dataset, list[str]]:
    """Parse a dataset CSV; raises ParseError with a 1-based line number."""
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    reader = csv.reader(lines)
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError(f"{path}: empty file")
    header = [h.strip() for h in header]
    if len(header) < 3 or header[0] != "left" or header[1] != "right":
        raise ParseError(
            f"{path}:1: header must start with left,right and have at least one covariate"
        )
    has_trunc = len(header) > 2 and header[2] == "trunc"
    first_cov = 3 if has_trunc else 2
    names = header[first_cov:]
    if not names:
        raise ParseError(f"{path}:1: no covariate columns found")
    left, right, trunc, rows = [], [], [], []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise ParseError(
                f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}"
            )
        try:
            values = [float(v) for v in row]
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: {exc}") from exc
        left.append(values[0])
        right.append(values[1])
        trunc.append(values[2] if has_trunc else 0.0)
        rows.append(values[first_cov:])
    if not rows:
        raise ParseError(f"{path}: no data rows")
    return Dataset(left=left, right=right, covariates=np.array(rows), truncation=trunc), names


def write_dataset_csv(path, dataset: Dataset, names: list[str] | None = None) -> None:
    names = names or [f"z{j + 1}" for j in range(dataset.p)]
    has_trunc = bool(np.any(dataset.truncation > 0))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        head = ["left", "right"] + (["trunc"] if has_trunc else []) + list(names)
        writer.writerow(head)
        for i in range(dataset.n):
            row = [_fmt(dataset.left[i]), _fmt(dataset.right[i])]
            if has_trunc:
                row.append(_fmt(dataset.truncation[i]))
            row.extend(_fmt(v) for v in dataset.covariates[i])
            writer.writerow(row)


def write_midpoint_csv(path, dataset: Dataset, names: list[str] | None = None) -> None:
    """Midpoint-imputed (time, event) export for right-censored-data fitters."""
    names = names or [f"z{j + 1}" for j in range(dataset.p)]
    time, event = midpoint_impute(dataset)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time", "event"] + list(names))
        for i in range(dataset.n):
            writer.writerow(
                [_fmt(time[i]), str(int(event[i]))]
                + [_fmt(v) for v in dataset.covariates[i]]
            )


def read_matrix_csv(path, allow_nan: bool = False) -> tuple[np.ndarray, list[str] | None]:
    """Numeric matrix CSV; a non-numeric first row is treated as a header."""
    path = Path(path)
    try:
        lines = [ln for ln in path.read_text().splitlines() if ln.strip()]
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if not lines:
        raise ParseError(f"{path}: empty file")
    rows = list(csv.reader(lines))
    header = None

    def parse_cell(cell, lineno):
        cell = cell.strip()
        if cell == "" or cell.lower() in ("na", "nan"):
            if allow_nan:
                return math.nan
            raise ParseError(f"{path}:{lineno}: missing value")
        try:
            return float(cell)
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: {exc}") from exc

    try:
        first = [parse_cell(c, 1) for c in rows[0]]
        data_rows = rows
        start = 1
    except ParseError:
        header = [c.strip() for c in rows[0]]
        data_rows = rows[1:]
        start = 2
        if not data_rows:
            raise ParseError(f"{path}: no data rows")
        first = None
    width = len(rows[0])
    out = []
    for lineno, row in enumerate(data_rows, start=start):
        if len(row) != width:
            raise ParseError(f"{path}:{lineno}: expected {width} fields, got {len(row)}")
        out.append([parse_cell(c, lineno) for c in row])
    if first is not None:
        out[0] = first
    return np.array(out, dtype=float), header


def write_matrix_csv(path, matrix: np.ndarray, header: list[str] | None = None) -> None:
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if header is not None:
            writer.writerow(header)
        for row in matrix:
            writer.writerow([_fmt(v) for v in row])


def write_path_csv(path, result: PathResult) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["index", "theta", "df", "loglik", "gic", "iterations", "converged", "selected"]
        )
        for r in range(len(result.thetas)):
            writer.writerow(
                [
                    r + 1,
                    _fmt(result.thetas[r]),
                    int(result.df[r]),
                    _fmt(result.loglik[r]),
                    _fmt(result.gic[r]),
                    int(result.iterations[r]),
                    int(bool(result.converged[r])),
                    int(r == result.selected),
                ]
            )


def _json_ready(obj):
    if isinstance(obj, np.ndarray):
        return [_json_ready(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, dict):
        return {k: _json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(v) for v in obj]
    return obj


def model_json(
    result: PathResult,
    record: StandardizationRecord | None,
    names: list[str],
) -> dict:
    state = result.selected_state
    beta_std = state.beta
    if record is not None:
        beta_orig = record.destandardize_beta(beta_std)
        lam_orig = state.lam * record.baseline_factor(beta_std)
        std_block = {
            "center": record.center,
            "scale": record.scale,
            "constant": record.constant,
        }
    else:
        beta_orig = beta_std
        lam_orig = state.lam
        std_block = None
    nonzero = {names[j]: float(beta_orig[j]) for j in np.flatnonzero(beta_orig)}
    sel = result.selected
    doc = {
        "family": result.family,
        "alpha": result.alpha,
        "theta_max": result.theta_max,
        "selected_index": sel + 1,
        "selected_theta": float(result.thetas[sel]),
        "df": int(result.df[sel]),
        "loglik": float(result.loglik[sel]),
        "gic": float(result.gic[sel]),
        "converged": bool(result.converged[sel]),
        "iterations": int(result.iterations[sel]),
        "selected_covariates": nonzero,
        "beta_original_scale": beta_orig,
        "beta_standardized": beta_std,
        "baseline": {
            "lower": state.support.lower,
            "upper": state.support.upper,
            "lambda_standardized": state.lam,
            "lambda_original_scale": lam_orig,
        },
        "standardization": std_block,
        "warnings": list(result.warnings),
        "degenerate": result.degenerate,
    }
    return _json_ready(doc)


def write_model_json(path, result, record, names) -> None:
    with open(path, "w") as fh:
        json.dump(model_json(result, record, names), fh, indent=1)
        fh.write("\n")


# ---------------------------------------------------------------------------
# run configuration


@dataclass
class RunConfig:
    """Validated command configuration; exactly one command per run."""

    command: str
    input: str | None = None
    output_model: str | None = None
    output_path_csv: str | None = None
    output: str | None = None
    output_dir: str | None = None
    family: str | None = None
    alpha: float | None = None
    standardize: bool = True
    truncation: bool = False
    unpenalized: list[str] = field(default_factory=list)
    penalty_factors: str | None = None
    seed: int | None = None
    replicates: int | None = None
    threads: int = 1
    preset: str | None = None
    n: int | None = None
    p: int | None = None
    rho: float | None = None
    beta: str | None = None
    fit_families: list[str] = field(default_factory=list)
    emit_data: bool = False
    emit_midpoint: bool = False
    estimates: str | None = None
    truth: str | None = None
    tol: float = 0.0
    mode: str | None = None

    def require(self, **fields) -> None:
        for name, ok in fields.items():
            if not ok:
                raise ValidationError(f"{self.command}: missing or invalid --{name}")


def _penalty_factors_for(config: RunConfig, names: list[str], p: int) -> np.ndarray:
    factors = np.ones(p)
    if config.penalty_factors:
        mat, _ = read_matrix_csv(config.penalty_factors)
        flat = mat.ravel()
        if flat.size != p:
            raise ValidationError(
                f"penalty factor file has {flat.size} entries for {p} covariates"
            )
        factors = flat
    for raw in config.unpenalized:
        name = raw.strip()
        if not name:
            continue
        if name not in names:
            raise ValidationError(f"--unpenalized column {name!r} not in the input header")
        factors[names.index(name)] = 0.0
    return factors


def _prepare_dataset(config: RunConfig):
    dataset, names = read_dataset_csv(config.input)
    factors = _penalty_factors_for(config, names, dataset.p)
    dataset = dataset.replace(penalty_factors=factors)
    violations = validate(dataset)
    if violations:
        raise ValidationError("; ".join(violations))
    if not config.truncation and np.any(dataset.truncation > 0):
        raise ValidationError(
            "input has positive trunc values; rerun with --truncation to honor them"
        )
    record = None
    if config.standardize:
        dataset, record = standardize(dataset)
    if config.truncation and np.any(dataset.truncation > 0):
        support = maximal_intersections_truncated(dataset)
    else:
        support = maximal_intersections(dataset)
    if support.m == 0:
        raise DegenerateSupportError(
            "no maximal intersection with a finite right endpoint exists"
        )
    return dataset, names, record, support


def _fit_path(config: RunConfig, dataset, support) -> PathResult:
    if config.family == "adaptive_lasso":
        return adaptive_lasso_pipeline(dataset, support)
    return run_path(dataset, support, config.family, alpha=config.alpha)


def cmd_fit(config: RunConfig) -> int:
    config.require(input=bool(config.input), family=config.family in FAMILY_CHOICES)
    dataset, names, record, support = _prepare_dataset(config)
    result = _fit_path(config, dataset, support)
    write_model_json(config.output_model or "model.json", result, record, names)
    write_path_csv(config.output_path_csv or "path.csv", result)
    return 0


def cmd_path(config: RunConfig) -> int:
    config.require(input=bool(config.input), family=config.family in FAMILY_CHOICES)
    dataset, names, record, support = _prepare_dataset(config)
    result = _fit_path(config, dataset, support)
    write_path_csv(config.output_path_csv or "path.csv", result)
    return 0


def cmd_metrics(config: RunConfig) -> int:
    config.require(estimates=bool(config.estimates), truth=bool(config.truth))
    est, _ = read_matrix_csv(config.estimates)
    truth, _ = read_matrix_csv(config.truth)
    truth = truth.ravel()
    if est.shape[1] != truth.size:
        raise ValidationError(
            f"estimates have {est.shape[1]} columns but truth has {truth.size}"
        )
    reports = [score(row, truth, tol=config.tol) for row in est]
    agg = aggregate(reports)
    out = config.output or "report.csv"
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["row", "l1_error", "l2_error", "fp", "fn"])
        for i, rep in enumerate(reports):
            writer.writerow(
                [i + 1, _fmt(rep.l1_error), _fmt(rep.l2_error), rep.fp, rep.fn]
            )
        writer.writerow(
            ["mean"] + [_fmt(agg.means[k]) for k in ("l1_error", "l2_error", "fp", "fn")]
        )
        writer.writerow(
            ["se"] + [_fmt(agg.ses[k]) for k in ("l1_error", "l2_error", "fp", "fn")]
        )
    return 0


def cmd_impute(config: RunConfig) -> int:
    config.require(input=bool(config.input), mode=config.mode in ("genotype", "midpoint"))
    out = config.output or "imputed.csv"
    if config.mode == "genotype":
        config.require(seed=config.seed is not None)
        mat, header = read_matrix_csv(config.input, allow_nan=True)
        rng = np.random.default_rng(np.random.SeedSequence(config.seed))
        filled = impute_genotypes(mat, rng)
        write_matrix_csv(out, filled, header=header)
    else:
        dataset, names = read_dataset_csv(config.input)
        violations = validate(dataset)
        if violations:
            raise ValidationError("; ".join(violations))
        write_midpoint_csv(out, dataset, names)
    return 0


# ---------------------------------------------------------------------------
# simulation campaigns


def _scenario_from_config(config: RunConfig) -> ScenarioConfig:
    overrides = {}
    if config.n is not None:
        overrides["n"] = config.n
    if config.p is not None:
        overrides["p"] = config.p
    if config.rho is not None:
        overrides["rho"] = config.rho
    if config.beta is not None:
        overrides["beta"] = config.beta
    if config.replicates is not None:
        overrides["replicates"] = config.replicates
    overrides["seed"] = config.seed
    if config.preset:
        return scenario_from_preset(config.preset, **overrides)
    for req in ("n", "p", "rho"):
        if req not in overrides:
            raise ValidationError(f"simulate without --preset needs --{req}")
    overrides.setdefault("beta", "b6")
    overrides.setdefault("replicates", 1)
    return ScenarioConfig(**overrides)


def _replicate_worker(payload):
    (scenario, seed_seq, rep_index, families, do_standardize, output_dir,
     emit_data, emit_midpoint) = payload
    dataset_raw, beta_true, _ = make_replicate(scenario, seed_seq)
    names = [f"z{j + 1}" for j in range(dataset_raw.p)]
    if output_dir is not None:
        tag = f"rep{rep_index:04d}"
        if emit_data:
            write_dataset_csv(Path(output_dir) / f"data_{tag}.csv", dataset_raw, names)
        if emit_midpoint:
            write_midpoint_csv(Path(output_dir) / f"midpoint_{tag}.csv", dataset_raw, names)
    rc_rate = float(np.mean(~np.isfinite(dataset_raw.right)))
    lc_rate = float(np.mean(dataset_raw.left == 0))
    out = {
        "replicate": rep_index,
        "rc_rate": rc_rate,
        "lc_rate": lc_rate,
        "families": {},
    }
    if not families:
        return out
    record = None
    dataset = dataset_raw
    if do_standardize:
        dataset, record = standardize(dataset_raw)
    support = maximal_intersections(dataset)
    ws = EMWorkspace(dataset, support)
    lasso_res = None
    if "lasso" in families or "adaptive_lasso" in families:
        lasso_res = run_path(dataset, support, "lasso", workspace=ws)
    for fam in families:
        if fam == "lasso":
            res = lasso_res
        elif fam == "adaptive_lasso":
            res = adaptive_lasso_pipeline(dataset, support, workspace=ws, lasso_path=lasso_res)
        else:
            res = run_path(dataset, support, fam, workspace=ws)
        state = res.selected_state
        if record is not None:
            beta_raw = record.destandardize_beta(state.beta)
            lam_raw = state.lam * record.baseline_factor(state.beta)
        else:
            beta_raw, lam_raw = state.beta, state.lam
        report = score(beta_raw, beta_true)
        report.lambda_hat_curve = np.column_stack([support.upper, np.cumsum(lam_raw)])
        out["families"][fam] = {
            "report": report,
            "hazard_sup": hazard_sup_distance(
                support, lam_raw, scenario.weibull_eta, scenario.weibull_kappa
            ),
            "selected_theta": float(res.thetas[res.selected]),
            "selected_index": res.selected + 1,
            "df": int(res.df[res.selected]),
            "converged_points": int(np.count_nonzero(res.converged)),
            "warnings": list(res.warnings),
        }
    return out


@dataclass
class CampaignResult:
    scenario: ScenarioConfig
    families: list[str]
    replicate_results: list[dict]
    aggregates: dict[str, "object"]


def run_campaign(
    scenario: ScenarioConfig,
    families: list[str],
    output_dir=None,
    threads: int = 1,
    do_standardize: bool = True,
    emit_data: bool = False,
    emit_midpoint: bool = False,
) -> CampaignResult:
    """Generate, fit and score every replicate; optionally write the file set.

    Replicates are independent: each gets its own spawned seed substream, so
    results do not depend on the worker count.
    """
    for fam in families:
        if fam not in FAMILY_CHOICES:
            raise ValidationError(f"unknown family {fam!r}")
    if output_dir is not None:
        output_dir = Path(output_dir)
        output_dir.mkdir(parents=True, exist_ok=True)
    seeds = replicate_seeds(scenario)
    payloads = [
        (scenario, seeds[r], r, list(families), do_standardize,
         None if output_dir is None else str(output_dir), emit_data, emit_midpoint)
        for r in range(scenario.replicates)
    ]
    if threads > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_replicate_worker, payloads))
    else:
        results = [_replicate_worker(pl) for pl in payloads]
    aggregates = {}
    for fam in families:
        reports = [res["families"][fam]["report"] for res in results]
        aggregates[fam] = aggregate(reports)
    if output_dir is not None:
        _write_campaign_files(output_dir, scenario, families, results, aggregates)
    return CampaignResult(
        scenario=scenario,
        families=list(families),
        replicate_results=results,
        aggregates=aggregates,
    )


def _write_campaign_files(output_dir, scenario, families, results, aggregates):
    sup_means = {}
    for fam in families:
        sups = np.array([res["families"][fam]["hazard_sup"] for res in results])
        sup_means[fam] = (float(sups.mean()), float(np.median(sups)))
    with open(output_dir / "summary.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["family", "l1_mean", "l1_se", "l2_mean", "l2_se",
             "fp_mean", "fp_se", "fn_mean", "fn_se", "hazard_sup_mean"]
        )
        for fam in families:
            agg = aggregates[fam]
            writer.writerow(
                [fam]
                + [_fmt(agg.means["l1_error"]), _fmt(agg.ses["l1_error"])]
                + [_fmt(agg.means["l2_error"]), _fmt(agg.ses["l2_error"])]
                + [_fmt(agg.means["fp"]), _fmt(agg.ses["fp"])]
                + [_fmt(agg.means["fn"]), _fmt(agg.ses["fn"])]
                + [_fmt(sup_means[fam][0])]
            )
    with open(output_dir / "replicates.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["replicate", "family", "l1_error", "l2_error", "fp", "fn",
             "hazard_sup", "selected_theta", "selected_index", "df",
             "converged_points", "rc_rate"]
        )
        for res in results:
            for fam in families:
                info = res["families"][fam]
                rep: FitReport = info["report"]
                writer.writerow(
                    [res["replicate"] + 1, fam, _fmt(rep.l1_error), _fmt(rep.l2_error),
                     rep.fp, rep.fn, _fmt(info["hazard_sup"]),
                     _fmt(info["selected_theta"]), info["selected_index"], info["df"],
                     info["converged_points"], _fmt(res["rc_rate"])]
                )
    with open(output_dir / "censoring.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["replicate", "right_censored_rate", "left_censored_rate"])
        for res in results:
            writer.writerow(
                [res["replicate"] + 1, _fmt(res["rc_rate"]), _fmt(res["lc_rate"])]
            )
    true_idx = np.flatnonzero(scenario.beta_true())
    coef_names = [f"z{j + 1}" for j in true_idx]
    for fam in families:
        mat = np.stack(
            [res["families"][fam]["report"].beta_hat_on_true_support for res in results]
        )
        write_matrix_csv(output_dir / f"estimates_{fam}.csv", mat, header=coef_names)
    manifest = {
        "scenario": {
            "n": scenario.n, "p": scenario.p, "rho": scenario.rho,
            "beta": scenario.beta, "replicates": scenario.replicates,
            "seed": scenario.seed, "weibull_eta": scenario.weibull_eta,
            "weibull_kappa": scenario.weibull_kappa,
            "maf_low": scenario.maf_low, "maf_high": scenario.maf_high,
            "num_inspections": scenario.num_inspections,
        },
        "families": list(families),
    }
    with open(output_dir / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=1)
        fh.write("\n")


def cmd_simulate(config: RunConfig) -> int:
    config.require(seed=config.seed is not None, output_dir=bool(config.output_dir))
    scenario = _scenario_from_config(config)
    run_campaign(
        scenario,
        config.fit_families,
        output_dir=config.output_dir,
        threads=config.threads,
        do_standardize=config.standardize,
        emit_data=config.emit_data,
        emit_midpoint=config.emit_midpoint,
    )
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _add_fit_args(sub):
    sub.add_argument("--input", required=True, help="dataset CSV")
    sub.add_argument("--family", required=True,
                     type=lambda s: s.replace("-", "_"), choices=FAMILY_CHOICES)
    sub.add_argument("--alpha", type=float, default=None)
    sub.add_argument("--no-standardize", dest="standardize", action="store_false")
    sub.add_argument("--truncation", action="store_true",
                     help="honor the trunc column (left truncation)")
    sub.add_argument("--unpenalized", default="",
                     help="comma-separated covariate names left unpenalized")
    sub.add_argument("--penalty-factors", default=None,
                     help="one-line CSV of per-covariate penalty factors")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="icsel",
        description="Penalized variable selection for interval-censored "
                    "proportional-hazards models",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    fit = subs.add_parser("fit", help="fit one penalty family, emit model + path")
    _add_fit_args(fit)
    fit.add_argument("--output-model", default="model.json")
    fit.add_argument("--output-path", dest="output_path_csv", default="path.csv")

    pathcmd = subs.add_parser("path", help="fit and emit the theta path table only")
    _add_fit_args(pathcmd)
    pathcmd.add_argument("--output-path", dest="output_path_csv", default="path.csv")

    sim = subs.add_parser("simulate", help="run a simulation campaign")
    sim.add_argument("--preset", choices=sorted(PRESETS), default=None)
    sim.add_argument("--n", type=int, default=None)
    sim.add_argument("--p", type=int, default=None)
    sim.add_argument("--rho", type=float, default=None)
    sim.add_argument("--beta", choices=("b6", "b12"), default=None)
    sim.add_argument("--replicates", type=int, default=None)
    sim.add_argument("--seed", type=int, required=True)
    sim.add_argument("--fit", default="",
                     help="comma-separated families to fit on each replicate")
    sim.add_argument("--output-dir", required=True)
    sim.add_argument("--emit-data", action="store_true")
    sim.add_argument("--midpoint", dest="emit_midpoint", action="store_true",
                     help="write midpoint-imputed exports per replicate")
    sim.add_argument("--no-standardize", dest="standardize", action="store_false")
    sim.add_argument("--threads", type=int, default=None)

    met = subs.add_parser("metrics", help="score an estimates matrix against a truth row")
    met.add_argument("--estimates", required=True)
    met.add_argument("--truth", required=True)
    met.add_argument("--tol", type=float, default=0.0)
    met.add_argument("--output", default="report.csv")

    imp = subs.add_parser("impute", help="genotype or midpoint imputation utility")
    imp.add_argument("--mode", choices=("genotype", "midpoint"), required=True)
    imp.add_argument("--input", required=True)
    imp.add_argument("--output", default="imputed.csv")
    imp.add_argument("--seed", type=int, default=None)

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    fams = [f.replace("-", "_") for f in getattr(args, "fit", "").split(",") if f.strip()]
    threads = getattr(args, "threads", None)
    return RunConfig(
        command=args.command,
        input=getattr(args, "input", None),
        output_model=getattr(args, "output_model", None),
        output_path_csv=getattr(args, "output_path_csv", None),
        output=getattr(args, "output", None),
        output_dir=getattr(args, "output_dir", None),
        family=getattr(args, "family", None),
        alpha=getattr(args, "alpha", None),
        standardize=getattr(args, "standardize", True),
        truncation=getattr(args, "truncation", False),
        unpenalized=[s for s in getattr(args, "unpenalized", "").split(",") if s.strip()],
        penalty_factors=getattr(args, "penalty_factors", None),
        seed=getattr(args, "seed", None),
        replicates=getattr(args, "replicates", None),
        threads=threads if threads is not None else default_threads(),
        preset=getattr(args, "preset", None),
        n=getattr(args, "n", None),
        p=getattr(args, "p", None),
        rho=getattr(args, "rho", None),
        beta=getattr(args, "beta", None),
        fit_families=fams,
        emit_data=getattr(args, "emit_data", False),
        emit_midpoint=getattr(args, "emit_midpoint", False),
        estimates=getattr(args, "estimates", None),
        truth=getattr(args, "truth", None),
        tol=getattr(args, "tol", 0.0),
        mode=getattr(args, "mode", None),
    )


_COMMANDS = {
    "fit": cmd_fit,
    "path": cmd_path,
    "simulate": cmd_simulate,
    "metrics": cmd_metrics,
    "impute": cmd_impute,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = config_from_args(args)
    try:
        return _COMMANDS[config.command](config)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, ValueError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 3
    except DegenerateSupportError as exc:
        print(f"degenerate support: {exc}", file=sys.stderr)
        return 4
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
