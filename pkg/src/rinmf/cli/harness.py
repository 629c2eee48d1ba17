"""Experiment orchestration: variants x restarts on shared initializations."""
import dataclasses
import json
import logging
import os
import platform
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .. import __version__
from ..errors import ConfigError, DivergenceError
from ..grouping import build_A, build_ideal, kmeans_rules, kmeans_rules_supervised, rfa_assign
from ..metrics import avg_corr_difference, evaluate, representation_error, row_sparseness
from ..rules import build_P
from ..solvers import RFA_VARIANTS, VARIANTS, Constraints, SolverConfig, init_factors, solve
from . import io

log = logging.getLogger(__name__)

NAN = float("nan")


@dataclass
class ExperimentSpec:
    data: str
    out: str
    rules: Optional[str] = None
    variants: list = field(default_factory=lambda: ["D", "MU"])
    k: Optional[int] = None
    per_class_k: Optional[dict] = None
    grouping: str = "kmeans"  # kmeans | rfa | explicit
    clusters: Optional[str] = None
    restarts: int = 10
    seed_base: int = 0
    c: float = 1.0
    max_iters: int = 50000
    tol: float = 1e-8
    eps: float = 1e-9
    normalize_f: bool = False
    hals_literal: bool = False
    gd_literal: bool = False
    sparseness: Optional[float] = None
    reference: str = "D"
    kmeans_n_init: int = 10
    workers: int = 1

    def validate(self):
        if self.restarts < 1:
            raise ConfigError("restarts must be at least 1")
        bad = [v for v in self.variants if v not in VARIANTS]
        if bad:
            raise ConfigError(f"unknown variant(s) {bad}; choose from {sorted(VARIANTS)}")
        if not self.variants:
            raise ConfigError("no variants requested")
        if self.grouping not in ("kmeans", "rfa", "explicit"):
            raise ConfigError(f"unknown grouping {self.grouping!r}")
        needs_rules = [v for v in self.variants if VARIANTS[v][1] != "none"]
        if needs_rules and self.rules is None:
            raise ConfigError(f"variants {needs_rules} need a rule file")
        if self.grouping == "explicit" and self.clusters is None:
            raise ConfigError("explicit grouping needs a clusters file")
        if self.grouping != "explicit" and self.rules is not None:
            if self.k is None and not self.per_class_k:
                raise ConfigError("give k or per-class k")

    def to_dict(self):
        return dataclasses.asdict(self)


@dataclass
class RunResult:
    variant: str
    restart: int
    seed: int
    lam: float
    iterations: int
    converged: bool
    diverged: bool
    re: float
    de: float
    corr: list
    mean_corr: float
    seconds: float = 0.0
    adc: float = NAN


def _resolve_k(spec, grouping):
    if grouping is not None:
        return grouping.k
    if spec.k is None:
        raise ConfigError("k is required")
    return spec.k


def _base_grouping(spec, rs):
    if rs is None:
        return None
    if spec.grouping == "explicit":
        return io.load_grouping(spec.clusters, rs)
    if spec.grouping == "rfa":
        return None
    if spec.per_class_k:
        return kmeans_rules_supervised(rs, spec.per_class_k, seed=spec.seed_base, n_init=spec.kmeans_n_init)
    return kmeans_rules(rs, spec.k, seed=spec.seed_base, n_init=spec.kmeans_n_init)


def _constraints(mode, grouping, rs, m):
    if mode == "none":
        return Constraints.none()
    if mode == "ideal":
        return Constraints.from_ideal(build_ideal(grouping, m))
    return Constraints.from_cost(build_P(rs), build_A(grouping, rs))


def _solver_config(spec, variant, k, seed, target):
    return SolverConfig(
        variant=variant,
        k=k,
        lambda_c=spec.c,
        max_iters=spec.max_iters,
        tolerance=spec.tol,
        epsilon=spec.eps,
        normalize_f=spec.normalize_f,
        seed=seed,
        target_sparseness=target,
        hals_literal=spec.hals_literal,
        gd_literal=spec.gd_literal,
    )


def _run_cell(args):
    x, cfg, cons, F0, G0, ideal, restart = args
    t0 = time.perf_counter()
    try:
        fm = solve(x, cfg, cons, F0, G0)
    except DivergenceError as exc:
        log.warning("%s restart %d diverged: %s", cfg.variant, restart, exc)
        return RunResult(cfg.variant, restart, cfg.seed, NAN, exc.iteration or 0, False, True,
                         NAN, NAN, [NAN] * cfg.k, NAN, time.perf_counter() - t0)
    lam = fm.lam
    if ideal is not None:
        rep = evaluate(x, fm.F, fm.G, ideal, iterations=fm.iterations_run)
        re, de, corr, mc = rep.re, rep.de, rep.corr, rep.mean_corr
    else:
        re, de, corr, mc = representation_error(x, fm.F, fm.G), NAN, [NAN] * cfg.k, NAN
    return RunResult(cfg.variant, restart, cfg.seed, lam, fm.iterations_run, fm.converged, False,
                     re, de, corr, mc, time.perf_counter() - t0)


def plan_cells(spec, x, rs):
    """All (variant, restart) solver inputs; every variant of a restart shares F0, G0."""
    m, n = x.shape
    base = _base_grouping(spec, rs)
    k = _resolve_k(spec, base)
    if spec.per_class_k and spec.k is not None and sum(spec.per_class_k.values()) != spec.k:
        raise ConfigError("per-class k values do not sum to k")
    class_count = len(spec.per_class_k) if spec.per_class_k else 0
    cells, groupings = [], {}
    for restart in range(spec.restarts):
        seed = spec.seed_base + restart
        F0, G0 = init_factors(m, n, k, seed)
        rfa = None
        for variant in spec.variants:
            use_rfa = rs is not None and (variant in RFA_VARIANTS or spec.grouping == "rfa")
            if use_rfa and rfa is None:
                rfa = rfa_assign(rs, F0, k, class_count)
            g = rfa if use_rfa else base
            groupings[(variant, restart)] = g
            ideal = None if g is None else build_ideal(g, m)
            mode = VARIANTS[variant][1]
            cons = _constraints(mode, g, rs, m)
            target = spec.sparseness
            if variant == "SP" and target is None:
                sp = row_sparseness(ideal) if ideal is not None and k >= 2 else []
                target = float(np.mean(sp)) if sp else 0.5
            cfg = _solver_config(spec, variant, k, seed, target)
            cells.append((x, cfg, cons, F0, G0, ideal, restart))
    return cells, groupings, k


def run_experiment(spec):
    """Run every variant on every restart; returns ``(runs, summary_rows, k)``."""
    spec.validate()
    x = io.load_dataset(spec.data)
    rs = io.load_rules(spec.rules, x.shape[0]) if spec.rules else None
    cells, _, k = plan_cells(spec, x, rs)
    if spec.workers > 1:
        with ProcessPoolExecutor(spec.workers) as pool:
            runs = list(pool.map(_run_cell, cells))
    else:
        runs = [_run_cell(c) for c in cells]

    by_restart = {}
    for r in runs:
        by_restart.setdefault(r.restart, {})[r.variant] = r
    for r in runs:
        ref = by_restart[r.restart].get(spec.reference)
        if ref is not None and not (r.diverged or ref.diverged) and not np.isnan(r.mean_corr):
            r.adc = avg_corr_difference(ref.corr, r.corr)
    return runs, summarize(spec, runs, k), k


def _mean_std(values):
    a = np.array(values, dtype=float)
    a = a[~np.isnan(a)]
    if a.size == 0:
        return NAN, NAN
    return float(a.mean()), float(a.std())


SUMMARY_HEADER = [
    "variant", "k", "c", "restarts", "diverged",
    "iters_mean", "iters_std", "re_mean", "re_std", "de_mean", "de_std",
    "corr_mean", "corr_std", "adc_mean", "adc_std",
]
RUNS_HEADER = ["variant", "restart", "seed", "lambda", "iterations", "converged", "diverged",
               "re", "de", "mean_corr", "adc"]


def summarize(spec, runs, k):
    rows = []
    for variant in spec.variants:
        rr = [r for r in runs if r.variant == variant]
        row = [variant, k, spec.c, len(rr), sum(r.diverged for r in rr)]
        for attr in ("iterations", "re", "de", "mean_corr", "adc"):
            row.extend(_mean_std([getattr(r, attr) for r in rr]))
        rows.append(row)
    return rows


ARTIFACTS = ("summary.csv", "runs.csv", "correspondence.csv", "report.json")


def write_reports(spec, runs, summary, k):
    os.makedirs(spec.out, exist_ok=True)
    out = spec.out
    io.write_table(os.path.join(out, "summary.csv"), SUMMARY_HEADER, summary)
    io.write_table(
        os.path.join(out, "runs.csv"),
        RUNS_HEADER,
        [[r.variant, r.restart, r.seed, r.lam, r.iterations, r.converged, r.diverged,
          r.re, r.de, r.mean_corr, r.adc] for r in runs],
    )
    io.write_table(
        os.path.join(out, "correspondence.csv"),
        ["variant", "restart", "factor", "corr"],
        [[r.variant, r.restart, z, c] for r in runs for z, c in enumerate(r.corr)],
    )
    idx = {h: i for i, h in enumerate(SUMMARY_HEADER)}
    report = [
        {
            "D": os.path.basename(spec.data),
            "k": k,
            "variant": row[idx["variant"]],
            "iters": row[idx["iters_mean"]],
            "RE": row[idx["re_mean"]],
            "RE_std": row[idx["re_std"]],
            "DE": row[idx["de_mean"]],
            "DE_std": row[idx["de_std"]],
            "ACD": row[idx["adc_mean"]],
            "ACD_std": row[idx["adc_std"]],
        }
        for row in summary
    ]
    with open(os.path.join(out, "report.json"), "w", encoding="utf-8") as fh:
        json.dump({"reference": spec.reference, "rows": report}, fh, indent=1, sort_keys=True)
        fh.write("\n")


def write_manifest(spec, runs):
    inputs = {p: io.sha256(p) for p in (spec.data, spec.rules, spec.clusters) if p}
    manifest = {
        "rinmf_version": __version__,
        "numpy_version": np.__version__,
        "python": platform.python_version(),
        "spec": spec.to_dict(),
        "seeds": sorted({r.seed for r in runs}),
        "wall_times": [
            {"variant": r.variant, "restart": r.restart, "seconds": r.seconds} for r in runs
        ],
        "inputs": inputs,
        "artifacts": {name: io.sha256(os.path.join(spec.out, name)) for name in ARTIFACTS},
    }
    path = os.path.join(spec.out, "manifest.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return manifest


def bench(spec):
    runs, summary, k = run_experiment(spec)
    write_reports(spec, runs, summary, k)
    manifest = write_manifest(spec, runs)
    return runs, summary, manifest


def replay(manifest_path, out):
    """Re-run a manifest into ``out``; returns names of artifacts whose hash differs."""
    with open(manifest_path, encoding="utf-8") as fh:
        manifest = json.load(fh)
    spec = ExperimentSpec(**{**manifest["spec"], "out": out})
    for path, digest in manifest.get("inputs", {}).items():
        if io.sha256(path) != digest:
            log.warning("input %s changed since the manifest was written", path)
    _, _, new = bench(spec)
    return [name for name, h in manifest["artifacts"].items() if new["artifacts"].get(name) != h]
