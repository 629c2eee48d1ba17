"""``rinmf`` command line.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 divergence.
"""
import argparse
import json
import logging
import os
import sys

import numpy as np

from ..errors import ConfigError, DataError, DivergenceError, DomainError, ShapeError
from ..grouping import build_A, build_ideal, kmeans_rules, kmeans_rules_supervised, rfa_assign
from ..metrics import evaluate, row_sparseness
from ..rules import build_P, coverage
from ..solvers import VARIANTS, Constraints, SolverConfig, init_factors, solve
from . import harness, io
from .synth import generate_synthetic

log = logging.getLogger("rinmf")

EXIT_CONFIG, EXIT_DATA, EXIT_DIVERGENCE = 2, 3, 4


def _per_class_k(text):
    out = {}
    for item in text.split(","):
        label, _, count = item.partition("=")
        if not label or not count:
            raise argparse.ArgumentTypeError(f"expected LABEL=INT, got {item!r}")
        out[label] = int(count)
    return out


def _variants(text):
    return [v.strip() for v in text.split(",") if v.strip()]


def _add_solver_flags(p, multi=False):
    p.add_argument("--variant", type=_variants, default=["D", "MU"] if multi else ["D"],
                   help="comma-separated: " + ",".join(VARIANTS))
    p.add_argument("--c", type=float, default=1.0, help="regularization constant (lambda is derived per variant)")
    p.add_argument("--max-iters", type=int, default=50000)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--eps", type=float, default=1e-9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--normalize-f", action="store_true")
    p.add_argument("--hals-literal", action="store_true")
    p.add_argument("--gd-literal", action="store_true")
    p.add_argument("--sparseness", type=float, default=None, help="target row sparseness for SP")


def _add_grouping_flags(p):
    p.add_argument("--k", type=int)
    p.add_argument("--per-class-k", type=_per_class_k, metavar="LABEL=INT,...")
    p.add_argument("--grouping", choices=["kmeans", "rfa", "explicit"], default="kmeans")
    p.add_argument("--clusters", help="grouping JSON (for --grouping explicit or evaluate)")


def build_parser():
    ap = argparse.ArgumentParser(prog="rinmf", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("factorize", help="run one solver variant")
    p.add_argument("--data", required=True)
    p.add_argument("--rules")
    p.add_argument("--out", required=True)
    _add_grouping_flags(p)
    _add_solver_flags(p)

    p = sub.add_parser("evaluate", help="score saved factors against a grouping")
    p.add_argument("--data", required=True)
    p.add_argument("--rules")
    p.add_argument("--factors", required=True, help="directory holding F.csv and G.csv")
    p.add_argument("--clusters", required=True)
    p.add_argument("--out", help="write metrics.json here")

    p = sub.add_parser("cluster-rules", help="group rules into factor clusters")
    p.add_argument("--rules", required=True)
    p.add_argument("--data", help="dataset (gives m)")
    p.add_argument("--m", type=int, help="entity count when --data is absent")
    p.add_argument("--k", type=int)
    p.add_argument("--per-class-k", type=_per_class_k, metavar="LABEL=INT,...")
    p.add_argument("--method", choices=["kmeans", "rfa"], default="kmeans")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("synth", help="generate planted block data and rules")
    p.add_argument("--m", type=int, default=200)
    p.add_argument("--n", type=int, default=40)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--noise", type=float, default=0.1)
    p.add_argument("--overlap", type=float, default=0.0)
    p.add_argument("--rules-per-factor", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("bench", help="variants x restarts experiment with shared initializations")
    p.add_argument("--data")
    p.add_argument("--rules")
    p.add_argument("--out", required=True)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--reference", default="D")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--replay", metavar="MANIFEST", help="re-run a manifest.json into --out")
    _add_grouping_flags(p)
    _add_solver_flags(p, multi=True)
    return ap


def _k_from(args):
    if args.per_class_k:
        k = sum(args.per_class_k.values())
        if args.k is not None and args.k != k:
            raise ConfigError("--k disagrees with --per-class-k")
        return k
    if args.k is None:
        raise ConfigError("--k or --per-class-k is required")
    return args.k


def _grouping(args, rs, m, F0):
    k = _k_from(args) if args.grouping != "explicit" else None
    if args.grouping == "explicit":
        if not args.clusters:
            raise ConfigError("--grouping explicit needs --clusters")
        return io.load_grouping(args.clusters, rs)
    if args.grouping == "rfa" or args.variant[0] in ("DF", "DFE"):
        return rfa_assign(rs, F0, k, len(args.per_class_k or {}))
    if args.per_class_k:
        return kmeans_rules_supervised(rs, args.per_class_k, seed=args.seed)
    return kmeans_rules(rs, k, seed=args.seed)


def cmd_factorize(args):
    if len(args.variant) != 1:
        raise ConfigError("factorize runs exactly one variant; use bench for several")
    variant = args.variant[0]
    if variant not in VARIANTS:
        raise ConfigError(f"unknown variant {variant!r}")
    x = io.load_dataset(args.data)
    m, n = x.shape
    rs = io.load_rules(args.rules, m) if args.rules else None
    mode = VARIANTS[variant][1]
    if mode != "none" and rs is None:
        raise ConfigError(f"variant {variant} needs --rules")
    g = None
    if rs is not None:
        if args.grouping == "explicit":
            g = _grouping(args, rs, m, None)
            k = g.k
        else:
            k = _k_from(args)
            g = _grouping(args, rs, m, init_factors(m, n, k, args.seed)[0])
    else:
        k = _k_from(args)
    ideal = build_ideal(g, m) if g is not None else None
    if mode == "ideal":
        cons = Constraints.from_ideal(ideal)
    elif mode == "cost":
        cons = Constraints.from_cost(build_P(rs), build_A(g, rs))
    else:
        cons = Constraints.none()
    target = args.sparseness
    if variant == "SP" and target is None:
        sp = row_sparseness(ideal) if ideal is not None else []
        target = float(np.mean(sp)) if sp else 0.5
    cfg = SolverConfig(variant=variant, k=k, lambda_c=args.c, max_iters=args.max_iters,
                       tolerance=args.tol, epsilon=args.eps, normalize_f=args.normalize_f,
                       seed=args.seed, target_sparseness=target,
                       hals_literal=args.hals_literal, gd_literal=args.gd_literal)
    fm = solve(x, cfg, cons)
    os.makedirs(args.out, exist_ok=True)
    io.write_matrix(os.path.join(args.out, "F.csv"), fm.F, "f")
    io.write_matrix(os.path.join(args.out, "G.csv"), fm.G, "g")
    io.write_table(os.path.join(args.out, "trace.csv"), ["iteration", "objective"], enumerate(fm.objective_trace))
    summary = {"variant": variant, "k": k, "lambda": fm.lam, "iterations": fm.iterations_run,
               "converged": fm.converged, "objective": fm.objective_trace[-1]}
    if g is not None:
        io.save_grouping(os.path.join(args.out, "grouping.json"), g, rs)
        rep = evaluate(x, fm.F, fm.G, ideal, fm.iterations_run)
        summary.update(re=rep.re, de=rep.de, corr=rep.corr, mean_corr=rep.mean_corr)
    with open(os.path.join(args.out, "model.json"), "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=1)
        fh.write("\n")
    print(json.dumps(summary))


def cmd_evaluate(args):
    x = io.load_dataset(args.data)
    m = x.shape[0]
    rs = io.load_rules(args.rules, m) if args.rules else None
    F = io.load_matrix(os.path.join(args.factors, "F.csv"))
    G = io.load_matrix(os.path.join(args.factors, "G.csv"))
    g = io.load_grouping(args.clusters, rs)
    if F.shape != (m, g.k) or G.shape != (x.shape[1], g.k):
        raise DataError(f"factor shapes {F.shape}, {G.shape} do not match X {x.shape} with k={g.k}")
    rep = evaluate(x, F, G, build_ideal(g, m))
    doc = {"re": rep.re, "de": rep.de, "corr": rep.corr, "mean_corr": rep.mean_corr,
           "avg_row_sparseness": float(np.mean(rep.sparseness_rows)) if rep.sparseness_rows else None}
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "metrics.json"), "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
    print(json.dumps(doc))


def cmd_cluster_rules(args):
    if args.data:
        m = io.load_dataset(args.data).shape[0]
    elif args.m:
        m = args.m
    else:
        raise ConfigError("--data or --m is required")
    rs = io.load_rules(args.rules, m)
    if args.per_class_k:
        k = sum(args.per_class_k.values())
    elif args.k:
        k = args.k
    else:
        raise ConfigError("--k or --per-class-k is required")
    if args.method == "rfa":
        F0 = init_factors(m, 1, k, args.seed)[0]
        g = rfa_assign(rs, F0, k, len(args.per_class_k or {}))
    elif args.per_class_k:
        g = kmeans_rules_supervised(rs, args.per_class_k, seed=args.seed)
    else:
        g = kmeans_rules(rs, k, seed=args.seed)
    os.makedirs(args.out, exist_ok=True)
    io.save_grouping(os.path.join(args.out, "grouping.json"), g, rs)
    io.write_matrix(os.path.join(args.out, "ideal.csv"), build_ideal(g, m), "f")
    io.write_matrix(os.path.join(args.out, "A.csv"), build_A(g, rs), "r")
    empty = [z for z, c in enumerate(g.clusters) if not c]
    if empty:
        log.warning("empty clusters: %s", empty)
    print(json.dumps({"k": k, "coverage": coverage(rs), "cluster_sizes": [len(c) for c in g.clusters]}))


def cmd_synth(args):
    x, rs, g = generate_synthetic(args.m, args.n, args.k, args.noise, args.overlap,
                                  args.rules_per_factor, args.seed)
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "data.csv"), "w", encoding="utf-8") as fh:
        for row in x:
            fh.write(",".join(io.fmt(v) for v in row) + "\n")
    io.save_rules(os.path.join(args.out, "rules.jsonl"), rs)
    io.save_grouping(os.path.join(args.out, "grouping.json"), g, rs)
    print(json.dumps({"m": args.m, "n": args.n, "k": args.k, "rules": len(rs)}))


def cmd_bench(args):
    if args.replay:
        mismatched = harness.replay(args.replay, args.out)
        if mismatched:
            log.error("replay differs from manifest: %s", ", ".join(mismatched))
            return 1
        print(json.dumps({"replay": "identical", "out": args.out}))
        return 0
    if not args.data:
        raise ConfigError("--data is required unless --replay is given")
    spec = harness.ExperimentSpec(
        data=args.data, rules=args.rules, out=args.out, variants=args.variant, k=args.k,
        per_class_k=args.per_class_k, grouping=args.grouping, clusters=args.clusters,
        restarts=args.restarts, seed_base=args.seed, c=args.c, max_iters=args.max_iters,
        tol=args.tol, eps=args.eps, normalize_f=args.normalize_f, hals_literal=args.hals_literal,
        gd_literal=args.gd_literal, sparseness=args.sparseness, reference=args.reference,
        workers=args.workers,
    )
    runs, summary, _ = harness.bench(spec)
    for row in summary:
        print(",".join(io.fmt(v) for v in row))
    if any(r.diverged for r in runs):
        return EXIT_DIVERGENCE
    return 0


COMMANDS = {
    "factorize": cmd_factorize,
    "evaluate": cmd_evaluate,
    "cluster-rules": cmd_cluster_rules,
    "synth": cmd_synth,
    "bench": cmd_bench,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args) or 0
    except ConfigError as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    except DivergenceError as exc:
        log.error("%s", exc)
        return EXIT_DIVERGENCE
    except (DataError, DomainError, ShapeError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
