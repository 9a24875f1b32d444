"""Command-line front end: generate -> solve/label -> train -> predict -> evaluate/report.

Every command takes ``--seed``; its default comes from the QSELECT_SEED
environment variable (or 0). Output files are written atomically and are
byte-identical for identical flags and seeds.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .dataset import DatasetRecord, cumulative_rows, dumps_dataset, label_problem, load_dataset
from .generators import FAMILIES, canonical_family, derive_seed, generate_suite
from .ml import (
    CLASSIFIERS,
    DEFAULT_PREPROCESSING,
    LabeledData,
    PipelineSpec,
    evaluate_grid,
    fit_pipeline,
    grid_csv,
    load_model,
)
from .ml.pipeline import CLASS_NAMES
from .qubo import extract_features, load_problem
from .solvers import PRIORITY, OptimizerConfig, SolverConfig, SolverKind, run_many
from .solvers.runner import run_seed

MODEL_ALIASES = {"rf": "random_forest", "dt": "decision_tree", "nb": "gaussian_nb", "gnb": "gaussian_nb"}


class CliError(Exception):
    pass


def default_seed() -> int:
    raw = os.environ.get("QSELECT_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise CliError(f"QSELECT_SEED must be an integer, got {raw!r}") from None


def write_atomic(path: str | Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def csv_text(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def parse_size_range(text: str) -> tuple[int, int]:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return int(lo), int(hi)
        n = int(text)
        return n, n
    except ValueError:
        raise argparse.ArgumentTypeError(f"size range must look like 3..10, got {text!r}") from None


def split_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


# ---------------------------------------------------------------- solver flags

def add_solver_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("solver settings (default: size-scaled)")
    g.add_argument("--qaoa-reps", type=int, help="QAOA repetitions (default ceil(2 sqrt N))")
    g.add_argument("--vqe-layers", type=int, help="VQE entangling layers (default 2)")
    g.add_argument("--shots", type=int, help="readout shots for QAOA and VQE (default 100)")
    g.add_argument("--optimizer", choices=("cobyla", "nelder-mead"), help="variational optimizer")
    g.add_argument("--max-evals", type=int, help="optimizer evaluation budget (default 400)")
    g.add_argument("--gas-threshold", type=int, help="GAS consecutive failures before stopping (default 2N)")
    g.add_argument("--gas-backend", choices=("dictionary", "circuit"), help="GAS simulation backend")
    g.add_argument("--gas-value-qubits", type=int, help="override the GAS value register width")
    g.add_argument("--precision", type=float, help="GAS coefficient rounding precision (default 1)")
    g.add_argument("--sa-sweeps", type=int, help="SA sweeps (default round(10^(0.5 sqrt N)))")
    g.add_argument("--qa-sweeps", type=int, help="QA-proxy sweeps (default round(10^(0.7 sqrt N)))")
    g.add_argument("--trotter-slices", type=int, help="QA-proxy Trotter slices (default 20)")


def solver_config(args, problem) -> SolverConfig:
    from dataclasses import replace

    base = SolverConfig.defaults(problem)

    def over(cfg, **kw):
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(cfg, **kw) if kw else cfg

    opt = None
    if args.optimizer is not None or args.max_evals is not None:
        opt = over(OptimizerConfig(), kind=args.optimizer, max_evals=args.max_evals)
    return SolverConfig(
        qaoa=over(base.qaoa, reps=args.qaoa_reps, shots=args.shots, optimizer=opt),
        vqe=over(base.vqe, layers=args.vqe_layers, shots=args.shots, optimizer=opt),
        gas=over(base.gas, threshold=args.gas_threshold, backend=args.gas_backend,
                 value_qubits=args.gas_value_qubits, precision=args.precision),
        qa_proxy=over(base.qa_proxy, sweeps=args.qa_sweeps, trotter_slices=args.trotter_slices),
        sa=over(base.sa, sweeps=args.sa_sweeps),
    )


# ---------------------------------------------------------------- commands

def cmd_generate(args) -> int:
    families = split_list(args.families) if args.families else list(FAMILIES)
    suite = generate_suite(args.count, args.n, families, args.seed)
    out = Path(args.out)
    entries = []
    for i, (spec, problem) in enumerate(suite):
        name = f"problem_{i:04d}.json"
        text = json.dumps(problem.to_json(), indent=1) + "\n"
        write_atomic(out / name, text)
        entries.append({"id": f"p{i:04d}", "file": name, "spec": spec.to_json()})
    manifest = {
        "seed": args.seed,
        "count": args.count,
        "families": [canonical_family(f) for f in families],
        "size_range": list(args.n),
        "problems": entries,
    }
    write_atomic(out / "manifest.json", json.dumps(manifest, indent=1) + "\n")
    print(f"wrote {len(entries)} problems and {out / 'manifest.json'}")
    return 0


def cmd_solve(args) -> int:
    problem = load_problem(args.problem)
    kinds = list(PRIORITY) if args.solver == "all" else [SolverKind.parse(args.solver)]
    config = solver_config(args, problem)
    log_lines = []
    dists = {}
    for kind in kinds:
        dist = run_many(problem, kind, args.runs, args.seed, config.for_kind(kind))
        dists[kind] = dist
        for i, (value, x) in enumerate(zip(dist.values, dist.assignments)):
            log_lines.append(json.dumps({
                "solver": kind.value, "run": i, "seed": run_seed(args.seed, kind, i),
                "objective": value, "assignment": list(x),
            }))
    out = Path(args.out)
    write_atomic(out / "runs.jsonl", "\n".join(log_lines) + "\n")
    write_atomic(out / "cumulative.csv", csv_text(cumulative_rows(dists)))
    for kind, dist in dists.items():
        print(f"{kind.value}: p_s={dist.p_s:.2f} best={dist.e_opt!r} mean={dist.e_avg!r}")
    return 0


def _label_one(job) -> str:
    path, pid, runs, seed, args = job
    problem = load_problem(path)
    rec = label_problem(problem, runs, seed=seed, problem_id=pid, config=solver_config(args, problem))
    return csv_text([rec.row()])


def cmd_label(args) -> int:
    manifest_path = Path(args.manifest)
    try:
        manifest = json.loads(manifest_path.read_text())
        entries = manifest["problems"]
    except (json.JSONDecodeError, KeyError) as exc:
        raise CliError(f"{manifest_path}: not a problem manifest ({exc})") from None
    jobs = [
        (manifest_path.parent / e["file"], e["id"], args.runs, derive_seed(args.seed, i), args)
        for i, e in enumerate(entries)
    ]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_label_one, jobs))
    else:
        rows = [_label_one(j) for j in jobs]
    text = dumps_dataset([]) + "".join(rows)
    write_atomic(args.out, text)
    print(f"labeled {len(rows)} problems into {args.out}")
    return 0


def model_name(text: str) -> str:
    name = MODEL_ALIASES.get(text.strip().lower(), text.strip().lower())
    if name not in CLASSIFIERS:
        raise CliError(f"unknown model {text!r}; choose from {', '.join(CLASSIFIERS)} or rf, dt, knn, nb")
    return name


def hyperparams(args, name: str) -> dict:
    if name == "random_forest":
        keys = {"n_trees": args.n_trees, "max_depth": args.max_depth,
                "min_samples_leaf": args.min_leaf, "min_samples_split": args.min_split}
    elif name == "decision_tree":
        keys = {"max_depth": args.max_depth, "min_samples_leaf": args.min_leaf, "min_samples_split": args.min_split}
    elif name == "knn":
        keys = {"k": args.neighbors}
    else:
        keys = {}
    return {k: v for k, v in keys.items() if v is not None}


def load_labeled(path) -> LabeledData:
    return LabeledData.from_records(load_dataset(path))


def cmd_train(args) -> int:
    data = load_labeled(args.dataset)
    name = model_name(args.model)
    projection, k = PipelineSpec.parse_preprocessing(args.preprocessing)
    spec = PipelineSpec(name, projection, k, hyperparams(args, name))
    model = fit_pipeline(spec, data.X, data.y, args.seed)
    write_atomic(args.out, model.dumps())
    print(f"trained {name} ({spec.preprocessing}) on {len(data.y)} problems -> {args.out}")
    return 0


def cmd_predict(args) -> int:
    model = load_model(args.model)
    if args.features is not None:
        try:
            x = np.array([float(v) for v in split_list(args.features)])
        except ValueError:
            raise CliError("--features must be a comma-separated list of numbers") from None
    elif args.problem is not None:
        x = extract_features(load_problem(args.problem)).as_array()
    else:
        raise CliError("give a problem file or --features")
    proba = model.predict_proba(x)[0]
    label = CLASS_NAMES[int(np.argmax(proba))]
    lines = [label] + [f"{name} {float(p)!r}" for name, p in zip(CLASS_NAMES, proba)]
    text = "\n".join(lines) + "\n"
    if args.out:
        write_atomic(args.out, text)
    sys.stdout.write(text)
    return 0


def cmd_evaluate(args) -> int:
    data = load_labeled(args.dataset)
    names = list(CLASSIFIERS) if args.models == "all" else [model_name(m) for m in split_list(args.models)]
    preps = list(DEFAULT_PREPROCESSING) if args.preprocessing == "all" else split_list(args.preprocessing)
    for p in preps:
        PipelineSpec.parse_preprocessing(p)
    hyper = {n: hyperparams(args, n) for n in names}
    rows = evaluate_grid(data, names, preps, args.folds, args.seed, hyper, args.jobs)
    text = grid_csv(rows)
    write_atomic(args.out, text)
    sys.stdout.write(text)
    return 0


def size_report(records: Sequence[DatasetRecord]) -> str:
    """Mean p_s per solver for each problem size."""
    by_size: dict[int, list[DatasetRecord]] = {}
    for r in records:
        by_size.setdefault(r.features.n_vars, []).append(r)
    rows = [["n_vars", "problems"] + [f"mean_ps_{k.value}" for k in PRIORITY]]
    for n in sorted(by_size):
        group = by_size[n]
        rows.append([str(n), str(len(group))]
                    + [repr(float(np.mean([r.ps[k] for r in group]))) for k in PRIORITY])
    return csv_text(rows)


def cmd_report(args) -> int:
    text = size_report(load_dataset(args.dataset))
    write_atomic(args.out, text)
    sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qselect", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help, description=help)
        p.add_argument("--seed", type=int, default=None, help="base seed (default: $QSELECT_SEED or 0)")
        return p

    p = command("generate", "generate a reproducible suite of QUBO problem files and a manifest")
    p.add_argument("--count", type=int, required=True, help="number of problems")
    p.add_argument("--families", help=f"comma-separated families (default all: {', '.join(FAMILIES)})")
    p.add_argument("--n", type=parse_size_range, default=(3, 10), help="size range, e.g. 3..10 (default 3..10)")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_generate)

    p = command("solve", "run one solver (or all) repeatedly on a problem file")
    p.add_argument("problem", help="QUBO JSON file")
    p.add_argument("--solver", default="all", help="qaoa, vqe, gas, qa, sa or all (default all)")
    p.add_argument("--runs", type=int, default=100, help="independent runs per solver (default 100)")
    p.add_argument("--out", required=True, help="output directory for runs.jsonl and cumulative.csv")
    add_solver_flags(p)
    p.set_defaults(func=cmd_solve)

    p = command("label", "solve every problem of a manifest with all solvers and write the dataset CSV")
    p.add_argument("manifest", help="manifest.json written by generate")
    p.add_argument("--runs", type=int, default=100, help="runs per solver and problem (default 100)")
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes (default 1)")
    p.add_argument("--out", required=True, help="dataset CSV path")
    add_solver_flags(p)
    p.set_defaults(func=cmd_label)

    def model_flags(p: argparse.ArgumentParser) -> None:
        g = p.add_argument_group("classifier settings")
        g.add_argument("--n-trees", type=int, help="random forest size (default 100)")
        g.add_argument("--max-depth", type=int, help="tree depth limit (default 50)")
        g.add_argument("--min-leaf", type=int, help="minimum samples per leaf (default 1)")
        g.add_argument("--min-split", type=int, help="minimum samples to split a node (default 2)")
        g.add_argument("--neighbors", type=int, help="k for nearest neighbours (default 5)")

    p = command("train", "fit a classification pipeline on a dataset CSV")
    p.add_argument("dataset", help="dataset CSV written by label")
    p.add_argument("--model", default="random_forest", help="random_forest|decision_tree|knn|gaussian_nb")
    p.add_argument("--preprocessing", default="none", help="none, pca-K (K in 1..9) or lda-K (K <= 4)")
    p.add_argument("--out", required=True, help="model JSON path")
    model_flags(p)
    p.set_defaults(func=cmd_train)

    p = command("predict", "predict the best solver for a problem")
    p.add_argument("model", help="model JSON written by train")
    p.add_argument("problem", nargs="?", help="QUBO JSON file")
    p.add_argument("--features", help="comma-separated feature vector instead of a problem file")
    p.add_argument("--out", help="also write the prediction to this file")
    p.set_defaults(func=cmd_predict)

    p = command("evaluate", "cross-validate classifiers x preprocessing and write a results table")
    p.add_argument("dataset", help="dataset CSV written by label")
    p.add_argument("--models", default="all", help="comma-separated classifiers or 'all'")
    p.add_argument("--preprocessing", default="all",
                   help="comma-separated list of none, pca-K, lda-K or 'all' (default: none, pca-2/3/4/9, lda-2/3/4)")
    p.add_argument("--folds", type=int, default=5, help="cross-validation folds (default 5)")
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes (default 1)")
    p.add_argument("--out", required=True, help="results CSV path")
    model_flags(p)
    p.set_defaults(func=cmd_evaluate)

    p = command("report", "mean success probability per solver and problem size")
    p.add_argument("dataset", help="dataset CSV written by label")
    p.add_argument("--out", required=True, help="report CSV path")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.seed is None:
            args.seed = default_seed()
        print(f"seed={args.seed}", file=sys.stderr)
        return args.func(args)
    except (CliError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
