"""
costwise command line.

    python -m costwise validate graph.json
    python -m costwise reduce graph.json -o form.json
    python -m costwise gen-data graph.json --pos 300 --neg 1700 --seed 0 -o cohort.csv
    python -m costwise fit --graph graph.json --data cohort.csv --lambda-fin 1e-4 --lambda-time 1e-5 -o model.json
    python -m costwise sweep --graph graph.json --data cohort.csv --wait-caps 0,10,50 -o sweep.csv
    python -m costwise frontier sweep.csv -o frontier.csv
    python -m costwise cost-report model.json graph.json

Exit codes: 0 ok, 1 circuit fails validation, 2 anything else that went wrong
(missing or malformed files included).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, List, Optional, Sequence

from .circuit import CostCircuit, filter_by_wait, load_circuit, validate
from .config import seed_from_env, settings
from .data import CohortConfig, generate, make_training_set, read_cohort_csv, split, write_cohort_csv
from .errors import CostwiseError, InvalidCircuitError
from .evaluation import (
    SweepConfig,
    comparison_grid,
    evaluate_model,
    log_grid,
    model_ref,
    product_grid,
    report_rows,
    sweep,
    write_frontier_csv,
    write_sweep_csv,
)
from .reduction import form_to_dict, reduce
from .regularizer import ExtendedIndex, build_all_groups, collapse, cost_report, groups_to_dict, selection_summary
from .solver import FitConfig, FitProblem, SavedModel, Standardizer, get_method, get_registry, load_model, save_model

logger = logging.getLogger("costwise.cli")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_RUNTIME = 2


def setup_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> None:
    # stdout is reserved for command output
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file, encoding="utf-8"))
    logging.basicConfig(
        level=(level or settings.LOG_LEVEL).upper(),
        format="%(asctime)s | %(levelname)s | %(name)s | %(message)s",
        handlers=handlers,
    )


def _emit(payload: Any, out: Optional[str]) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
        logger.info("[cli] wrote %s", out)
    else:
        sys.stdout.write(text)


def _load_valid(path: str) -> CostCircuit:
    circuit = load_circuit(path)
    report = validate(circuit)
    if not report.ok:
        first = report.violations[0]
        raise InvalidCircuitError(
            f"{path}: {len(report.violations)} violation(s), first: {first.code} {first.node} {first.message}".rstrip(),
            len(report.violations),
        )
    return circuit


def _fit_config(args: argparse.Namespace, seed: int, **lambdas: float) -> FitConfig:
    knobs = {k: getattr(args, k) for k in ("max_iters", "tol", "inner_iters") if getattr(args, k) is not None}
    return FitConfig(seed=seed, **knobs, **lambdas)


def _wait_caps(raw: str) -> List[Optional[float]]:
    caps: List[Optional[float]] = []
    for tok in raw.split(","):
        tok = tok.strip().lower()
        if not tok:
            continue
        caps.append(None if tok in ("none", "max", "inf") else float(tok))
    if not caps:
        raise argparse.ArgumentTypeError("no wait caps given")
    return caps


# ------------------------------------------------------------
# commands
# ------------------------------------------------------------
def cmd_validate(args: argparse.Namespace) -> int:
    circuit = load_circuit(args.graph)
    report = validate(circuit)
    _emit(
        {
            "status": report.status,
            "violations": [{"code": v.code, "node": v.node, "message": v.message} for v in report.violations],
        },
        args.output,
    )
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_reduce(args: argparse.Namespace) -> int:
    circuit = _load_valid(args.graph)
    if args.wait_cap is not None:
        circuit = filter_by_wait(circuit, args.wait_cap)
    form = reduce(circuit)
    payload = form_to_dict(form)
    if args.groups:
        specs = build_all_groups(form, circuit, args.lambda_fin, args.lambda_time, settings.FINANCIAL_CHANNEL)
        payload["groups"] = groups_to_dict(specs, ExtendedIndex.from_form(form))
    _emit(payload, args.output)
    return EXIT_OK


def cmd_gen_data(args: argparse.Namespace) -> int:
    circuit = _load_valid(args.graph)
    cfg = CohortConfig(n_windows=args.windows, horizon=args.horizon)
    cohort = generate(circuit, n_pos=args.pos, n_neg=args.neg, seed=seed_from_env(args.seed), cfg=cfg)
    write_cohort_csv(cohort, args.output)
    return EXIT_OK


def cmd_fit(args: argparse.Namespace) -> int:
    seed = seed_from_env(args.seed)
    circuit = _load_valid(args.graph)
    if args.wait_cap is not None:
        circuit = filter_by_wait(circuit, args.wait_cap)
    form = reduce(circuit)
    cohort = read_cohort_csv(args.data, horizon=args.horizon)

    train, test = split(cohort, args.train_frac, seed=seed)
    train_set = make_training_set(train, seed=seed)
    std = Standardizer.fit(train_set.X)
    problem = FitProblem(circuit=circuit, form=form, data=std.apply(train_set).restrict(form.features))
    cfg = _fit_config(args, seed, lambda_financial=args.lambda_fin, lambda_time=args.lambda_time)

    model = get_method(args.method).fit(problem, cfg)
    ref = model_ref(args.method, args.wait_cap, args.lambda_fin, args.lambda_time)
    report = evaluate_model(model, form, circuit, test, std, ref=ref, bootstrap=args.bootstrap, seed=seed)
    report.wait_cap = args.wait_cap
    report.lambda_financial = args.lambda_fin
    report.lambda_time = args.lambda_time
    row = report.to_row()

    save_model(
        args.output,
        SavedModel(model=model, index=problem.index, config=cfg, standardizer=std, wait_cap=args.wait_cap, extra={"report": row}),
    )
    summary = {k: row[k] for k in ("auc", "auc_low", "auc_high", "features", "n_features")}
    summary["costs"] = report.costs
    _emit(summary, None)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    seed = seed_from_env(args.seed)
    circuit = _load_valid(args.graph)
    cohort = read_cohort_csv(args.data, horizon=args.horizon)
    values = log_grid(args.grid_min, args.grid_max, args.grid_points)
    grid = product_grid(values) if args.lambda_time is None else comparison_grid(values, args.lambda_time)
    fit = _fit_config(args, seed)
    cfg = SweepConfig(
        lambda_grid=grid,
        wait_caps=args.wait_caps,
        method=args.method,
        workers=args.workers or settings.WORKERS,
        bootstrap=args.bootstrap,
        seed=seed,
        fit=fit,
    )
    results = sweep(cohort, circuit, cfg)
    write_sweep_csv(report_rows(results), args.output)
    failed = sum(r.report.status == "error" for r in results)
    _emit({"points": len(results), "failed": failed, "output": str(args.output)}, None)
    return EXIT_OK


def cmd_frontier(args: argparse.Namespace) -> int:
    front = write_frontier_csv(args.sweep, args.output)
    _emit({"frontier": len(front), "output": str(args.output)}, None)
    return EXIT_OK


def cmd_cost_report(args: argparse.Namespace) -> int:
    saved = load_model(args.model)
    circuit = _load_valid(args.graph)
    if saved.wait_cap is not None:
        circuit = filter_by_wait(circuit, saved.wait_cap)
    form = reduce(circuit)
    if ExtendedIndex.from_form(form).entries != saved.index.entries:
        raise CostwiseError(f"model {args.model} was not fitted on this circuit (extended index differs)")
    selection = collapse(saved.model, form)
    _emit(
        {
            "method": saved.model.method,
            "wait_cap": saved.wait_cap,
            "costs": cost_report(selection, circuit),
            "selection": selection_summary(selection, circuit),
        },
        args.output,
    )
    return EXIT_OK


# ------------------------------------------------------------
# parser
# ------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="costwise", description="Cost-sensitive sparse models over cost-dependency circuits")
    ap.add_argument("--log-level", default=None)
    ap.add_argument("--log-file", default=None)
    sub = ap.add_subparsers(dest="command", required=True)
    methods = sorted(get_registry())

    p = sub.add_parser("validate", help="check a circuit file")
    p.add_argument("graph")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("reduce", help="three-layer form (and optionally groups) as JSON")
    p.add_argument("graph")
    p.add_argument("-o", "--output")
    p.add_argument("--wait-cap", type=float)
    p.add_argument("--groups", action="store_true")
    p.add_argument("--lambda-fin", type=float, default=1.0)
    p.add_argument("--lambda-time", type=float, default=1.0)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("gen-data", help="synthetic cohort CSV")
    p.add_argument("graph")
    p.add_argument("--pos", type=int, default=300)
    p.add_argument("--neg", type=int, default=1700)
    p.add_argument("--windows", type=int, default=CohortConfig().n_windows)
    p.add_argument("--horizon", type=int, default=CohortConfig().horizon)
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_gen_data)

    def fit_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--graph", required=True)
        p.add_argument("--data", required=True)
        p.add_argument("--horizon", type=int, help="only needed for a cohort CSV without .meta.json")
        p.add_argument("--method", choices=methods, default="group")
        p.add_argument("--bootstrap", type=int, default=settings.BOOTSTRAP)
        p.add_argument("--max-iters", type=int)
        p.add_argument("--tol", type=float)
        p.add_argument("--inner-iters", type=int)
        p.add_argument("--train-frac", type=float, default=0.75)
        p.add_argument("--seed", type=int)
        p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("fit", help="fit one model")
    fit_flags(p)
    p.add_argument("--lambda-fin", type=float, default=0.0)
    p.add_argument("--lambda-time", type=float, default=0.0)
    p.add_argument("--wait-cap", type=float)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("sweep", help="fit and evaluate over a lambda grid and wait caps")
    fit_flags(p)
    p.add_argument("--grid-min", type=float, default=1e-7)
    p.add_argument("--grid-max", type=float, default=1e-3)
    p.add_argument("--grid-points", type=int, default=9)
    p.add_argument("--lambda-time", type=float, help="hold lambda_time fixed instead of crossing both grids")
    p.add_argument("--wait-caps", type=_wait_caps, default=[None])
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("frontier", help="Pareto frontier of a sweep CSV")
    p.add_argument("sweep")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_frontier)

    p = sub.add_parser("cost-report", help="per-channel costs of a saved model")
    p.add_argument("model")
    p.add_argument("graph")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_cost_report)
    return ap


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse heeft de melding al op stderr gezet
        return int(e.code) if isinstance(e.code, int) else EXIT_RUNTIME
    setup_logging(args.log_level, args.log_file or settings.LOG_FILE)
    try:
        return args.func(args)
    except InvalidCircuitError as e:
        logger.error("[cli] %s", e)
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INVALID
    except (CostwiseError, OSError, ValueError, KeyError) as e:
        logger.error("[cli] %s failed: %s", args.command, e)
        sys.stderr.write(f"error: {e}\n")
        return EXIT_RUNTIME


def main() -> None:
    sys.exit(run())
