from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed
from pydantic import BaseModel, Field, field_validator

from ..circuit.model import CostCircuit
from ..circuit.wait import filter_by_wait
from ..config import seed_from_env, settings
from ..data.cohort import Cohort
from ..data.sampling import make_training_set, split
from ..errors import CostwiseError
from ..reduction.form import ThreeLayerForm, reduce
from ..regularizer.model import ExtendedModel
from ..solver.config import FitConfig
from ..solver.dataset import Standardizer
from ..solver.registry import FitProblem, get_method
from .report import EvalReport, evaluate_model, model_ref

logger = logging.getLogger("costwise.evaluation")

LambdaPair = Tuple[float, float]


def log_grid(lo: float = 1e-7, hi: float = 1e-3, points: int = 9) -> List[float]:
    """`points` logarithmically spaced values from lo to hi (both included)."""
    if lo <= 0 or hi <= 0:
        raise ValueError("log grid bounds must be > 0")
    if points < 1:
        raise ValueError("points must be >= 1")
    if points == 1:
        return [float(lo)]
    return [float(v) for v in np.logspace(math.log10(lo), math.log10(hi), points)]


def product_grid(values: Sequence[float]) -> List[LambdaPair]:
    """Every (lambda_financial, lambda_time) combination of `values`."""
    return [(float(a), float(b)) for a in values for b in values]


def comparison_grid(values: Sequence[float], lambda_time: float = 1e-7) -> List[LambdaPair]:
    """Financial lambda swept over `values` with the time lambda held fixed."""
    return [(float(v), float(lambda_time)) for v in values]


class SweepConfig(BaseModel):
    lambda_grid: List[LambdaPair] = Field(default_factory=lambda: product_grid(log_grid()))
    # None: no wait filtering
    wait_caps: List[Optional[float]] = Field(default_factory=lambda: [None])
    method: str = "group"
    workers: int = Field(default_factory=lambda: settings.WORKERS, ge=1)
    bootstrap: int = Field(default_factory=lambda: settings.BOOTSTRAP, ge=2)
    specificity: float = Field(default_factory=lambda: settings.SPECIFICITY, gt=0, lt=1)
    train_frac: float = Field(default=0.75, gt=0, lt=1)
    seed: int = Field(default_factory=lambda: seed_from_env())
    fit: FitConfig = Field(default_factory=FitConfig)

    @field_validator("lambda_grid")
    @classmethod
    def _check_grid(cls, v: List[LambdaPair]) -> List[LambdaPair]:
        if not v:
            raise ValueError("lambda_grid must not be empty")
        if any(a < 0 or b < 0 for a, b in v):
            raise ValueError("lambda values must be >= 0")
        return v

    @field_validator("wait_caps")
    @classmethod
    def _check_caps(cls, v: List[Optional[float]]) -> List[Optional[float]]:
        if not v:
            raise ValueError("wait_caps must not be empty")
        if any(w is not None and w < 0 for w in v):
            raise ValueError("wait caps must be >= 0")
        return v


@dataclass(frozen=True)
class SweepResult:
    model: Optional[ExtendedModel]
    report: EvalReport
    form: Optional[ThreeLayerForm] = None


def _run_point(
    problem: FitProblem,
    method: str,
    fit_cfg: FitConfig,
    test: Cohort,
    standardizer: Standardizer,
    wait_cap: Optional[float],
    bootstrap: int,
    specificity: float,
    seed: int,
) -> SweepResult:
    ref = model_ref(method, wait_cap, fit_cfg.lambda_financial, fit_cfg.lambda_time)
    try:
        model = get_method(method).fit(problem, fit_cfg)
        report = evaluate_model(
            model, problem.form, problem.circuit, test, standardizer,
            ref=ref, bootstrap=bootstrap, specificities=(specificity,), seed=seed,
        )
    except (CostwiseError, ValueError) as e:
        # punt mislukt: vastleggen en doorgaan
        logger.warning("[sweep] %s failed: %s", ref, e)
        return SweepResult(model=None, report=_failed(ref, method, fit_cfg, wait_cap, e), form=problem.form)
    report.method = method
    report.wait_cap = wait_cap
    report.lambda_financial = fit_cfg.lambda_financial
    report.lambda_time = fit_cfg.lambda_time
    return SweepResult(model=model, report=report, form=problem.form)


def _failed(ref: str, method: str, fit_cfg: FitConfig, wait_cap: Optional[float], err: Exception) -> EvalReport:
    return EvalReport(
        model_ref=ref,
        method=method,
        wait_cap=wait_cap,
        lambda_financial=fit_cfg.lambda_financial,
        lambda_time=fit_cfg.lambda_time,
        status="error",
        message=str(err),
    )


def _order(r: SweepResult) -> Tuple:
    rep = r.report
    w = math.inf if rep.wait_cap is None else rep.wait_cap
    return (w, rep.method, rep.lambda_financial, rep.lambda_time)


def sweep(cohort: Cohort, circuit: CostCircuit, cfg: Optional[SweepConfig] = None) -> List[SweepResult]:
    """
    Fit and evaluate one model per (wait cap, lambda pair).

    The cohort is split per patient; models are fitted on a balanced,
    standardized window sample of the training part and evaluated per patient
    on the test part. Failing points come back with status "error". Results
    are sorted by wait cap, method and lambdas, independent of worker count.
    """
    cfg = cfg or SweepConfig()
    get_method(cfg.method)

    train, test = split(cohort, cfg.train_frac, seed=cfg.seed)
    train_set = make_training_set(train, seed=cfg.seed)
    standardizer = Standardizer.fit(train_set.X)
    train_std = standardizer.apply(train_set)

    # l1 baselines ignore lambda_time: one fit per lambda_financial
    grid: List[LambdaPair] = list(dict.fromkeys(cfg.lambda_grid))
    if cfg.method != "group":
        grid = list(dict.fromkeys((a, 0.0) for a, _ in grid))

    results: List[SweepResult] = []
    jobs = []
    for cap in cfg.wait_caps:
        try:
            c = circuit if cap is None else filter_by_wait(circuit, cap)
            form = reduce(c)
        except CostwiseError as e:
            logger.warning("[sweep] W=%s: reduction failed: %s", cap, e)
            for lf, lt in grid:
                fc = cfg.fit.model_copy(update={"lambda_financial": lf, "lambda_time": lt})
                ref = model_ref(cfg.method, cap, lf, lt)
                results.append(SweepResult(model=None, report=_failed(ref, cfg.method, fc, cap, e)))
            continue
        problem = FitProblem(circuit=c, form=form, data=train_std.restrict(form.features))
        for lf, lt in grid:
            fc = cfg.fit.model_copy(update={"lambda_financial": lf, "lambda_time": lt, "seed": cfg.seed})
            jobs.append(
                delayed(_run_point)(
                    problem, cfg.method, fc, test, standardizer, cap, cfg.bootstrap, cfg.specificity, cfg.seed
                )
            )

    logger.info("[sweep] %s: %d points, %d workers", cfg.method, len(jobs), cfg.workers)
    if jobs:
        results.extend(Parallel(n_jobs=cfg.workers)(jobs))
    results.sort(key=_order)
    n_err = sum(r.report.status == "error" for r in results)
    logger.info("[sweep] done: %d ok, %d failed", len(results) - n_err, n_err)
    return results


def sweep_methods(
    cohort: Cohort,
    circuit: CostCircuit,
    cfg: SweepConfig,
    methods: Sequence[str] = ("group", "l1", "l1-scaled"),
) -> Dict[str, List[SweepResult]]:
    """The same sweep once per fit method, sharing split and seed."""
    return {m: sweep(cohort, circuit, cfg.model_copy(update={"method": m})) for m in methods}
