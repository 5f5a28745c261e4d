from .frontier import (
    DEFAULT_OBJECTIVES,
    FrontierComparison,
    compare_frontiers,
    dominates,
    pareto_frontier,
    read_sweep_csv,
    report_rows,
    write_frontier_csv,
    write_sweep_csv,
)
from .metrics import RocResult, auc_rank, bootstrap_auc, identify, patient_scores, roc_auc, sensitivity_at_spec, trapezoid_area
from .report import EvalReport, cohort_scores, evaluate_model, model_ref
from .sweep import SweepConfig, SweepResult, comparison_grid, log_grid, product_grid, sweep, sweep_methods

__all__ = [
    "DEFAULT_OBJECTIVES",
    "EvalReport",
    "FrontierComparison",
    "RocResult",
    "SweepConfig",
    "SweepResult",
    "auc_rank",
    "bootstrap_auc",
    "cohort_scores",
    "compare_frontiers",
    "comparison_grid",
    "dominates",
    "evaluate_model",
    "identify",
    "log_grid",
    "model_ref",
    "pareto_frontier",
    "patient_scores",
    "product_grid",
    "read_sweep_csv",
    "report_rows",
    "roc_auc",
    "sensitivity_at_spec",
    "sweep",
    "sweep_methods",
    "trapezoid_area",
    "write_frontier_csv",
    "write_sweep_csv",
]
