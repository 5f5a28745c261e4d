from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..circuit.model import CostCircuit
from ..config import settings
from ..data.cohort import Cohort
from ..reduction.form import ThreeLayerForm
from ..regularizer.model import ExtendedModel
from ..regularizer.selection import collapse, cost_report
from ..solver.dataset import Standardizer, extend_design
from .metrics import bootstrap_auc, patient_scores, roc_auc, sensitivity_at_spec

LIST_SEP = ";"


@dataclass
class EvalReport:
    """One evaluated model: patient-level ROC/AUC, bootstrap range and post-hoc costs."""

    model_ref: str
    method: str = "group"
    wait_cap: Optional[float] = None
    lambda_financial: float = 0.0
    lambda_time: float = 0.0
    roc: Tuple[Tuple[float, float], ...] = ()
    auc: float = float("nan")
    auc_ci: Tuple[float, float] = (float("nan"), float("nan"))
    sensitivity_at_spec: Dict[float, float] = field(default_factory=dict)
    costs: Dict[str, float] = field(default_factory=dict)
    features: Tuple[str, ...] = ()
    tests: Tuple[str, ...] = ()
    activities: Tuple[str, ...] = ()
    iterations: int = 0
    status: str = "ok"
    message: str = ""

    def to_row(self) -> Dict[str, Any]:
        row: Dict[str, Any] = {
            "model_ref": self.model_ref,
            "method": self.method,
            "wait_cap": self.wait_cap,
            "lambda_financial": self.lambda_financial,
            "lambda_time": self.lambda_time,
            "auc": self.auc,
            "auc_low": self.auc_ci[0],
            "auc_high": self.auc_ci[1],
        }
        for spec, sens in sorted(self.sensitivity_at_spec.items()):
            row[f"sens_at_{spec:g}"] = sens
        for ch, cost in sorted(self.costs.items()):
            row[f"cost_{ch}"] = cost
        row.update(
            n_features=len(self.features),
            features=LIST_SEP.join(self.features),
            tests=LIST_SEP.join(self.tests),
            activities=LIST_SEP.join(self.activities),
            iterations=self.iterations,
            status=self.status,
            message=self.message,
        )
        return row


def model_ref(method: str, wait_cap: Optional[float], lambda_financial: float, lambda_time: float) -> str:
    w = "none" if wait_cap is None else f"{wait_cap:g}"
    return f"{method}|W={w}|lf={lambda_financial:.3e}|lt={lambda_time:.3e}"


def cohort_scores(
    model: ExtendedModel,
    form: ThreeLayerForm,
    cohort: Cohort,
    standardizer: Optional[Standardizer] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Per patient the highest window risk (windows before onset for positives) and the outcome."""
    scores: List[float] = []
    labels: List[float] = []
    for p in cohort.patients:
        X = standardizer.transform(p.X) if standardizer is not None else p.X
        X_ext = extend_design(X, form, cohort.feature_names)
        scores.append(float(patient_scores(model, X_ext).max()))
        labels.append(1.0 if p.positive else -1.0)
    return np.asarray(scores), np.asarray(labels)


def evaluate_model(
    model: ExtendedModel,
    form: ThreeLayerForm,
    circuit: CostCircuit,
    cohort: Cohort,
    standardizer: Optional[Standardizer] = None,
    *,
    ref: str = "",
    bootstrap: Optional[int] = None,
    specificities: Tuple[float, ...] = (),
    seed: Optional[int] = None,
) -> EvalReport:
    B = settings.BOOTSTRAP if bootstrap is None else bootstrap
    specs = specificities or (settings.SPECIFICITY,)
    scores, labels = cohort_scores(model, form, cohort, standardizer)
    res = roc_auc(scores[labels > 0], scores[labels < 0])
    ci = bootstrap_auc(scores, labels, B=B, seed=seed)

    selection = collapse(model, form)
    deeper = sorted(
        {n for ch in circuit.sum_channels if ch.anchor_layer > circuit.selection_layer
         for n in selection.channel_nodes.get(ch.name, ())}
    )
    return EvalReport(
        model_ref=ref,
        method=model.method,
        roc=res.roc,
        auc=res.auc,
        auc_ci=ci,
        sensitivity_at_spec={s: sensitivity_at_spec(res.roc, s) for s in specs},
        costs=cost_report(selection, circuit),
        features=selection.features,
        tests=selection.selection_nodes,
        activities=tuple(deeper),
        iterations=int(model.diagnostics.get("iterations", 0)),
    )
