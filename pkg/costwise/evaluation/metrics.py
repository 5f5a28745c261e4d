from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.special import expit
from scipy.stats import rankdata

from ..config import seed_from_env
from ..errors import DataError
from ..regularizer.model import ExtendedModel

MAX_REDRAWS = 100


@dataclass(frozen=True)
class RocResult:
    roc: Tuple[Tuple[float, float], ...]  # (FPR, TPR), from (0, 0) to (1, 1)
    auc: float


def patient_scores(model: ExtendedModel, X_ext: np.ndarray) -> np.ndarray:
    """Risk trajectory: one probability per window."""
    X_ext = np.asarray(X_ext, dtype=float)
    if X_ext.ndim != 2 or X_ext.shape[0] == 0:
        raise DataError("empty trajectory")
    return expit(model.decision(X_ext))


def identify(trajectory: Sequence[float], threshold: float) -> bool:
    """A patient is flagged once the trajectory rises above the threshold."""
    t = np.asarray(trajectory, dtype=float)
    if t.size == 0:
        raise DataError("empty trajectory")
    return bool(t.max() > threshold)


def _check(pos: np.ndarray, neg: np.ndarray) -> None:
    if pos.size == 0 or neg.size == 0:
        raise DataError("ROC needs at least one score per class")


def auc_rank(pos: Sequence[float], neg: Sequence[float]) -> float:
    """Mann-Whitney statistic: P(pos > neg) with ties counted half."""
    pos, neg = np.asarray(pos, dtype=float), np.asarray(neg, dtype=float)
    _check(pos, neg)
    ranks = rankdata(np.concatenate([pos, neg]))
    u = ranks[: pos.size].sum() - pos.size * (pos.size + 1) / 2.0
    return float(u / (pos.size * neg.size))


def roc_auc(pos: Sequence[float], neg: Sequence[float]) -> RocResult:
    """
    ROC over every distinct score used as a threshold, plus the rank AUC.

    A score counts as flagged when it lies strictly above the threshold, the
    same rule as `identify`; the last point (1, 1) flags everyone.
    """
    pos, neg = np.asarray(pos, dtype=float), np.asarray(neg, dtype=float)
    _check(pos, neg)
    thresholds = np.unique(np.concatenate([pos, neg]))[::-1]
    pts = [(float(np.mean(neg > s)), float(np.mean(pos > s))) for s in thresholds]
    pts.append((1.0, 1.0))
    return RocResult(roc=tuple(pts), auc=auc_rank(pos, neg))


def trapezoid_area(roc: Sequence[Tuple[float, float]]) -> float:
    fpr = np.array([p[0] for p in roc])
    tpr = np.array([p[1] for p in roc])
    return float(np.sum(np.diff(fpr) * (tpr[1:] + tpr[:-1]) / 2.0))


def sensitivity_at_spec(roc: Sequence[Tuple[float, float]], specificity: float) -> float:
    """Best TPR among ROC points whose FPR stays within 1 - specificity."""
    limit = 1.0 - specificity + 1e-12
    return max((tpr for fpr, tpr in roc if fpr <= limit), default=0.0)


def bootstrap_auc(
    scores: Sequence[float],
    labels: Sequence[float],
    B: int = 10,
    seed: Optional[int] = None,
) -> Tuple[float, float]:
    """
    Resample patients with replacement B times and report the (min, max) AUC.
    With so few resamples a range is reported rather than percentiles.
    Resamples holding one class only are redrawn, at most MAX_REDRAWS times each.
    """
    if B < 2:
        raise ValueError("B must be >= 2")
    scores = np.asarray(scores, dtype=float)
    y = np.asarray(labels) > 0
    if y.all() or not y.any():
        raise DataError("bootstrap needs both classes")
    rng = np.random.default_rng(seed_from_env(seed))
    n = scores.size
    aucs = []
    for _ in range(B):
        for _attempt in range(MAX_REDRAWS + 1):
            idx = rng.integers(0, n, size=n)
            yy = y[idx]
            if yy.any() and not yy.all():
                break
        else:
            raise DataError(f"bootstrap resample kept one class after {MAX_REDRAWS} redraws")
        s = scores[idx]
        aucs.append(auc_rank(s[yy], s[~yy]))
    return float(min(aucs)), float(max(aucs))
