from __future__ import annotations

import logging
from typing import Optional, Tuple

import numpy as np

from ..config import seed_from_env
from ..errors import DataError
from ..solver.dataset import Dataset
from .cohort import Cohort

logger = logging.getLogger("costwise.data")


def split(cohort: Cohort, train_frac: float = 0.75, seed: Optional[int] = None) -> Tuple[Cohort, Cohort]:
    """Patient-level split, stratified by outcome so both sides keep the class ratio."""
    if not cohort.patients:
        raise DataError("cannot split an empty cohort")
    if not 0.0 < train_frac < 1.0:
        raise DataError(f"train_frac must lie in (0, 1), got {train_frac}")
    rng = np.random.default_rng(seed_from_env(seed))
    train_ids = []
    for group in (cohort.positives, cohort.negatives):
        ids = [p.id for p in group]
        order = rng.permutation(len(ids))
        k = int(round(train_frac * len(ids)))
        train_ids.extend(ids[i] for i in order[:k])
    train = cohort.subset(train_ids)
    test = cohort.subset(p.id for p in cohort.patients if p.id not in set(train_ids))
    return train, test


def windows_dataset(cohort: Cohort) -> Dataset:
    """Every stored window as one sample, labelled from event_time."""
    rows, labels, pids = [], [], []
    for p in cohort.patients:
        if p.X.shape[0] == 0:
            continue
        rows.append(p.X)
        labels.append(p.labels(cohort.horizon))
        pids.extend([p.id] * p.X.shape[0])
    if not rows:
        raise DataError("cohort has no windows")
    return Dataset(
        X=np.vstack(rows),
        y=np.concatenate(labels),
        feature_names=cohort.feature_names,
        patient_ids=np.asarray(pids),
    )


def make_training_set(cohort: Cohort, seed: Optional[int] = None) -> Dataset:
    """
    Balanced window sample: negatives are subsampled to the number of positive
    windows (positives are subsampled instead in the rare opposite case).
    """
    data = windows_dataset(cohort)
    pos = np.flatnonzero(data.y > 0)
    neg = np.flatnonzero(data.y < 0)
    if pos.size == 0:
        raise DataError("no positive windows in the training split")
    if neg.size == 0:
        raise DataError("no negative windows in the training split")
    rng = np.random.default_rng(seed_from_env(seed))
    n = min(pos.size, neg.size)
    if neg.size > n:
        neg = np.sort(rng.choice(neg, size=n, replace=False))
    if pos.size > n:
        pos = np.sort(rng.choice(pos, size=n, replace=False))
    keep = np.sort(np.concatenate([pos, neg]))
    logger.info("[cohort] training set: %d windows per class", n)
    return Dataset(
        X=data.X[keep],
        y=data.y[keep],
        feature_names=data.feature_names,
        patient_ids=data.patient_ids[keep],
    )
