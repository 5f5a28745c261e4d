from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
import pandas as pd
from pydantic import ValidationError

from ..errors import DataError
from ..schemas import CohortMeta
from .cohort import Cohort, Patient

logger = logging.getLogger("costwise.data")

ID_COLUMNS = ["patient_id", "window", "event_time", "label"]


def cohort_frame(cohort: Cohort) -> pd.DataFrame:
    """
    One row per stored window.

    Columns: patient_id, window (0-based), event_time (empty for negatives),
    label (+1 when the event falls within the next `horizon` windows, else -1),
    then one column per feature in circuit order.
    """
    frames: List[pd.DataFrame] = []
    for p in cohort.patients:
        n = p.X.shape[0]
        f = pd.DataFrame(p.X, columns=list(cohort.feature_names))
        f.insert(0, "label", p.labels(cohort.horizon).astype(int))
        f.insert(0, "event_time", pd.array([p.event_time] * n, dtype="Int64"))
        f.insert(0, "window", np.arange(n))
        f.insert(0, "patient_id", p.id)
        frames.append(f)
    if not frames:
        return pd.DataFrame(columns=ID_COLUMNS + list(cohort.feature_names))
    return pd.concat(frames, ignore_index=True)


def meta_path(path: Union[str, Path]) -> Path:
    p = Path(path)
    return p.with_name(p.stem + ".meta.json")


def write_cohort_csv(cohort: Cohort, path: Union[str, Path]) -> Path:
    """Write the CSV plus its `.meta.json` sidecar (horizon, seed, noise, beta*)."""
    p = Path(path)
    cohort_frame(cohort).to_csv(p, index=False)
    meta = CohortMeta(
        horizon=cohort.horizon,
        seed=cohort.seed,
        noise=cohort.noise,
        beta_star=dict(cohort.beta_star),
        feature_names=list(cohort.feature_names),
    )
    meta_path(p).write_text(json.dumps(meta.model_dump(), sort_keys=True, indent=2) + "\n", encoding="utf-8")
    logger.info("[cohort] wrote %s (%d patients)", p.name, len(cohort.patients))
    return p


def _read_meta(p: Path) -> Optional[CohortMeta]:
    mp = meta_path(p)
    if not mp.exists():
        return None
    try:
        return CohortMeta.model_validate(json.loads(mp.read_text(encoding="utf-8")))
    except json.JSONDecodeError as e:
        raise DataError(f"cohort metadata {mp.name} is not valid JSON: {e}") from e
    except ValidationError as e:
        err = e.errors()[0]
        raise DataError(f"cohort metadata {mp.name} is malformed: {'.'.join(map(str, err['loc']))}: {err['msg']}") from e


def read_cohort_csv(path: Union[str, Path], horizon: Optional[int] = None) -> Cohort:
    """
    Inverse of write_cohort_csv; stored labels must agree with event_time.

    The horizon comes from the sidecar unless given; a CSV without sidecar
    needs it explicitly. An explicit horizon that contradicts the sidecar is
    an error.
    """
    p = Path(path)
    if not p.exists():
        raise DataError(f"cohort file not found: {p}")
    meta = _read_meta(p)
    if meta is not None and horizon is not None and horizon != meta.horizon:
        raise DataError(f"horizon {horizon} disagrees with {meta_path(p).name} (horizon {meta.horizon})")
    if horizon is None:
        if meta is None:
            raise DataError(f"no horizon given and no {meta_path(p).name} next to {p.name}")
        horizon = meta.horizon
    df = pd.read_csv(p, dtype={"patient_id": str}, float_precision="round_trip")
    missing = [c for c in ID_COLUMNS if c not in df.columns]
    if missing:
        raise DataError(f"cohort CSV lacks column '{missing[0]}'")
    features = [c for c in df.columns if c not in ID_COLUMNS]
    if df[features].isna().any().any():
        raise DataError("cohort CSV has missing feature values")

    patients = []
    for pid, rows in df.groupby("patient_id", sort=False):
        rows = rows.sort_values("window")
        ev = rows["event_time"].dropna().unique()
        event_time = int(ev[0]) if ev.size else None
        patient = Patient(id=str(pid), X=rows[features].to_numpy(dtype=float), event_time=event_time)
        if not np.array_equal(patient.labels(horizon), rows["label"].to_numpy(dtype=float)):
            raise DataError(f"labels of patient '{pid}' disagree with its event_time")
        patients.append(patient)
    if meta is not None and meta.feature_names and meta.feature_names != features:
        raise DataError(f"feature columns of {p.name} disagree with {meta_path(p).name}")
    return Cohort(
        patients=tuple(patients),
        feature_names=tuple(features),
        horizon=horizon,
        seed=meta.seed if meta else None,
        beta_star=dict(meta.beta_star) if meta else {},
        noise=meta.noise if meta else None,
    )
