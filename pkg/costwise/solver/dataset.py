from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sklearn.preprocessing import StandardScaler

from ..errors import DataError
from ..reduction.form import ThreeLayerForm


@dataclass
class Dataset:
    """Samples over named columns with labels in {-1, +1}."""

    X: np.ndarray
    y: np.ndarray
    feature_names: Tuple[str, ...]
    patient_ids: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        self.X = np.asarray(self.X, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        self.feature_names = tuple(self.feature_names)
        if self.X.ndim != 2 or self.X.shape[0] != self.y.shape[0]:
            raise DataError(f"X {self.X.shape} and y {self.y.shape} do not line up")
        if self.X.shape[1] != len(self.feature_names):
            raise DataError(f"{self.X.shape[1]} columns but {len(self.feature_names)} feature names")
        if not np.isin(self.y, (-1.0, 1.0)).all():
            raise DataError("labels must be -1 or +1")
        if not np.isfinite(self.X).all():
            raise DataError("X contains missing or non-finite values")

    @property
    def n_samples(self) -> int:
        return self.X.shape[0]

    def columns(self, names: Sequence[str]) -> np.ndarray:
        pos = {n: j for j, n in enumerate(self.feature_names)}
        missing = [n for n in names if n not in pos]
        if missing:
            raise DataError(f"missing feature column '{missing[0]}'")
        return self.X[:, [pos[n] for n in names]]

    def restrict(self, names: Sequence[str]) -> "Dataset":
        return Dataset(X=self.columns(names), y=self.y, feature_names=tuple(names), patient_ids=self.patient_ids)


def extended_names(form: ThreeLayerForm) -> Tuple[str, ...]:
    return tuple(f"{w.feature_id}#{w.index}" for w in form.ways)


def extend_design(X: np.ndarray, form: ThreeLayerForm, feature_names: Sequence[str]) -> np.ndarray:
    """One column per (feature, way), a copy of the feature's column; dropped features vanish."""
    pos = {n: j for j, n in enumerate(feature_names)}
    cols: List[int] = []
    for w in form.ways:
        if w.feature_id not in pos:
            raise DataError(f"missing feature column '{w.feature_id}'")
        cols.append(pos[w.feature_id])
    X = np.asarray(X, dtype=float)
    return X[:, cols] if cols else np.zeros((X.shape[0], 0))


def extend_dataset(data: Dataset, form: ThreeLayerForm) -> Dataset:
    return Dataset(
        X=extend_design(data.X, form, data.feature_names),
        y=data.y,
        feature_names=extended_names(form),
        patient_ids=data.patient_ids,
    )


@dataclass
class Standardizer:
    """z-scoring fitted on the training split; constant columns keep scale 1."""

    mean: np.ndarray = field(default_factory=lambda: np.zeros(0))
    scale: np.ndarray = field(default_factory=lambda: np.ones(0))

    @classmethod
    def fit(cls, X: np.ndarray) -> "Standardizer":
        scaler = StandardScaler().fit(np.asarray(X, dtype=float))
        return cls(mean=scaler.mean_.copy(), scale=scaler.scale_.copy())

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=float) - self.mean) / self.scale

    def apply(self, data: Dataset) -> Dataset:
        return Dataset(X=self.transform(data.X), y=data.y, feature_names=data.feature_names, patient_ids=data.patient_ids)

    def to_dict(self) -> Dict[str, List[float]]:
        return {"mean": self.mean.tolist(), "scale": self.scale.tolist()}

    @classmethod
    def from_dict(cls, d: Dict[str, List[float]]) -> "Standardizer":
        return cls(mean=np.asarray(d["mean"], dtype=float), scale=np.asarray(d["scale"], dtype=float))
