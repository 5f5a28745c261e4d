from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from ..config import settings
from .index import ExtendedIndex


@dataclass
class ExtendedModel:
    """Logistic model over the extended (feature, way) coordinates."""

    beta: np.ndarray
    intercept: float = 0.0
    support_eps: float = field(default_factory=lambda: settings.SUPPORT_EPS)
    index: Optional[ExtendedIndex] = None
    method: str = "group"
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.beta = np.asarray(self.beta, dtype=float)

    def active(self) -> np.ndarray:
        return np.abs(self.beta) > self.support_eps

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.active())

    def decision(self, X_ext: np.ndarray) -> np.ndarray:
        return np.asarray(X_ext, dtype=float) @ self.beta + self.intercept
