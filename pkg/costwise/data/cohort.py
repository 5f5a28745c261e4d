from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np
from scipy.special import expit
from pydantic import BaseModel, Field

from ..circuit.model import CostCircuit
from ..config import settings
from ..errors import DataError

logger = logging.getLogger("costwise.data")

# routine vitals dragen het meeste signaal; de labwaarden overlappen ermee en voegen weinig toe
ROUTINE_PLANTED: Dict[str, float] = {
    "hr_raw": 0.20,
    "rr_raw": 0.12,
    "temp_raw": 0.12,
    "sbp_raw": -0.12,
    "map": -0.08,
    "spo2_raw": -0.08,
    "shock_index": 0.08,
}

DEFAULT_PLANTED: Dict[str, float] = {
    **ROUTINE_PLANTED,
    "lactate_raw": 0.10,
    "wbc_raw": 0.06,
    "creatinine_raw": 0.04,
}


class CohortConfig(BaseModel):
    """
    Generator knobs. Window count and horizon are stand-ins: the source
    cohort's window width and stride are not known.
    """

    n_pos: int = Field(default=300, ge=0)
    n_neg: int = Field(default=1700, ge=0)
    n_windows: int = Field(default=24, gt=1)
    horizon: int = Field(default=8, gt=0)
    noise: float = Field(default=0.5, gt=0)
    base_logit: float = -4.5
    drift_scale: float = Field(default=0.15, ge=0)
    step_scale: float = Field(default=0.3, ge=0)
    planted: Optional[Dict[str, float]] = None
    max_draws_factor: int = Field(default=200, gt=0)
    seed: int = Field(default_factory=lambda: settings.SEED)


@dataclass(frozen=True)
class Patient:
    id: str
    X: np.ndarray  # windows x features; positives only keep windows before onset
    event_time: Optional[int] = None

    @property
    def positive(self) -> bool:
        return self.event_time is not None

    def labels(self, horizon: int) -> np.ndarray:
        """+1 for windows whose next `horizon` windows contain the event, else -1."""
        t = np.arange(self.X.shape[0])
        if self.event_time is None:
            return -np.ones(t.size)
        e = self.event_time
        return np.where((t < e) & (e <= t + horizon), 1.0, -1.0)


@dataclass(frozen=True)
class Cohort:
    patients: Tuple[Patient, ...]
    feature_names: Tuple[str, ...]
    horizon: int
    seed: Optional[int] = None
    beta_star: Mapping[str, float] = field(default_factory=dict)
    noise: Optional[float] = None

    @property
    def positives(self) -> List[Patient]:
        return [p for p in self.patients if p.positive]

    @property
    def negatives(self) -> List[Patient]:
        return [p for p in self.patients if not p.positive]

    def subset(self, ids) -> "Cohort":
        keep = set(ids)
        return Cohort(
            patients=tuple(p for p in self.patients if p.id in keep),
            feature_names=self.feature_names,
            horizon=self.horizon,
            seed=self.seed,
            beta_star=self.beta_star,
            noise=self.noise,
        )


def planted_beta(circuit: CostCircuit, planted: Optional[Mapping[str, float]] = None) -> np.ndarray:
    features = circuit.features
    weights = DEFAULT_PLANTED if planted is None else planted
    beta = np.array([float(weights.get(f, 0.0)) for f in features])
    if not beta.any():
        if planted is not None:
            raise DataError("planted coefficients name no feature of the circuit")
        beta = np.ones(len(features))
    return beta


def generate(
    circuit: CostCircuit,
    n_pos: Optional[int] = None,
    n_neg: Optional[int] = None,
    horizon_windows: Optional[int] = None,
    seed: Optional[int] = None,
    cfg: Optional[CohortConfig] = None,
) -> Cohort:
    """
    Synthetic ICU-style cohort with a planted model over the circuit's features.

    Each patient follows a latent risk path r_t (severity + drift + random
    walk). A planted feature reads r_t with the sign of its coefficient plus
    its own noise; every other feature is noise only. The event hazard per
    window is sigmoid(x_t . beta* + base_logit), so several cheap planted
    features together recover most of what the planted labs add. Patients are
    drawn until both class quotas are full; positives keep only the windows
    strictly before onset.
    """
    cfg = cfg or CohortConfig()
    updates = {k: v for k, v in dict(n_pos=n_pos, n_neg=n_neg, horizon=horizon_windows, seed=seed).items() if v is not None}
    cfg = cfg.model_copy(update=updates)

    features = tuple(circuit.features)
    beta = planted_beta(circuit, cfg.planted)
    loading = np.sign(beta)
    rng = np.random.default_rng(cfg.seed)
    T = cfg.n_windows

    pos: List[Patient] = []
    neg: List[Patient] = []
    draws = 0
    limit = cfg.max_draws_factor * max(1, cfg.n_pos + cfg.n_neg)
    while len(pos) < cfg.n_pos or len(neg) < cfg.n_neg:
        draws += 1
        if draws > limit:
            raise DataError(f"could not fill class quotas after {limit} draws ({len(pos)} pos, {len(neg)} neg)")
        severity = rng.normal()
        drift = rng.normal(scale=cfg.drift_scale)
        steps = rng.normal(scale=cfg.step_scale, size=T)
        r = severity + drift * np.arange(T) + np.cumsum(steps)
        X = np.outer(r, loading) + rng.normal(scale=cfg.noise, size=(T, len(features)))
        hazard = expit(X @ beta + cfg.base_logit)
        hit = np.flatnonzero(rng.random(T) < hazard)

        if hit.size:
            onset = int(hit[0])
            if onset == 0 or len(pos) >= cfg.n_pos:
                continue
            pos.append(Patient(id="", X=X[:onset], event_time=onset))
        else:
            if len(neg) >= cfg.n_neg:
                continue
            neg.append(Patient(id="", X=X, event_time=None))

    # ids volgen de volgorde: eerst positieven, dan negatieven
    patients = tuple(
        Patient(id=f"p{i:05d}", X=p.X, event_time=p.event_time) for i, p in enumerate(pos + neg)
    )
    logger.info("[cohort] %d positive, %d negative patients after %d draws (seed=%d)", len(pos), len(neg), draws, cfg.seed)
    return Cohort(
        patients=patients,
        feature_names=features,
        horizon=cfg.horizon,
        seed=cfg.seed,
        beta_star=dict(zip(features, beta.tolist())),
        noise=cfg.noise,
    )
