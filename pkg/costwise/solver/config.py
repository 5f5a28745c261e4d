from __future__ import annotations

from pydantic import BaseModel, Field

from ..config import settings


class FitConfig(BaseModel):
    """Knobs of one fit. Defaults come from Settings (env / .env)."""

    lambda_financial: float = Field(default=0.0, ge=0)
    lambda_time: float = Field(default=0.0, ge=0)
    max_iters: int = Field(default_factory=lambda: settings.MAX_ITERS, gt=0)
    tol: float = Field(default_factory=lambda: settings.TOL, gt=0)
    admm_rho: float = Field(default_factory=lambda: settings.ADMM_RHO, gt=0)
    adaptive_rho: bool = True
    inner_iters: int = Field(default=200, gt=0)
    seed: int = Field(default_factory=lambda: settings.SEED)
