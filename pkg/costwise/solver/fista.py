from __future__ import annotations

import logging
from typing import Optional

import numpy as np

from ..errors import SolverDivergedError
from ..regularizer.model import ExtendedModel
from .config import FitConfig
from .dataset import Dataset
from .loss import lipschitz, logistic_loss_grad, refit_intercept
from .prox import soft_threshold

logger = logging.getLogger("costwise.solver")


def fit_scaled_l1(data: Dataset, lam: float, scale: np.ndarray, cfg: FitConfig) -> ExtendedModel:
    """
    Logistic loss plus lam * sum_i s_i |beta_i| by FISTA with function-value
    restart. The intercept takes plain gradient steps.
    """
    if lam < 0:
        raise ValueError("lambda must be >= 0")
    X, y = data.X, data.y
    d = X.shape[1]
    scale = np.asarray(scale, dtype=float)
    if scale.shape != (d,) or (scale <= 0).any():
        raise ValueError(f"scale must be {d} positive numbers")

    L = lipschitz(X) if d else 1.0
    thresh = lam * scale / L

    def objective(theta: np.ndarray) -> float:
        loss = logistic_loss_grad(theta[:-1], theta[-1], data)[0]
        return loss + lam * float(np.sum(scale * np.abs(theta[:-1])))

    x = np.append(np.zeros(d), refit_intercept(np.zeros(d), 0.0, X, y))
    yk = x.copy()
    t = 1.0
    f_x = objective(x)
    it = 0
    converged = False
    for it in range(1, cfg.max_iters + 1):
        _, gb, g0 = logistic_loss_grad(yk[:-1], yk[-1], data)
        step = yk - np.append(gb, g0) / L
        x_new = np.append(soft_threshold(step[:-1], thresh), step[-1])
        f_new = objective(x_new)
        if not np.isfinite(f_new):
            raise SolverDivergedError(it, "fista")
        if f_new > f_x and t > 1.0:
            # restart vanuit het laatste goede punt
            yk, t = x.copy(), 1.0
            continue
        t_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
        delta = float(np.linalg.norm(x_new - x))
        yk = x_new + ((t - 1.0) / t_new) * (x_new - x)
        x, t, f_x = x_new, t_new, f_new
        if delta <= cfg.tol * max(1.0, float(np.linalg.norm(x))):
            converged = True
            break

    logger.info("[fista] lambda=%g, %d iterations, converged=%s", lam, it, converged)
    beta = x[:-1]
    b = refit_intercept(beta, float(x[-1]), X, y)
    return ExtendedModel(
        beta=beta,
        intercept=b,
        method="l1-scaled",
        diagnostics={"iterations": it, "converged": converged},
    )


def fit_l1(data: Dataset, lam: float, cfg: FitConfig, scale: Optional[np.ndarray] = None) -> ExtendedModel:
    model = fit_scaled_l1(data, lam, np.ones(data.X.shape[1]) if scale is None else scale, cfg)
    model.method = "l1"
    return model
