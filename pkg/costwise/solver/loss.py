from __future__ import annotations

from typing import Tuple

import numpy as np
from scipy.special import expit, log_expit

from .dataset import Dataset


def logistic_loss(beta: np.ndarray, intercept: float, X: np.ndarray, y: np.ndarray) -> float:
    margin = y * (X @ beta + intercept)
    return float(-np.mean(log_expit(margin)))


def logistic_loss_grad(beta: np.ndarray, intercept: float, data: Dataset) -> Tuple[float, np.ndarray, float]:
    """
    Mean logistic loss log(1 + exp(-y (x'beta + b))) with labels in {-1, +1},
    its gradient in beta and its derivative in the intercept.
    """
    X, y = data.X, data.y
    margin = y * (X @ beta + intercept)
    loss = float(-np.mean(log_expit(margin)))
    g = -y * expit(-margin) / y.size
    return loss, X.T @ g, float(g.sum())


def lipschitz(X: np.ndarray) -> float:
    """Lipschitz constant of the loss gradient in (beta, intercept)."""
    Xb = np.hstack([X, np.ones((X.shape[0], 1))])
    return float(np.linalg.norm(Xb, 2) ** 2 / (4.0 * X.shape[0]))


def refit_intercept(beta: np.ndarray, intercept: float, X: np.ndarray, y: np.ndarray, iters: int = 50) -> float:
    """1-D Newton on the intercept with beta fixed."""
    xb = X @ beta
    b = float(intercept)
    for _ in range(iters):
        m = xb + b
        g = float(np.mean(-y * expit(-y * m)))
        p = expit(m)
        h = float(np.mean(p * (1.0 - p)))
        if h <= 1e-12:
            break
        step = g / h
        b -= step
        if abs(step) < 1e-12:
            break
    return b
