from __future__ import annotations

import numpy as np


def project_l1(v: np.ndarray, r: float) -> np.ndarray:
    """
    Euclidean projection onto the l1 ball of radius r (sort-based
    water-filling). Signs are kept; a point already inside is returned as is.
    """
    v = np.asarray(v, dtype=float)
    if r < 0:
        raise ValueError("r must be >= 0")
    if r == 0:
        return np.zeros_like(v)
    a = np.abs(v)
    if a.sum() <= r:
        return v.copy()
    decr = np.sort(a, axis=None)[::-1]
    cums = np.cumsum(decr)
    theta = (cums - r) / np.arange(1, decr.size + 1)
    k = np.max(np.flatnonzero(decr - theta > 0))
    return np.sign(v) * np.maximum(a - theta[k], 0.0)


def prox_linf(v: np.ndarray, tau: float) -> np.ndarray:
    """prox of tau * ||.||_inf via Moreau: v minus its projection on the l1 ball of radius tau."""
    v = np.asarray(v, dtype=float)
    if tau < 0:
        raise ValueError("tau must be >= 0")
    if tau == 0:
        return v.copy()
    return v - project_l1(v, tau)


def soft_threshold(v, t):
    """sign(v) * max(|v| - t, 0); works element-wise on arrays and on scalars."""
    out = np.sign(v) * np.maximum(np.abs(v) - t, 0.0)
    return float(out) if np.ndim(out) == 0 else out
