from __future__ import annotations

import logging
from typing import Callable, List, Sequence, Tuple

import numpy as np

from ..errors import SolverDivergedError
from ..regularizer.groups import GroupSpec
from ..regularizer.model import ExtendedModel
from .config import FitConfig
from .dataset import Dataset
from .loss import lipschitz, logistic_loss_grad, refit_intercept
from .prox import prox_linf

logger = logging.getLogger("costwise.solver")

RHO_RATIO = 10.0
RHO_SCALE = 2.0
RHO_PERIOD = 10


def _accelerated(
    fun_grad: Callable[[np.ndarray], Tuple[float, np.ndarray]],
    x0: np.ndarray,
    L: float,
    iters: int,
    tol: float,
) -> np.ndarray:
    """Nesterov gradient descent with adaptive restart; stops on a small gradient."""
    x = x0.copy()
    yk = x0.copy()
    t = 1.0
    f_prev = np.inf
    for _ in range(iters):
        f, g = fun_grad(yk)
        if np.linalg.norm(g) <= tol:
            x = yk
            break
        x_new = yk - g / L
        t_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
        if f > f_prev:
            # restart
            yk, t = x.copy(), 1.0
            f_prev = np.inf
            continue
        yk = x_new + ((t - 1.0) / t_new) * (x_new - x)
        x, t, f_prev = x_new, t_new, f
    return x


def fit_group(data: Dataset, specs: Sequence[GroupSpec], cfg: FitConfig) -> ExtendedModel:
    """
    Logistic loss plus the overlapping group l-inf penalty, by ADMM consensus.

    Every group with positive weight gets its own copy z_g of beta restricted
    to the group; the z-step is a closed-form l-inf prox, the beta-step a
    smooth problem solved by accelerated gradient. The intercept is not
    penalised and is refitted at the end.
    """
    X, y = data.X, data.y
    n, d = X.shape

    blocks: List[np.ndarray] = []
    weights: List[float] = []
    for spec in specs:
        for g in spec.groups:
            w = spec.lam * g.cost
            if w > 0 and g.indices:
                blocks.append(np.asarray(g.indices, dtype=int))
                weights.append(w)

    count = np.zeros(d)
    for idx in blocks:
        count[idx] += 1.0

    beta = np.zeros(d)
    b = refit_intercept(beta, 0.0, X, y)
    z = [np.zeros(idx.size) for idx in blocks]
    u = [np.zeros(idx.size) for idx in blocks]
    rho = float(cfg.admm_rho)
    L_loss = lipschitz(X) if d else 0.0
    inner_tol = cfg.tol * 1e-2
    diag = {"iterations": 0, "primal_residual": 0.0, "dual_residual": 0.0, "rho": rho, "converged": False}

    def smooth(anchor: np.ndarray) -> Callable[[np.ndarray], Tuple[float, np.ndarray]]:
        def fun_grad(theta: np.ndarray) -> Tuple[float, np.ndarray]:
            bt, b0 = theta[:-1], theta[-1]
            loss, gb, g0 = logistic_loss_grad(bt, b0, data)
            quad = 0.5 * rho * float(np.dot(count * bt, bt) - 2.0 * np.dot(anchor, bt))
            return loss + quad, np.append(gb + rho * (count * bt - anchor), g0)
        return fun_grad

    if not blocks:
        # geen actieve groepen: gewone logistische regressie
        theta = _accelerated(smooth(np.zeros(d)), np.append(beta, b), L_loss, cfg.max_iters, inner_tol)
        loss = logistic_loss_grad(theta[:-1], theta[-1], data)[0]
        if not np.isfinite(loss):
            raise SolverDivergedError(cfg.max_iters, "admm")
        beta = theta[:-1]
        diag.update(converged=True)
        b = refit_intercept(beta, theta[-1], X, y)
        logger.info("[admm] no penalised groups; plain logistic fit")
        return ExtendedModel(beta=beta, intercept=b, method="group", diagnostics=diag)

    p_total = float(sum(idx.size for idx in blocks))
    for it in range(1, cfg.max_iters + 1):
        anchor = np.zeros(d)
        for idx, zg, ug in zip(blocks, z, u):
            anchor[idx] += zg - ug

        L = L_loss + rho * float(count.max())
        theta = _accelerated(smooth(anchor), np.append(beta, b), L, cfg.inner_iters, inner_tol)
        beta, b = theta[:-1], float(theta[-1])

        loss = logistic_loss_grad(beta, b, data)[0]
        if not np.isfinite(loss) or not np.isfinite(beta).all():
            raise SolverDivergedError(it, "admm")

        r_sq = s_sq = bz_sq = z_sq = u_sq = 0.0
        for k, (idx, w) in enumerate(zip(blocks, weights)):
            bg = beta[idx]
            z_old = z[k]
            z[k] = prox_linf(bg + u[k], w / rho)
            u[k] = u[k] + bg - z[k]
            r_sq += float(np.sum((bg - z[k]) ** 2))
            s_sq += float(np.sum((z[k] - z_old) ** 2))
            bz_sq += float(np.sum(bg ** 2))
            z_sq += float(np.sum(z[k] ** 2))
            u_sq += float(np.sum(u[k] ** 2))

        r = np.sqrt(r_sq)
        s = rho * np.sqrt(s_sq)
        eps_pri = cfg.tol * (np.sqrt(p_total) + max(np.sqrt(z_sq), np.sqrt(bz_sq)))
        eps_dual = cfg.tol * (np.sqrt(p_total) + rho * np.sqrt(u_sq))
        diag.update(iterations=it, primal_residual=float(r), dual_residual=float(s), rho=rho)

        if r <= eps_pri and s <= eps_dual:
            diag["converged"] = True
            break

        if cfg.adaptive_rho and it % RHO_PERIOD == 0:
            if r > RHO_RATIO * s:
                rho *= RHO_SCALE
                u = [ug / RHO_SCALE for ug in u]
            elif s > RHO_RATIO * r:
                rho /= RHO_SCALE
                u = [ug * RHO_SCALE for ug in u]

    logger.info(
        "[admm] %d groups, %d iterations, r=%.2e s=%.2e rho=%g converged=%s",
        len(blocks), diag["iterations"], diag["primal_residual"], diag["dual_residual"], rho, diag["converged"],
    )

    # eindwaarde uit de consensus-kopieën: een groep op nul zet al zijn leden op nul
    total = np.zeros(d)
    zero = np.zeros(d, dtype=bool)
    for idx, zg in zip(blocks, z):
        total[idx] += zg
        if not np.any(zg):
            zero[idx] = True
    covered = count > 0
    final = beta.copy()
    final[covered] = total[covered] / count[covered]
    final[zero] = 0.0
    b = refit_intercept(final, b, X, y)
    return ExtendedModel(beta=final, intercept=b, method="group", diagnostics=diag)
