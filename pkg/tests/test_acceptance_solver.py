import numpy as np
import pytest
from scipy.optimize import brentq
from scipy.special import expit, log_expit

from costwise.regularizer import ExtendedModel, relaxed_penalty
from costwise.regularizer.groups import Group, GroupSpec
from costwise.solver import Dataset, FitConfig, fit_group, logistic_loss, logistic_loss_grad, project_l1, prox_linf


def _prox_oracle(v, tau):
    """prox of tau*||.||_inf as clip(v, -t, t) with t minimising 0.5*sum((|v|-t)_+^2) + tau*t."""
    a = np.abs(v)
    slope = lambda t: tau - np.maximum(a - t, 0.0).sum()
    if slope(0.0) >= 0:
        return np.zeros_like(v)
    t = brentq(slope, 0.0, a.max(), xtol=1e-14)
    return np.clip(v, -t, t)


def test_prox_linf_against_oracle():
    rng = np.random.default_rng(0)
    for _ in range(500):
        v = rng.normal(size=int(rng.integers(1, 12))) * rng.choice([0.1, 1.0, 10.0])
        tau = float(rng.exponential(2.0))
        np.testing.assert_allclose(prox_linf(v, tau), _prox_oracle(v, tau), atol=1e-6)


def test_project_l1_feasible_and_kkt():
    rng = np.random.default_rng(1)
    for _ in range(500):
        v = rng.normal(size=int(rng.integers(1, 12))) * 3
        r = float(rng.exponential(1.0)) + 1e-3
        x = project_l1(v, r)
        assert np.abs(x).sum() <= r + 1e-10
        assert (np.sign(x) * np.sign(v) >= 0).all()
        if np.abs(v).sum() <= r:
            np.testing.assert_array_equal(x, v)
            continue
        assert np.abs(x).sum() == pytest.approx(r, abs=1e-10)
        # water-filling: een gemeenschappelijke drempel theta
        shrink = np.abs(v) - np.abs(x)
        on = np.abs(x) > 0
        theta = shrink[on][0]
        np.testing.assert_allclose(shrink[on], theta, atol=1e-10)
        assert (np.abs(v)[~on] <= theta + 1e-10).all()


def test_gradient_check_random_instances():
    rng = np.random.default_rng(2)
    h = 1e-6
    for _ in range(20):
        n, d = int(rng.integers(5, 40)), int(rng.integers(1, 6))
        X = rng.normal(size=(n, d))
        y = rng.choice([-1.0, 1.0], size=n)
        data = Dataset(X=X, y=y, feature_names=tuple(f"x{j}" for j in range(d)))
        for _ in range(10):
            beta, b = rng.normal(size=d), float(rng.normal())
            _, g, g0 = logistic_loss_grad(beta, b, data)
            num = np.array([
                (logistic_loss(beta + h * e, b, X, y) - logistic_loss(beta - h * e, b, X, y)) / (2 * h)
                for e in np.eye(d)
            ])
            np.testing.assert_allclose(g, num, rtol=1e-5, atol=1e-9)
            num0 = (logistic_loss(beta, b + h, X, y) - logistic_loss(beta, b - h, X, y)) / (2 * h)
            assert g0 == pytest.approx(num0, rel=1e-5, abs=1e-9)


def _grid_values(X, y, specs, B1, B2):
    """Objective on a grid of (beta1, beta2); intercept optimised per point by Newton."""
    betas = np.stack([B1.ravel(), B2.ravel()], axis=1)
    xb = betas @ X.T
    b = np.zeros(len(betas))
    for _ in range(30):
        m = xb + b[:, None]
        g = np.mean(-y * expit(-y * m), axis=1)
        p = expit(m)
        b -= g / np.maximum(np.mean(p * (1 - p), axis=1), 1e-12)
    loss = -np.mean(log_expit(y * (xb + b[:, None])), axis=1)
    pen = np.zeros(len(betas))
    for spec in specs:
        for grp in spec.groups:
            pen += spec.lam * grp.cost * np.abs(betas[:, list(grp.indices)]).max(axis=1)
    return loss + pen


def _grid_min(X, y, specs):
    step = 0.05
    axis = np.arange(-5.0, 5.0 + step / 2, step)
    B1, B2 = np.meshgrid(axis, axis, indexing="ij")
    vals = _grid_values(X, y, specs, B1, B2)
    k = int(np.argmin(vals))
    c1, c2 = B1.ravel()[k], B2.ravel()[k]
    fine = np.arange(-0.06, 0.06 + 5e-4, 1e-3)
    F1, F2 = np.meshgrid(c1 + fine, c2 + fine, indexing="ij")
    return float(_grid_values(X, y, specs, F1, F2).min())


@pytest.mark.slow
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_fit_group_matches_grid_search(seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(60, 2))
    p = expit(X @ np.array([1.2, -0.6]) + 0.3)
    y = np.where(rng.random(60) < p, 1.0, -1.0)
    data = Dataset(X=X, y=y, feature_names=("a", "b"))
    specs = [GroupSpec("financial", 1.0, (Group("t1", 0.05, (0, 1)), Group("t2", 0.03, (1,))))]

    m = fit_group(data, specs, FitConfig(lambda_financial=1.0, max_iters=20_000))
    got = logistic_loss(m.beta, m.intercept, X, y) + relaxed_penalty(ExtendedModel(beta=m.beta), specs)
    best = _grid_min(X, y, specs)
    assert abs(got - best) <= 1e-4 * best
