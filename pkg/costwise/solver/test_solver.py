import json

import numpy as np
import pytest
from scipy.optimize import minimize

from costwise.errors import DataError
from costwise.reduction import reduce
from costwise.regularizer.groups import Group, GroupSpec
from costwise.regularizer.index import ExtendedIndex
from costwise.regularizer.model import ExtendedModel
from costwise.solver import (
    Dataset,
    FitConfig,
    SavedModel,
    Standardizer,
    extend_design,
    fit_group,
    fit_l1,
    fit_scaled_l1,
    get_method,
    get_registry,
    load_model,
    logistic_loss,
    logistic_loss_grad,
    project_l1,
    prox_linf,
    save_model,
    soft_threshold,
)


def _data(seed=0, n=200, d=3):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, d))
    truth = np.linspace(1.0, -0.5, d)
    p = 1.0 / (1.0 + np.exp(-(X @ truth + 0.2)))
    y = np.where(rng.random(n) < p, 1.0, -1.0)
    return Dataset(X=X, y=y, feature_names=tuple(f"x{j}" for j in range(d)))


def _reference(data):
    """Unregularized fit by BFGS."""
    d = data.X.shape[1]

    def fun(theta):
        loss, g, g0 = logistic_loss_grad(theta[:-1], theta[-1], data)
        return loss, np.append(g, g0)

    res = minimize(fun, np.zeros(d + 1), jac=True, method="BFGS", options={"gtol": 1e-10, "maxiter": 10_000})
    return res.x[:-1], res.x[-1]


def test_project_l1_examples():
    np.testing.assert_allclose(project_l1(np.array([0.5, 0.2]), 1.0), [0.5, 0.2])
    np.testing.assert_allclose(project_l1(np.array([3.0, 1.0]), 1.0), [1.0, 0.0])
    np.testing.assert_allclose(project_l1(np.array([-3.0, 1.0]), 1.0), [-1.0, 0.0])


def test_prox_linf_examples():
    v = np.array([3.0, 1.0])
    np.testing.assert_allclose(prox_linf(v, 0.0), v)
    np.testing.assert_allclose(prox_linf(v, 1.0), [2.0, 1.0])
    np.testing.assert_allclose(prox_linf(np.array([0.5, 0.2]), 1.0), [0.0, 0.0])


def test_prox_linf_residual_is_in_l1_ball():
    rng = np.random.default_rng(0)
    for _ in range(100):
        v = rng.normal(size=int(rng.integers(1, 8))) * 3
        tau = float(rng.random() * 4)
        assert np.abs(v - prox_linf(v, tau)).sum() <= tau + 1e-12


def test_soft_threshold_examples():
    assert soft_threshold(1.5, 1.0) == 0.5
    assert soft_threshold(-0.2, 0.5) == 0.0
    assert soft_threshold(-2.0, 0.5) == -1.5
    np.testing.assert_allclose(soft_threshold(np.array([1.5, -2.0]), np.array([1.0, 0.5])), [0.5, -1.5])


def test_loss_examples():
    data = Dataset(X=np.array([[1.0], [1.0]]), y=np.array([1.0, -1.0]), feature_names=("a",))
    loss, g, g0 = logistic_loss_grad(np.zeros(1), 0.0, data)
    assert loss == pytest.approx(np.log(2.0))
    np.testing.assert_allclose(g, [0.0], atol=1e-15)
    assert g0 == pytest.approx(0.0, abs=1e-15)


def test_loss_is_overflow_safe():
    data = Dataset(X=np.array([[1e4], [-1e4]]), y=np.array([-1.0, 1.0]), feature_names=("a",))
    loss, g, _ = logistic_loss_grad(np.ones(1), 0.0, data)
    assert np.isfinite(loss) and loss == pytest.approx(1e4)
    assert np.isfinite(g).all()


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(5, 3))
    data = Dataset(X=X, y=np.array([1.0, -1.0, 1.0, 1.0, -1.0]), feature_names=("a", "b", "c"))
    beta, b = rng.normal(size=3), 0.3
    _, g, g0 = logistic_loss_grad(beta, b, data)
    h = 1e-6
    num = np.array([
        (logistic_loss(beta + h * e, b, X, data.y) - logistic_loss(beta - h * e, b, X, data.y)) / (2 * h)
        for e in np.eye(3)
    ])
    np.testing.assert_allclose(g, num, rtol=1e-5)
    num0 = (logistic_loss(beta, b + h, X, data.y) - logistic_loss(beta, b - h, X, data.y)) / (2 * h)
    assert g0 == pytest.approx(num0, rel=1e-5)


def test_dataset_rejects_bad_input():
    with pytest.raises(DataError):
        Dataset(X=np.zeros((2, 1)), y=np.array([0.0, 1.0]), feature_names=("a",))
    with pytest.raises(DataError):
        Dataset(X=np.array([[np.nan], [1.0]]), y=np.array([1.0, -1.0]), feature_names=("a",))


def test_extend_design_tiny(tiny):
    form = reduce(tiny)
    X = np.array([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]])
    ext = extend_design(X, form, ("f1", "f2"))
    assert ext.shape == (3, 4)
    np.testing.assert_array_equal(ext[:, 0], ext[:, 1])
    np.testing.assert_array_equal(ext[:, 2], X[:, 1])
    with pytest.raises(DataError, match="f2"):
        extend_design(X[:, :1], form, ("f1",))


def test_extend_design_single_ways_is_identity():
    from costwise.circuit import from_dict
    c = from_dict({
        "layers": ["f", "t"], "selection_layer": 2,
        "nodes": [
            {"id": "b", "layer": 1, "gate": "OR", "children": ["t2"]},
            {"id": "a", "layer": 1, "gate": "OR", "children": ["t1"]},
            {"id": "t1", "layer": 2, "gate": "INPUT"},
            {"id": "t2", "layer": 2, "gate": "INPUT"},
        ],
    })
    X = np.arange(6.0).reshape(3, 2)
    np.testing.assert_array_equal(extend_design(X, reduce(c), ("a", "b")), X)


def test_extend_design_drops_infeasible(tiny):
    from costwise.circuit import filter_by_wait
    form = reduce(filter_by_wait(tiny, 0))
    assert extend_design(np.ones((2, 2)), form, ("f1", "f2")).shape == (2, 0)


def test_standardizer_constant_column():
    X = np.array([[1.0, 5.0], [3.0, 5.0]])
    s = Standardizer.fit(X)
    np.testing.assert_allclose(s.scale, [1.0, 1.0])
    np.testing.assert_allclose(s.transform(X), [[-1.0, 0.0], [1.0, 0.0]])


def test_fit_config_validation():
    with pytest.raises(ValueError):
        FitConfig(lambda_financial=-1.0)
    with pytest.raises(ValueError):
        FitConfig(tol=0.0)
    assert FitConfig().max_iters == 5000


def _saved():
    index = ExtendedIndex(entries=(("f1", 1), ("f1", 2), ("f2", 1)))
    model = ExtendedModel(beta=np.array([0.5, 0.0, -1.25]), intercept=0.1, support_eps=1e-6, index=index)
    std = Standardizer(mean=np.array([1.0, 2.0]), scale=np.array([1.0, 0.5]))
    return SavedModel(model=model, index=index, config=FitConfig(lambda_financial=1e-3), standardizer=std, wait_cap=10.0)


def test_model_file_roundtrip(tmp_path):
    path = save_model(tmp_path / "m.json", _saved())
    back = load_model(path)
    assert back.index.entries == (("f1", 1), ("f1", 2), ("f2", 1))
    np.testing.assert_array_equal(back.model.beta, [0.5, 0.0, -1.25])
    assert back.model.intercept == 0.1
    assert back.config.lambda_financial == 1e-3
    assert back.wait_cap == 10.0
    np.testing.assert_array_equal(back.standardizer.scale, [1.0, 0.5])


@pytest.mark.parametrize(
    "edit, where",
    [
        (lambda d: d.pop("beta"), "beta"),
        (lambda d: d.update(intercept="high"), "intercept"),
        (lambda d: d.update(index=[["f1", 1]]), "coefficients"),
        (lambda d: d.update(format=2), "format"),
        (lambda d: d["config"].update(tol=-1.0), "tol"),
    ],
)
def test_malformed_model_file_names_the_field(tmp_path, edit, where):
    path = save_model(tmp_path / "m.json", _saved())
    data = json.loads(path.read_text())
    edit(data)
    path.write_text(json.dumps(data))
    with pytest.raises(DataError, match=where):
        load_model(path)


def test_model_file_not_json(tmp_path):
    path = tmp_path / "m.json"
    path.write_text("{oops")
    with pytest.raises(DataError, match="not valid JSON"):
        load_model(path)
    with pytest.raises(DataError, match="not found"):
        load_model(tmp_path / "missing.json")


def test_fit_group_without_penalty_matches_reference():
    data = _data(0)
    ref_beta, ref_b = _reference(data)
    spec = GroupSpec("financial", 0.0, (Group("t", 1.0, (0, 1, 2)),))
    m = fit_group(data, [spec], FitConfig())
    np.testing.assert_allclose(m.beta, ref_beta, atol=1e-4)
    assert m.intercept == pytest.approx(ref_b, abs=1e-4)


def test_fit_group_large_lambda_gives_zero():
    data = _data(2, d=4)
    specs = [GroupSpec("financial", 1e3, (Group("bmp", 10.0, (0, 2)), Group("cmp", 15.0, (1, 3))))]
    m = fit_group(data, specs, FitConfig(lambda_financial=1e3))
    assert not m.active().any()
    pos, neg = (data.y > 0).sum(), (data.y < 0).sum()
    assert m.intercept == pytest.approx(np.log(pos / neg), abs=1e-3)


def test_fit_group_beats_zero_and_is_deterministic():
    from costwise.regularizer import ExtendedModel, relaxed_penalty
    data = _data(3, d=4)
    specs = [GroupSpec("financial", 0.02, (Group("a", 1.0, (0, 1)), Group("b", 2.0, (1, 2, 3))))]
    cfg = FitConfig()
    m1 = fit_group(data, specs, cfg)
    m2 = fit_group(data, specs, cfg)
    np.testing.assert_array_equal(m1.beta, m2.beta)
    assert m1.intercept == m2.intercept

    def objective(beta, b):
        return logistic_loss(beta, b, data.X, data.y) + relaxed_penalty(ExtendedModel(beta=beta), specs)

    pos, neg = (data.y > 0).sum(), (data.y < 0).sum()
    at_zero = objective(np.zeros(4), np.log(pos / neg))
    assert objective(m1.beta, m1.intercept) <= at_zero + 1e-9
    ref_beta, ref_b = _reference(data)
    assert objective(m1.beta, m1.intercept) <= objective(ref_beta, ref_b) + 1e-6


def test_fit_l1_reference_and_huge_lambda():
    data = _data(4)
    ref_beta, _ = _reference(data)
    m = fit_l1(data, 0.0, FitConfig(tol=1e-10, max_iters=20_000))
    np.testing.assert_allclose(m.beta, ref_beta, atol=1e-4)
    assert m.method == "l1"
    assert not fit_l1(data, 1e3, FitConfig()).active().any()


def test_fit_scaled_l1_penalises_expensive_more():
    data = _data(5, d=2)
    cheap = fit_scaled_l1(data, 0.05, np.array([1.0, 1.0]), FitConfig())
    costly = fit_scaled_l1(data, 0.05, np.array([1.0, 50.0]), FitConfig())
    assert abs(costly.beta[1]) < abs(cheap.beta[1])
    assert costly.beta[1] == 0.0
    with pytest.raises(ValueError):
        fit_scaled_l1(data, 0.05, np.array([1.0, 0.0]), FitConfig())


def test_registry_has_builtin_methods():
    assert {"group", "l1", "l1-scaled"} <= set(get_registry())
    assert get_method("group").name == "group"
    with pytest.raises(KeyError, match="unknown fit method"):
        get_method("nope")
