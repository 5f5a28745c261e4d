import itertools
import json
import time

import numpy as np
import pytest

from costwise.circuit import bundled_fixture, filter_by_wait
from costwise.errors import PenaltyChannelError
from costwise.reduction import reduce
from costwise.regularizer import (
    ExtendedIndex,
    ExtendedModel,
    build_all_groups,
    build_groups,
    cheapest_way_costs,
    collapse,
    cost_report,
    exact_penalty,
    groups_to_dict,
    lift_to_extended,
    relaxed_penalty,
)


@pytest.fixture
def tiny_form(tiny):
    return reduce(tiny)


def _model(form, values):
    beta = np.zeros(form.extended_size)
    index = ExtendedIndex.from_form(form)
    for (f, p), v in values.items():
        beta[index.position(f, p)] = v
    return ExtendedModel(beta=beta, index=index)


def test_extended_index_tiny(tiny_form):
    index = ExtendedIndex.from_form(tiny_form)
    assert index.entries == (("f1", 1), ("f1", 2), ("f2", 1), ("f2", 2))
    assert index.ranges["f2"] == range(2, 4)
    with pytest.raises(KeyError):
        index.position("f1", 3)


def test_build_groups_tiny(tiny, tiny_form):
    fin = build_groups(tiny_form, tiny, "financial", 1.0)
    assert [(g.node, g.cost, g.indices) for g in fin.groups] == [("bmp", 10.0, (0, 2)), ("cmp", 15.0, (1, 3))]
    care = build_groups(tiny_form, tiny, "caregiver_time", 1.0)
    assert [(g.node, g.cost, g.indices) for g in care.groups] == [("a_blood", 5.0, (0, 1, 2, 3))]


def test_build_groups_rejects_wait_and_bad_lambda(tiny, tiny_form):
    with pytest.raises(PenaltyChannelError, match="handled by filtering"):
        build_groups(tiny_form, tiny, "wait", 1.0)
    with pytest.raises(PenaltyChannelError):
        build_groups(tiny_form, tiny, "financial", -1.0)
    with pytest.raises(PenaltyChannelError):
        build_groups(tiny_form, tiny, "nope", 1.0)


def test_zero_cost_group_is_emitted(icu, icu_form):
    fin = build_groups(icu_form, icu, "financial", 1.0)
    routine = [g for g in fin.groups if g.node == "routine_vitals"]
    assert routine and routine[0].cost == 0.0


def test_icu_groups_match_committed_dump(icu, icu_form):
    specs = build_all_groups(icu_form, icu, 1.0, 1.0)
    got = groups_to_dict(specs, ExtendedIndex.from_form(icu_form))
    expected = json.loads(bundled_fixture("icu_groups").read_text())
    assert got == expected


def test_exact_penalty_examples(tiny, tiny_form):
    specs = [build_groups(tiny_form, tiny, "financial", 1.0)]
    assert exact_penalty(_model(tiny_form, {}), specs) == 0.0
    assert exact_penalty(_model(tiny_form, {("f1", 1): 0.5}), specs) == 10.0
    # gedeelde test telt één keer
    assert exact_penalty(_model(tiny_form, {("f1", 1): 0.5, ("f2", 1): -2.0}), specs) == 10.0


def test_relaxed_penalty_examples(tiny, tiny_form):
    specs = [build_groups(tiny_form, tiny, "financial", 1.0)]
    assert relaxed_penalty(_model(tiny_form, {}), specs) == 0.0
    m = _model(tiny_form, {("f1", 1): 2.0, ("f2", 1): -1.0})
    assert relaxed_penalty(m, specs) == pytest.approx(20.0)
    for t in (0.0, 0.5, 3.0):
        scaled = ExtendedModel(beta=t * m.beta)
        assert relaxed_penalty(scaled, specs) == pytest.approx(t * 20.0)


def test_collapse_examples(tiny_form):
    assert collapse(_model(tiny_form, {}), tiny_form).features == ()
    sel = collapse(_model(tiny_form, {("f1", 2): 0.3}), tiny_form)
    assert sel.features == ("f1",)
    assert sel.selection_nodes == ("cmp",)
    assert sel.channel_nodes["caregiver_time"] == ("a_blood",)
    assert collapse(_model(tiny_form, {("f1", 2): 1e-9}), tiny_form).features == ()


def test_collapse_invariant_to_rescaling(tiny_form):
    m = _model(tiny_form, {("f1", 2): 0.3, ("f2", 1): -0.7})
    for t in (0.01, 2.0, 100.0):
        assert collapse(ExtendedModel(beta=t * m.beta), tiny_form) == collapse(m, tiny_form)


def test_cost_report_examples(tiny, tiny_form):
    empty = cost_report(collapse(_model(tiny_form, {}), tiny_form), tiny)
    assert empty == {"financial": 0.0, "caregiver_time": 0.0, "wait": 0.0}
    both_bmp = collapse(_model(tiny_form, {("f1", 1): 1.0, ("f2", 1): 1.0}), tiny_form)
    assert cost_report(both_bmp, tiny) == {"financial": 10.0, "caregiver_time": 5.0, "wait": 30.0}
    mixed = collapse(_model(tiny_form, {("f1", 1): 1.0, ("f2", 2): 1.0}), tiny_form)
    assert cost_report(mixed, tiny) == {"financial": 25.0, "caregiver_time": 5.0, "wait": 50.0}


def _keystone(circuit, form, model):
    specs = build_all_groups(form, circuit, 1.0, 1.0)
    report = cost_report(collapse(model, form), circuit)
    posthoc = sum(report[ch.name] for ch in circuit.sum_channels)
    assert exact_penalty(model, specs) == posthoc


def test_keystone_exhaustive_tiny(tiny, tiny_form):
    for bits in itertools.product([0.0, 1.0], repeat=tiny_form.extended_size):
        _keystone(tiny, tiny_form, ExtendedModel(beta=np.array(bits)))


def test_keystone_random_icu(icu, icu_form):
    rng = np.random.default_rng(11)
    for _ in range(100):
        beta = rng.normal(size=icu_form.extended_size) * (rng.random(icu_form.extended_size) < 0.15)
        _keystone(icu, icu_form, ExtendedModel(beta=beta))


def test_relaxed_penalty_is_a_norm():
    from costwise.regularizer.groups import Group, GroupSpec
    specs = [
        GroupSpec("a", 1.0, (Group("x", 2.0, (0, 1)), Group("y", 0.5, (1, 2, 3)))),
        GroupSpec("b", 3.0, (Group("z", 1.0, (3, 4)),)),
    ]
    rng = np.random.default_rng(3)
    zero = ExtendedModel(beta=np.zeros(5))
    assert relaxed_penalty(zero, specs) == 0.0
    for _ in range(50):
        u, v = rng.normal(size=5), rng.normal(size=5)
        pu = relaxed_penalty(ExtendedModel(beta=u), specs)
        pv = relaxed_penalty(ExtendedModel(beta=v), specs)
        assert pu > 0
        assert relaxed_penalty(ExtendedModel(beta=-2.5 * u), specs) == pytest.approx(2.5 * pu)
        assert relaxed_penalty(ExtendedModel(beta=u + v), specs) <= pu + pv + 1e-12


def test_exact_penalty_monotone_in_support(icu, icu_form):
    specs = build_all_groups(icu_form, icu, 1.0, 1.0)
    rng = np.random.default_rng(5)
    for _ in range(30):
        small = rng.random(icu_form.extended_size) < 0.1
        big = small | (rng.random(icu_form.extended_size) < 0.1)
        assert exact_penalty(ExtendedModel(beta=small.astype(float)), specs) <= exact_penalty(
            ExtendedModel(beta=big.astype(float)), specs
        )


def test_cheapest_way_costs_icu(icu, icu_form):
    s = dict(zip(icu_form.features, cheapest_way_costs(icu_form, icu)))
    assert s["glucose_raw"] == 3.0
    assert s["hr_raw"] == 1.0
    assert s["lactate_raw"] == 30.0
    assert s["pf_ratio"] == 72.0
    assert (np.array(list(s.values())) >= 1.0).all()


def test_lift_to_extended_picks_cheapest_way(icu, icu_form):
    beta = np.zeros(len(icu_form.features))
    beta[icu_form.features.index("glucose_raw")] = 0.4
    beta[icu_form.features.index("hematocrit_raw")] = -0.2
    m = lift_to_extended(beta, 0.1, icu_form, icu)
    sel = collapse(m, icu_form)
    assert sel.selection_nodes == ("hct", "poc_glucose")
    assert cost_report(sel, icu)["financial"] == 17.0


def test_wait_filtered_groups_cost_nothing_expensive(icu):
    circuit = filter_by_wait(icu, 10)
    form = reduce(circuit)
    fin = build_groups(form, circuit, "financial", 1.0)
    assert {g.node for g in fin.groups} == {"chart_history", "ecg", "poc_glucose", "routine_monitor", "routine_vitals", "urine"}


def test_construction_is_fast(icu):
    assert len(icu.nodes) >= 120
    start = time.perf_counter()
    form = reduce(icu)
    build_all_groups(form, icu, 1e-3, 1e-7)
    assert time.perf_counter() - start < 10.0
