from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..circuit.model import Aggregation, CostCircuit
from ..reduction.form import ThreeLayerForm, Way
from .index import ExtendedIndex
from .model import ExtendedModel


@dataclass(frozen=True)
class FeatureSelection:
    features: Tuple[str, ...] = ()
    ways: Tuple[Way, ...] = ()
    selection_nodes: Tuple[str, ...] = ()
    channel_nodes: Mapping[str, Tuple[str, ...]] = field(default_factory=dict)


def collapse(model: ExtendedModel, form: ThreeLayerForm) -> FeatureSelection:
    """Features with an active way, those ways, and every node they need."""
    active = model.active()
    ways = [w for j, w in enumerate(form.ways) if active[j]]
    nodes: Dict[str, set] = {}
    for w in ways:
        for ch, used in w.channel_usage.items():
            nodes.setdefault(ch, set()).update(used)
    return FeatureSelection(
        features=tuple(sorted({w.feature_id for w in ways})),
        ways=tuple(ways),
        selection_nodes=tuple(sorted({n for w in ways for n in w.selection_nodes})),
        channel_nodes={ch: tuple(sorted(v)) for ch, v in sorted(nodes.items())},
    )


def cost_report(selection: FeatureSelection, circuit: CostCircuit) -> Dict[str, float]:
    """SUM channels: total over unique used nodes. MAX channel: largest wait (0 if none)."""
    out: Dict[str, float] = {}
    for ch in circuit.channels:
        used = [circuit.by_id[n] for n in selection.channel_nodes.get(ch.name, ()) if n in circuit.by_id]
        values = [circuit.channel_value(n, ch) for n in used]
        if ch.aggregation == Aggregation.MAX:
            out[ch.name] = float(max(values, default=0.0))
        else:
            out[ch.name] = math.fsum(values)
    return out


def _way_cost(way: Way, circuit: CostCircuit, channel: str) -> float:
    if not circuit.has_channel(channel):
        return 0.0
    ch = circuit.channel(channel)
    return math.fsum(circuit.channel_value(circuit.by_id[n], ch) for n in way.uses(channel))


def cheapest_ways(form: ThreeLayerForm, circuit: CostCircuit, financial_channel: str = "financial") -> Dict[str, Way]:
    """Per feature the way with the lowest financial cost, then other SUM costs, then lowest index."""
    others = [ch.name for ch in circuit.sum_channels if ch.name != financial_channel]
    out: Dict[str, Way] = {}
    for f in form.features:
        out[f] = min(
            form.ways_of(f),
            key=lambda w: (
                _way_cost(w, circuit, financial_channel),
                math.fsum(_way_cost(w, circuit, o) for o in others),
                w.index,
            ),
        )
    return out


def cheapest_way_costs(form: ThreeLayerForm, circuit: CostCircuit, channel: str = "financial") -> np.ndarray:
    """Scale vector for the scaled-l1 baseline: max(1, cheapest way's cost) per feature."""
    return np.array(
        [max(1.0, min(_way_cost(w, circuit, channel) for w in form.ways_of(f))) for f in form.features],
        dtype=float,
    )


def lift_to_extended(
    beta: Sequence[float],
    intercept: float,
    form: ThreeLayerForm,
    circuit: CostCircuit,
    financial_channel: str = "financial",
    support_eps: Optional[float] = None,
) -> ExtendedModel:
    """
    Put a base-feature model on the extended coordinates: each coefficient
    lands on its feature's cheapest way. Predictions are unchanged because
    every way column is a copy of the feature column.
    """
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (len(form.features),):
        raise ValueError(f"expected {len(form.features)} coefficients, got {beta.shape}")
    index = ExtendedIndex.from_form(form)
    cheapest = cheapest_ways(form, circuit, financial_channel)
    ext = np.zeros(len(index))
    for i, f in enumerate(form.features):
        ext[index.position(f, cheapest[f].index)] = beta[i]
    kwargs = {} if support_eps is None else {"support_eps": support_eps}
    return ExtendedModel(beta=ext, intercept=float(intercept), index=index, **kwargs)


def selection_summary(selection: FeatureSelection, circuit: CostCircuit) -> Dict[str, List[str]]:
    """Selected features plus the nodes used on every layer that carries a channel."""
    out: Dict[str, List[str]] = {"features": list(selection.features), "selection_nodes": list(selection.selection_nodes)}
    for ch in circuit.channels:
        out[ch.name] = list(selection.channel_nodes.get(ch.name, ()))
    return out
