from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Mapping, Optional, Tuple

from ..circuit.evaluate import evaluate
from ..circuit.model import CostChannel, CostCircuit
from ..config import settings
from ..errors import ReductionBlowUpError
from .dnf import feature_dnf

logger = logging.getLogger("costwise.reduction")


@dataclass(frozen=True)
class Way:
    """One minimal way to compute a feature: a set of selection-layer nodes."""

    feature_id: str
    index: int  # 1-based p within the feature
    selection_nodes: Tuple[str, ...]
    channel_usage: Mapping[str, Tuple[str, ...]] = field(default_factory=dict)

    def uses(self, channel: str) -> Tuple[str, ...]:
        return tuple(self.channel_usage.get(channel, ()))


@dataclass(frozen=True)
class ThreeLayerForm:
    """
    Features over their ways (OR), ways over selection nodes (AND).

    `ways` is grouped by feature in feature order, ways of one feature sorted
    by their node tuple. `dropped` lists features with no way at all.
    """

    features: Tuple[str, ...]
    ways: Tuple[Way, ...]
    dropped: Tuple[str, ...] = ()
    selection_layer: int = 1

    @cached_property
    def w(self) -> Dict[str, int]:
        out = {f: 0 for f in self.features}
        for way in self.ways:
            out[way.feature_id] += 1
        return out

    @property
    def extended_size(self) -> int:
        return len(self.ways)

    def ways_of(self, feature_id: str) -> List[Way]:
        return [w for w in self.ways if w.feature_id == feature_id]


def _usage(
    circuit: CostCircuit,
    feature_id: str,
    selection_nodes: Tuple[str, ...],
    channel: CostChannel,
    subtree: Tuple[str, ...],
) -> Tuple[str, ...]:
    anchor = channel.anchor_layer
    sel = circuit.selection_layer
    if anchor == sel:
        picked = {n for n in selection_nodes if circuit.bears(circuit.by_id[n], channel)}
    elif anchor > sel:
        # AND-propagatie: alles wat een gekozen node nodig heeft
        picked = set()
        for s in selection_nodes:
            for r in circuit.requirements(s):
                if circuit.bears(circuit.by_id[r], channel):
                    picked.add(r)
    else:
        chosen = set(selection_nodes)
        cut = {n.id: n.id in chosen for n in circuit.layer(sel)}
        values = evaluate(circuit, cut)
        picked = {
            n for n in subtree
            if circuit.by_id[n].layer == anchor and values.get(n) and circuit.bears(circuit.by_id[n], channel)
        }
    return tuple(sorted(picked))


def reduce(circuit: CostCircuit, cap: Optional[int] = None) -> ThreeLayerForm:
    """
    Reduce a layered circuit to its three-layer form.

    Each feature gets its minimal implicants over the selection layer as ways;
    every channel gets a usage mask per way. Features whose DNF is empty, and
    features removed earlier by wait filtering, are listed in `dropped`.
    `cap` bounds the total number of ways.
    """
    cap = settings.DNF_CAP if cap is None else cap
    features: List[str] = []
    ways: List[Way] = []
    dropped: Dict[str, None] = dict.fromkeys(circuit.removed_features)

    for fid in circuit.features:
        terms = feature_dnf(circuit, fid, cap)
        if not terms:
            dropped[fid] = None
            continue
        if len(ways) + len(terms) > cap:
            raise ReductionBlowUpError(cap, fid)
        subtree = (fid,) + circuit.requirements(fid)
        features.append(fid)
        for p, term in enumerate(terms, start=1):
            usage = {ch.name: _usage(circuit, fid, term, ch, subtree) for ch in circuit.channels}
            ways.append(Way(feature_id=fid, index=p, selection_nodes=term, channel_usage=usage))

    form = ThreeLayerForm(
        features=tuple(features),
        ways=tuple(ways),
        dropped=tuple(sorted(dropped)),
        selection_layer=circuit.selection_layer,
    )
    logger.info(
        "[reduce] %d features, %d ways, %d dropped",
        len(form.features), form.extended_size, len(form.dropped),
    )
    return form


def form_to_dict(form: ThreeLayerForm) -> Dict[str, Any]:
    """JSON-compatible report: feature -> ways -> usage per channel."""
    return {
        "features": [
            {
                "id": f,
                "ways": [
                    {
                        "p": w.index,
                        "nodes": list(w.selection_nodes),
                        "usage": {ch: list(nodes) for ch, nodes in sorted(w.channel_usage.items())},
                    }
                    for w in form.ways_of(f)
                ],
            }
            for f in form.features
        ],
        "w": dict(sorted(form.w.items())),
        "extended_size": form.extended_size,
        "dropped": list(form.dropped),
    }
