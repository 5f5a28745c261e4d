from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple

from ..circuit.model import Aggregation, CostCircuit
from ..errors import PenaltyChannelError
from ..reduction.form import ThreeLayerForm
from .index import ExtendedIndex

logger = logging.getLogger("costwise.regularizer")


@dataclass(frozen=True)
class Group:
    node: str
    cost: float
    indices: Tuple[int, ...]


@dataclass(frozen=True)
class GroupSpec:
    """All groups of one cost channel. Groups may overlap."""

    channel: str
    lam: float
    groups: Tuple[Group, ...]

    def weights(self) -> List[float]:
        return [self.lam * g.cost for g in self.groups]


def build_groups(form: ThreeLayerForm, circuit: CostCircuit, channel: str, lam: float) -> GroupSpec:
    """
    One group per cost-bearing anchor node of `channel`: the extended
    positions of every way whose usage mask contains that node.
    """
    if not circuit.has_channel(channel):
        raise PenaltyChannelError(f"unknown cost channel '{channel}'")
    ch = circuit.channel(channel)
    if ch.aggregation == Aggregation.MAX:
        raise PenaltyChannelError("wait channels are handled by filtering, not penalties")
    if lam < 0:
        raise PenaltyChannelError(f"lambda for '{channel}' must be >= 0, got {lam}")

    members: Dict[str, List[int]] = {}
    for j, way in enumerate(form.ways):
        for nid in way.uses(channel):
            members.setdefault(nid, []).append(j)

    groups = []
    for node in circuit.layer(ch.anchor_layer):
        if not circuit.bears(node, ch) or node.id not in members:
            continue
        groups.append(Group(node=node.id, cost=node.cost(channel), indices=tuple(members[node.id])))

    logger.debug("[groups] %s: %d groups over %d coordinates", channel, len(groups), form.extended_size)
    return GroupSpec(channel=channel, lam=float(lam), groups=tuple(groups))


def build_all_groups(
    form: ThreeLayerForm,
    circuit: CostCircuit,
    lambda_financial: float,
    lambda_time: float,
    financial_channel: str = "financial",
) -> List[GroupSpec]:
    """Groups for every SUM channel; the financial one gets lambda_financial, the rest lambda_time."""
    specs = []
    for ch in circuit.sum_channels:
        lam = lambda_financial if ch.name == financial_channel else lambda_time
        specs.append(build_groups(form, circuit, ch.name, lam))
    return specs


def groups_to_dict(specs: Sequence[GroupSpec], index: ExtendedIndex) -> Dict[str, Any]:
    return {
        "extended_index": [[f, p] for f, p in index.entries],
        "specs": [
            {
                "channel": s.channel,
                "lambda": s.lam,
                "groups": [{"node": g.node, "cost": g.cost, "indices": list(g.indices)} for g in s.groups],
            }
            for s in specs
        ],
    }
