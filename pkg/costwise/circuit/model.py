from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, List, Mapping, Optional, Tuple


class GateKind(str, Enum):
    AND = "AND"
    OR = "OR"
    NOT = "NOT"
    INPUT = "INPUT"


class Aggregation(str, Enum):
    SUM = "SUM"
    MAX = "MAX"


@dataclass(frozen=True)
class Node:
    """
    One node of a layered cost circuit.

    Layer 1 holds the outputs (features), the deepest layer the inputs.
    `children` always live exactly one layer deeper. `negates` is set only on
    nodes synthesised by `to_nnf` that stand for the negation of another node.
    """

    id: str
    layer: int
    gate: GateKind
    children: Tuple[str, ...] = ()
    costs: Mapping[str, float] = field(default_factory=dict)
    wait_minutes: Optional[float] = None
    negates: Optional[str] = None

    def cost(self, channel: str) -> float:
        return float(self.costs.get(channel, 0.0))


@dataclass(frozen=True)
class CostChannel:
    name: str
    anchor_layer: int
    aggregation: Aggregation
    unit: str = ""


@dataclass(frozen=True)
class CostCircuit:
    """
    Immutable layered boolean circuit with per-node cost annotations.

    `removed_features` lists layer-1 ids dropped by wait filtering so that a
    later reduction can still report them as infeasible.
    """

    nodes: Tuple[Node, ...]
    layer_count: int
    channels: Tuple[CostChannel, ...]
    selection_layer: int
    layer_names: Tuple[str, ...] = ()
    version: int = 1
    removed_features: Tuple[str, ...] = ()

    # ------------------------------------------------------------
    # lookups (cached; the circuit never changes after construction)
    # ------------------------------------------------------------
    @cached_property
    def by_id(self) -> Dict[str, Node]:
        return {n.id: n for n in self.nodes}

    @cached_property
    def parents(self) -> Dict[str, Tuple[str, ...]]:
        out: Dict[str, List[str]] = {n.id: [] for n in self.nodes}
        for n in self.nodes:
            for c in n.children:
                if c in out:
                    out[c].append(n.id)
        return {k: tuple(sorted(v)) for k, v in out.items()}

    def node(self, node_id: str) -> Node:
        return self.by_id[node_id]

    def layer(self, k: int) -> List[Node]:
        """Nodes of layer k in lexicographic id order."""
        return sorted((n for n in self.nodes if n.layer == k), key=lambda n: n.id)

    @property
    def features(self) -> List[str]:
        return [n.id for n in self.layer(1)]

    def channel(self, name: str) -> CostChannel:
        for ch in self.channels:
            if ch.name == name:
                return ch
        raise KeyError(name)

    def has_channel(self, name: str) -> bool:
        return any(ch.name == name for ch in self.channels)

    @property
    def wait_channel(self) -> Optional[CostChannel]:
        for ch in self.channels:
            if ch.aggregation == Aggregation.MAX:
                return ch
        return None

    @property
    def sum_channels(self) -> List[CostChannel]:
        return [ch for ch in self.channels if ch.aggregation == Aggregation.SUM]

    def bears(self, node: Node, channel: CostChannel) -> bool:
        """True when `node` carries an annotation for `channel` (a zero cost still counts)."""
        if node.layer != channel.anchor_layer:
            return False
        if channel.aggregation == Aggregation.MAX:
            return node.wait_minutes is not None or channel.name in node.costs
        return channel.name in node.costs

    def channel_value(self, node: Node, channel: CostChannel) -> float:
        if channel.aggregation == Aggregation.MAX and node.wait_minutes is not None:
            return float(node.wait_minutes)
        return node.cost(channel.name)

    def requirements(self, node_id: str) -> Tuple[str, ...]:
        """
        Every node strictly below `node_id` (children, their children, ...),
        sorted. Below the selection layer all gates are AND, so these are
        exactly the nodes a selected node needs.
        """
        seen: set = set()
        stack = list(self.by_id[node_id].children)
        while stack:
            nid = stack.pop()
            if nid in seen or nid not in self.by_id:
                continue
            seen.add(nid)
            stack.extend(self.by_id[nid].children)
        return tuple(sorted(seen))

    def replace(self, nodes: Tuple[Node, ...], **changes) -> "CostCircuit":
        return CostCircuit(
            nodes=nodes,
            layer_count=changes.get("layer_count", self.layer_count),
            channels=changes.get("channels", self.channels),
            selection_layer=changes.get("selection_layer", self.selection_layer),
            layer_names=changes.get("layer_names", self.layer_names),
            version=changes.get("version", self.version),
            removed_features=changes.get("removed_features", self.removed_features),
        )

    def structure(self) -> Tuple[Tuple[str, int, str, Tuple[str, ...]], ...]:
        """Node set plus edges, order independent; used to compare circuits."""
        return tuple(sorted((n.id, n.layer, n.gate.value, tuple(sorted(n.children))) for n in self.nodes))
