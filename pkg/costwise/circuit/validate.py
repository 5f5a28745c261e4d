from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Literal

from .model import Aggregation, CostCircuit, GateKind

ValidationStatus = Literal["ok", "error"]


@dataclass(frozen=True)
class Violation:
    code: str
    node: str = ""
    message: str = ""


@dataclass(frozen=True)
class ValidationReport:
    """Result of `validate`. Diagnostics are data: nothing is raised."""

    status: ValidationStatus = "ok"
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def codes(self) -> List[str]:
        return [v.code for v in self.violations]


def _find_cycle(circuit: CostCircuit) -> List[str]:
    """Kahn's algorithm; returns the ids left over when the edge relation has a cycle."""
    ids = sorted({n.id for n in circuit.nodes})
    in_deg: Dict[str, int] = {i: 0 for i in ids}
    for n in circuit.by_id.values():
        for c in n.children:
            if c in in_deg:
                in_deg[c] += 1
    queue = deque(sorted(i for i, d in in_deg.items() if d == 0))
    done = 0
    while queue:
        nid = queue.popleft()
        done += 1
        for c in circuit.by_id[nid].children:
            if c not in in_deg:
                continue
            in_deg[c] -= 1
            if in_deg[c] == 0:
                queue.append(c)
    if done == len(ids):
        return []
    return sorted(i for i, d in in_deg.items() if d > 0)


def validate(circuit: CostCircuit) -> ValidationReport:
    out: List[Violation] = []

    def add(code: str, node: str = "", message: str = "") -> None:
        out.append(Violation(code=code, node=node, message=message))

    r = circuit.layer_count
    seen: Dict[str, int] = {}
    for n in circuit.nodes:
        seen[n.id] = seen.get(n.id, 0) + 1
    for nid, count in sorted(seen.items()):
        if count > 1:
            add("duplicate id", nid, f"node id '{nid}' appears {count} times")

    if not 1 <= circuit.selection_layer <= r:
        add("selection layer", "", f"selection_layer {circuit.selection_layer} outside 1..{r}")

    channels = {}
    for ch in circuit.channels:
        if ch.name in channels:
            add("duplicate channel", "", f"channel '{ch.name}' declared twice")
        channels[ch.name] = ch
        if not 1 <= ch.anchor_layer <= r:
            add("anchor layer", "", f"channel '{ch.name}' anchored at layer {ch.anchor_layer} outside 1..{r}")
        if ch.aggregation == Aggregation.MAX and ch.anchor_layer < circuit.selection_layer:
            add("anchor layer", "", f"wait channel '{ch.name}' must sit at or below the selection layer")

    for n in sorted(circuit.nodes, key=lambda n: n.id):
        if not 1 <= n.layer <= r:
            add("layer range", n.id, f"layer {n.layer} outside 1..{r}")

        # gate arity
        if n.gate == GateKind.INPUT and n.children:
            add("gate arity", n.id, "INPUT node has children")
        if n.gate == GateKind.NOT and len(n.children) != 1:
            add("NOT fan-in", n.id, f"NOT gate has {len(n.children)} children, expected 1")
        if n.gate in (GateKind.AND, GateKind.OR) and not n.children:
            add("gate arity", n.id, f"{n.gate.value} gate without children")
        if n.layer == r and n.gate != GateKind.INPUT:
            add("deepest layer not input", n.id, f"layer-{r} node is {n.gate.value}, expected INPUT")
        if n.layer < r and n.gate == GateKind.INPUT:
            add("input above deepest layer", n.id, f"INPUT node at layer {n.layer} < {r}")

        for c in n.children:
            child = circuit.by_id.get(c)
            if child is None:
                add("unknown child", n.id, f"child '{c}' does not exist")
            elif child.layer != n.layer + 1:
                add("cross-layer edge", n.id, f"edge {n.id} (layer {n.layer}) -> {c} (layer {child.layer})")

        # below the selection layer everything must be AND-determined
        if n.layer >= circuit.selection_layer and n.gate not in (GateKind.AND, GateKind.INPUT):
            passthrough = n.gate == GateKind.OR and len(n.children) == 1
            if not passthrough:
                add("non-AND path below selection layer", n.id, f"{n.gate.value} gate at layer {n.layer}")

        for name, value in sorted(n.costs.items()):
            ch = channels.get(name)
            if ch is None:
                add("unknown channel", n.id, f"cost for undeclared channel '{name}'")
            elif ch.anchor_layer != n.layer:
                add("cost on non-anchor layer", n.id, f"'{name}' is anchored at layer {ch.anchor_layer}")
            if value < 0:
                add("negative cost", n.id, f"{name} = {value}")
        if n.wait_minutes is not None:
            if n.wait_minutes < 0:
                add("negative cost", n.id, f"wait_minutes = {n.wait_minutes}")
            wait = circuit.wait_channel
            if wait is None or wait.anchor_layer != n.layer:
                add("cost on non-anchor layer", n.id, "wait_minutes outside the wait channel's anchor layer")

    cyclic = _find_cycle(circuit)
    if cyclic:
        add("cycle", cyclic[0], f"cycle through {', '.join(cyclic[:5])}")

    return ValidationReport(status="error" if out else "ok", violations=out)
