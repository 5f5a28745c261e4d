from __future__ import annotations

from typing import Dict, Mapping

from ..errors import CircuitError
from .model import CostCircuit, GateKind


def _apply(gate: GateKind, values) -> bool:
    if gate == GateKind.AND:
        return all(values)
    if gate == GateKind.OR:
        return any(values)
    if gate == GateKind.NOT:
        return not values[0]
    raise CircuitError(f"cannot apply gate {gate}")


def evaluate(circuit: CostCircuit, assignment: Mapping[str, bool]) -> Dict[str, bool]:
    """
    Compute node values bottom-up.

    Entries in `assignment` pin a node's value, so a truth table can be taken
    over the INPUT layer or over any cut above it (e.g. the selection layer).
    Every node whose value follows from the assignment is returned. An
    assignment that names any INPUT must name all of them; otherwise an INPUT
    that a feature needs but nobody assigned raises.
    """
    for nid in assignment:
        if nid not in circuit.by_id:
            raise CircuitError(f"assignment names unknown node '{nid}'")

    inputs = sorted(n.id for n in circuit.nodes if n.gate == GateKind.INPUT)
    if any(nid in assignment for nid in inputs):
        # over de INPUT-laag: elke input moet een waarde hebben
        missing = [nid for nid in inputs if nid not in assignment]
        if missing:
            raise CircuitError(f"missing assignment for input '{missing[0]}' ({len(missing)} unassigned)")

    values: Dict[str, bool] = {k: bool(v) for k, v in assignment.items()}

    def value(nid: str) -> bool:
        if nid in values:
            return values[nid]
        node = circuit.by_id[nid]
        if node.gate == GateKind.INPUT:
            raise CircuitError(f"missing assignment for input '{nid}'")
        out = _apply(node.gate, [value(c) for c in node.children])
        values[nid] = out
        return out

    # outputs first: een ontbrekende input die een feature nodig heeft is een fout
    for node in sorted(circuit.nodes, key=lambda n: (n.layer, n.id)):
        if node.layer == 1:
            value(node.id)

    # rest opportunistisch (nodes onder de cut of buiten elke feature)
    for node in sorted(circuit.nodes, key=lambda n: (-n.layer, n.id)):
        if node.id in values:
            continue
        try:
            value(node.id)
        except CircuitError:
            continue
    return values
