from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Union

from pydantic import ValidationError

from ..errors import CircuitError
from ..schemas import CircuitFile
from .model import Aggregation, CostChannel, CostCircuit, GateKind, Node

logger = logging.getLogger("costwise.circuit")


def passthrough_id(child_id: str, layer: int) -> str:
    return f"{child_id}@{layer}"


def from_dict(data: Dict[str, Any], insert_passthrough: bool = True) -> CostCircuit:
    """
    Build a circuit from its JSON-compatible form.

    With `insert_passthrough` every edge that skips layers is routed through a
    chain of single-child OR nodes named `<child>@<layer>`, one per skipped layer.
    """
    try:
        spec = CircuitFile.model_validate(data)
    except ValidationError as e:
        raise CircuitError(f"schema violation: {e.errors()[0]['loc']} {e.errors()[0]['msg']}") from e

    layer_of = {n.id: n.layer for n in spec.nodes}
    nodes: List[Node] = []
    extra: Dict[str, Node] = {}

    for n in spec.nodes:
        children: List[str] = []
        for c in n.children:
            c_layer = layer_of.get(c)
            if not insert_passthrough or c_layer is None or c_layer <= n.layer + 1:
                children.append(c)
                continue
            # keten van pass-through nodes, van diep naar ondiep
            below = c
            for k in range(c_layer - 1, n.layer, -1):
                pid = passthrough_id(c, k)
                if pid not in extra:
                    extra[pid] = Node(id=pid, layer=k, gate=GateKind.OR, children=(below,))
                below = pid
            children.append(below)
        nodes.append(
            Node(
                id=n.id,
                layer=n.layer,
                gate=GateKind(n.gate),
                children=tuple(children),
                costs=dict(n.costs),
                wait_minutes=n.wait_minutes,
            )
        )

    if extra:
        logger.info("[load] inserted %d pass-through nodes", len(extra))
    nodes.extend(extra[k] for k in sorted(extra))

    channels = tuple(
        CostChannel(name=c.name, anchor_layer=c.anchor_layer, aggregation=Aggregation(c.aggregation), unit=c.unit)
        for c in spec.channels
    )
    return CostCircuit(
        nodes=tuple(nodes),
        layer_count=len(spec.layers),
        channels=channels,
        selection_layer=spec.selection_layer,
        layer_names=tuple(spec.layers),
        version=spec.version,
    )


def load_circuit(path: Union[str, Path], insert_passthrough: bool = True) -> CostCircuit:
    p = Path(path)
    if not p.exists():
        raise CircuitError(f"circuit file not found: {p}")
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise CircuitError(f"circuit file is not valid JSON: {p}: {e}") from e
    circuit = from_dict(data, insert_passthrough=insert_passthrough)
    logger.info("[load] %s: %d nodes, %d layers", p.name, len(circuit.nodes), circuit.layer_count)
    return circuit


def to_dict(circuit: CostCircuit) -> Dict[str, Any]:
    names = list(circuit.layer_names) or [f"layer{k}" for k in range(1, circuit.layer_count + 1)]
    nodes = []
    for n in sorted(circuit.nodes, key=lambda n: (n.layer, n.id)):
        entry: Dict[str, Any] = {"id": n.id, "layer": n.layer, "gate": n.gate.value, "children": list(n.children)}
        if n.costs:
            entry["costs"] = {k: n.costs[k] for k in sorted(n.costs)}
        if n.wait_minutes is not None:
            entry["wait_minutes"] = n.wait_minutes
        nodes.append(entry)
    return {
        "version": circuit.version,
        "layers": names,
        "selection_layer": circuit.selection_layer,
        "channels": [
            {"name": c.name, "anchor_layer": c.anchor_layer, "aggregation": c.aggregation.value, "unit": c.unit}
            for c in circuit.channels
        ],
        "nodes": nodes,
    }


def bundled_fixture(name: str) -> Path:
    """Path of a circuit shipped in costwise/fixtures (`tiny`, `icu`)."""
    return Path(__file__).resolve().parents[1] / "fixtures" / f"{name}.json"
