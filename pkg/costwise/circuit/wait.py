from __future__ import annotations

import logging
from typing import Dict, Set

from ..errors import WaitFilterError
from .model import CostCircuit, GateKind, Node

logger = logging.getLogger("costwise.circuit")


def filter_by_wait(circuit: CostCircuit, max_wait: float) -> CostCircuit:
    """
    Keep only what a model can use when results must arrive within `max_wait`
    minutes (inclusive).

    Anchor-layer nodes survive when their wait is <= max_wait; deeper nodes
    survive when a surviving anchor node requires them; shallower nodes survive
    while they remain derivable (AND needs every child, OR drops removed
    children, NOT needs its child). Dropped features are remembered on the
    returned circuit.
    """
    if max_wait < 0:
        raise WaitFilterError(f"maximum wait must be >= 0, got {max_wait}")
    channel = circuit.wait_channel
    if channel is None:
        raise WaitFilterError("circuit declares no wait (MAX) channel")
    anchor = channel.anchor_layer

    alive: Set[str] = set()
    for n in circuit.layer(anchor):
        if circuit.channel_value(n, channel) <= max_wait:
            alive.add(n.id)

    # deeper: everything required by a surviving anchor node
    for nid in sorted(alive):
        alive.update(circuit.requirements(nid))

    # shallower: derivability, layer by layer upwards
    for k in range(anchor - 1, 0, -1):
        for n in circuit.layer(k):
            kept = [c for c in n.children if c in alive]
            if n.gate == GateKind.AND or n.gate == GateKind.NOT:
                ok = len(kept) == len(n.children) and bool(kept)
            elif n.gate == GateKind.OR:
                ok = bool(kept)
            else:
                ok = False
            if ok:
                alive.add(n.id)

    nodes = []
    for n in circuit.nodes:
        if n.id not in alive:
            continue
        if n.gate == GateKind.OR and n.layer < anchor:
            n = Node(
                id=n.id,
                layer=n.layer,
                gate=n.gate,
                children=tuple(c for c in n.children if c in alive),
                costs=n.costs,
                wait_minutes=n.wait_minutes,
                negates=n.negates,
            )
        nodes.append(n)

    dropped = sorted(n.id for n in circuit.layer(1) if n.id not in alive)
    removed: Dict[str, None] = dict.fromkeys(circuit.removed_features)
    removed.update(dict.fromkeys(dropped))
    logger.info(
        "[wait] W=%s: kept %d/%d nodes, dropped %d features",
        max_wait, len(nodes), len(circuit.nodes), len(dropped),
    )
    return circuit.replace(tuple(nodes), removed_features=tuple(sorted(removed)))
