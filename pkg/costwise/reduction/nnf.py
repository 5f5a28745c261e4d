from __future__ import annotations

from typing import Dict, List, Set

from ..circuit.model import CostCircuit, GateKind, Node


def negated_id(node_id: str) -> str:
    return f"!{node_id}"


def lifted_id(node_id: str, layer: int) -> str:
    return f"{node_id}^{layer}"


def to_nnf(circuit: CostCircuit) -> CostCircuit:
    """
    Equivalent circuit in which NOT sits only directly above INPUT nodes.

    NOT gates are pushed down with De Morgan's laws. A double negation is
    replaced by its operand, lifted back to the right layer through
    single-child OR nodes so every edge still spans exactly one layer.
    Synthesised negations are named `!<id>` and carry `negates`; original
    ids keep their meaning, so truth tables can be compared node by node.
    """
    made: Dict[str, Node] = {}

    def lift(node_id: str, layer: int) -> str:
        node = circuit.by_id[node_id]
        below = pos(node_id)
        for k in range(node.layer - 1, layer - 1, -1):
            lid = lifted_id(node_id, k)
            if lid not in made:
                made[lid] = Node(id=lid, layer=k, gate=GateKind.OR, children=(below,))
            below = lid
        return below

    def pos(node_id: str) -> str:
        if node_id in made:
            return node_id
        node = circuit.by_id[node_id]
        if node.gate == GateKind.NOT and circuit.by_id[node.children[0]].gate != GateKind.INPUT:
            # NOT(x) op laag L == neg(x), dat ook op laag L ligt
            template = made[neg(node.children[0])]
            made[node_id] = Node(
                id=node.id, layer=node.layer, gate=template.gate, children=template.children,
                costs=node.costs, wait_minutes=node.wait_minutes, negates=template.negates,
            )
            return node_id
        children = tuple(pos(c) for c in node.children)
        made[node_id] = Node(
            id=node.id, layer=node.layer, gate=node.gate, children=children,
            costs=node.costs, wait_minutes=node.wait_minutes, negates=node.negates,
        )
        return node_id

    def neg(node_id: str) -> str:
        """Node equivalent to NOT `node_id`, one layer above it."""
        nid = negated_id(node_id)
        if nid in made:
            return nid
        node = circuit.by_id[node_id]
        layer = node.layer - 1
        if node.gate == GateKind.INPUT:
            made[nid] = Node(id=nid, layer=layer, gate=GateKind.NOT, children=(pos(node_id),), negates=node_id)
        elif node.gate == GateKind.NOT:
            # dubbele negatie
            inner = lift(node.children[0], node.layer)
            made[nid] = Node(id=nid, layer=layer, gate=GateKind.OR, children=(inner,), negates=node_id)
        else:
            dual = GateKind.OR if node.gate == GateKind.AND else GateKind.AND
            children = tuple(neg(c) for c in node.children)
            made[nid] = Node(id=nid, layer=layer, gate=dual, children=children, negates=node_id)
        return nid

    for n in sorted(circuit.nodes, key=lambda n: (n.layer, n.id)):
        pos(n.id)

    # only keep synthesised nodes that something still points at
    original = [n.id for n in circuit.nodes]
    reachable: Set[str] = set(original)
    stack: List[str] = list(original)
    while stack:
        for c in made[stack.pop()].children:
            if c not in reachable:
                reachable.add(c)
                stack.append(c)

    nodes: List[Node] = [made[i] for i in original]
    nodes.extend(made[k] for k in sorted(made) if k in reachable and k not in set(original))
    return circuit.replace(tuple(nodes))
