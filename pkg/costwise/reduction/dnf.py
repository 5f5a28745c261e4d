from __future__ import annotations

from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from ..config import settings
from ..circuit.model import CostCircuit, GateKind
from ..errors import NegativeLiteralError, ReductionBlowUpError

# literal = (selection-layer node id, polarity)
Literal = Tuple[str, bool]
Minterm = FrozenSet[Literal]


def _absorb(terms: Iterable[Minterm]) -> Set[Minterm]:
    """Drop contradictions and every term that is a superset of another."""
    kept: List[Minterm] = []
    for t in sorted(set(terms), key=lambda t: (len(t), sorted(t))):
        if any((nid, not pol) in t for nid, pol in t):
            continue
        if any(k <= t for k in kept):
            continue
        kept.append(t)
    return set(kept)


def literal_dnf(circuit: CostCircuit, node_id: str, cap: Optional[int] = None) -> List[Tuple[Literal, ...]]:
    """
    DNF of `node_id` over selection-layer literals.

    NOT is pushed through with De Morgan while descending, so this works on the
    raw circuit as well as on its `to_nnf` form. Terms are absorbed after every
    OR and AND step. Raises ReductionBlowUpError when an expansion would produce
    more than `cap` terms before absorption.
    """
    cap = settings.DNF_CAP if cap is None else cap
    sel = circuit.selection_layer
    memo: Dict[Literal, Set[Minterm]] = {}

    def walk(nid: str, positive: bool) -> Set[Minterm]:
        key = (nid, positive)
        if key in memo:
            return memo[key]
        node = circuit.by_id[nid]
        if node.layer >= sel:
            out = {frozenset([key])}
        elif node.gate == GateKind.NOT:
            out = walk(node.children[0], not positive)
        else:
            union = (node.gate == GateKind.OR) == positive
            parts = [walk(c, positive) for c in sorted(node.children)]
            if union:
                raw = sum(len(p) for p in parts)
                if raw > cap:
                    raise ReductionBlowUpError(cap, nid)
                out = _absorb(t for p in parts for t in p)
            else:
                out = {frozenset()}
                for p in parts:
                    if len(out) * len(p) > cap:
                        raise ReductionBlowUpError(cap, nid)
                    out = _absorb(a | b for a in out for b in p)
        memo[key] = out
        return out

    terms = walk(node_id, True)
    return sorted((tuple(sorted(t)) for t in terms), key=lambda t: [(i, not p) for i, p in t])


def feature_dnf(circuit: CostCircuit, feature_id: str, cap: Optional[int] = None) -> List[Tuple[str, ...]]:
    """
    Minimal implicants of a feature over selection-layer nodes, each as a
    sorted id tuple; the list is sorted lexicographically. An empty list means
    the feature can never be computed.
    """
    out: List[Tuple[str, ...]] = []
    for term in literal_dnf(circuit, feature_id, cap):
        for nid, positive in term:
            node = circuit.by_id[nid]
            if not positive or node.negates is not None:
                raise NegativeLiteralError(feature_id, node.negates or nid)
        out.append(tuple(nid for nid, _ in term))
    return sorted(out)
