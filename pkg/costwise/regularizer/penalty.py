from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .groups import GroupSpec
from .model import ExtendedModel


def exact_penalty(model: ExtendedModel, specs: Sequence[GroupSpec]) -> float:
    """
    Pay-per-node cost of the model's support: a node's cost counts once as
    soon as any way that uses it is active. Evaluator only, never optimised.
    """
    active = model.active()
    terms = []
    for spec in specs:
        for g in spec.groups:
            if g.indices and active[list(g.indices)].any():
                terms.append(spec.lam * g.cost)
    return math.fsum(terms)


def relaxed_penalty(model: ExtendedModel, specs: Sequence[GroupSpec]) -> float:
    """Sum of cost-weighted group l-inf norms."""
    b = np.abs(model.beta)
    terms = []
    for spec in specs:
        for g in spec.groups:
            if g.indices:
                terms.append(spec.lam * g.cost * float(b[list(g.indices)].max()))
    return math.fsum(terms)
