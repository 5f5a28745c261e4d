"""
Fit-method registry.

- In-memory, filled at import time with the three built-in methods
- A method is pure: problem + config in, ExtendedModel out
- Every method returns its model on the extended (feature, way) coordinates,
  so cost reporting works the same for all of them
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List

from ..circuit.model import CostCircuit
from ..config import settings
from ..reduction.form import ThreeLayerForm
from ..regularizer.groups import GroupSpec, build_all_groups
from ..regularizer.index import ExtendedIndex
from ..regularizer.model import ExtendedModel
from ..regularizer.selection import cheapest_way_costs, lift_to_extended
from .admm import fit_group
from .config import FitConfig
from .dataset import Dataset, extend_dataset
from .fista import fit_l1, fit_scaled_l1


@dataclass(frozen=True)
class FitProblem:
    """Read-only inputs shared by every fit of a sweep: base-feature data over `form.features`."""

    circuit: CostCircuit
    form: ThreeLayerForm
    data: Dataset

    @cached_property
    def extended(self) -> Dataset:
        return extend_dataset(self.data, self.form)

    @cached_property
    def index(self) -> ExtendedIndex:
        return ExtendedIndex.from_form(self.form)

    def specs(self, cfg: FitConfig) -> List[GroupSpec]:
        return build_all_groups(
            self.form, self.circuit, cfg.lambda_financial, cfg.lambda_time, settings.FINANCIAL_CHANNEL
        )


class FitMethod:
    """Contract for a fit method. Implementations must be deterministic."""

    name: str = "unnamed"

    def fit(self, problem: FitProblem, cfg: FitConfig) -> ExtendedModel:
        raise NotImplementedError


class GroupMethod(FitMethod):
    name = "group"

    def fit(self, problem: FitProblem, cfg: FitConfig) -> ExtendedModel:
        model = fit_group(problem.extended, problem.specs(cfg), cfg)
        model.index = problem.index
        return model


class L1Method(FitMethod):
    name = "l1"

    def fit(self, problem: FitProblem, cfg: FitConfig) -> ExtendedModel:
        base = fit_l1(problem.data, cfg.lambda_financial, cfg)
        return _lift(base, problem, self.name)


class ScaledL1Method(FitMethod):
    name = "l1-scaled"

    def fit(self, problem: FitProblem, cfg: FitConfig) -> ExtendedModel:
        scale = cheapest_way_costs(problem.form, problem.circuit, settings.FINANCIAL_CHANNEL)
        base = fit_scaled_l1(problem.data, cfg.lambda_financial, scale, cfg)
        return _lift(base, problem, self.name)


def _lift(base: ExtendedModel, problem: FitProblem, name: str) -> ExtendedModel:
    model = lift_to_extended(
        base.beta, base.intercept, problem.form, problem.circuit, settings.FINANCIAL_CHANNEL, base.support_eps
    )
    model.method = name
    model.diagnostics = dict(base.diagnostics)
    return model


_registry: Dict[str, FitMethod] = {}


def register(method: FitMethod) -> None:
    """Register a method instance by its unique name."""
    name = getattr(method, "name", None)
    if not name or not isinstance(name, str):
        raise ValueError("FitMethod must have a non-empty 'name' attribute")
    _registry[name] = method


def get_registry() -> Dict[str, FitMethod]:
    """Shallow copy of the registry."""
    return dict(_registry)


def get_method(name: str) -> FitMethod:
    try:
        return _registry[name]
    except KeyError:
        raise KeyError(f"unknown fit method '{name}' (known: {', '.join(sorted(_registry))})") from None


for _m in (GroupMethod(), L1Method(), ScaledL1Method()):
    register(_m)
