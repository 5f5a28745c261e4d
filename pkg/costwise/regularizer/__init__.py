from .groups import Group, GroupSpec, build_all_groups, build_groups, groups_to_dict
from .index import ExtendedIndex
from .model import ExtendedModel
from .penalty import exact_penalty, relaxed_penalty
from .selection import (
    FeatureSelection,
    cheapest_way_costs,
    cheapest_ways,
    collapse,
    cost_report,
    lift_to_extended,
    selection_summary,
)

__all__ = [
    "ExtendedIndex",
    "ExtendedModel",
    "FeatureSelection",
    "Group",
    "GroupSpec",
    "build_all_groups",
    "build_groups",
    "cheapest_way_costs",
    "cheapest_ways",
    "collapse",
    "cost_report",
    "exact_penalty",
    "groups_to_dict",
    "lift_to_extended",
    "relaxed_penalty",
    "selection_summary",
]
