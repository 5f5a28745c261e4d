from .evaluate import evaluate
from .io import bundled_fixture, from_dict, load_circuit, to_dict
from .model import Aggregation, CostChannel, CostCircuit, GateKind, Node
from .validate import ValidationReport, Violation, validate
from .wait import filter_by_wait

__all__ = [
    "Aggregation",
    "CostChannel",
    "CostCircuit",
    "GateKind",
    "Node",
    "ValidationReport",
    "Violation",
    "bundled_fixture",
    "evaluate",
    "filter_by_wait",
    "from_dict",
    "load_circuit",
    "to_dict",
    "validate",
]
