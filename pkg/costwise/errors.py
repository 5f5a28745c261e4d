# costwise/errors.py
from __future__ import annotations


class CostwiseError(Exception):
    """Base class for every error raised by costwise."""


class CircuitError(CostwiseError):
    """Circuit file could not be loaded, or a circuit could not be evaluated."""


class InvalidCircuitError(CircuitError):
    """Circuit loaded but breaks one or more structural rules (see circuit.validate)."""

    def __init__(self, message: str, violations: int):
        self.violations = violations
        super().__init__(message)


class WaitFilterError(CostwiseError):
    pass


class ReductionError(CostwiseError):
    pass


class NegativeLiteralError(ReductionError):
    def __init__(self, feature_id: str, node_id: str):
        self.feature_id = feature_id
        self.node_id = node_id
        super().__init__(
            f"negative cost literal unsupported: feature '{feature_id}' depends on NOT '{node_id}'"
        )


class ReductionBlowUpError(ReductionError):
    def __init__(self, cap: int, where: str):
        self.cap = cap
        self.where = where
        super().__init__(f"reduction blow-up: more than {cap} minterms while expanding '{where}'")


class PenaltyChannelError(CostwiseError):
    pass


class SolverDivergedError(CostwiseError):
    def __init__(self, iteration: int, method: str = "admm"):
        self.iteration = iteration
        self.method = method
        super().__init__(f"diverged: non-finite loss at iteration {iteration} ({method})")


class DataError(CostwiseError):
    """Bad or insufficient data: missing columns, empty classes, empty trajectories."""
