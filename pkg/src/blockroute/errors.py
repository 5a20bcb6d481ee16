"""Exception hierarchy.

Each class carries the CLI exit code it maps to, so the runner can translate
failures without a lookup table.
"""
from __future__ import annotations


class BlockRouteError(Exception):
    exit_code = 1


class ConfigError(BlockRouteError, ValueError):
    exit_code = 2


class GenerationError(BlockRouteError):
    """Host generation ran out of retries."""

    exit_code = 3

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class PlacementError(BlockRouteError):
    exit_code = 3


class ConvergenceError(BlockRouteError):
    exit_code = 4

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class QuotientDisconnectedError(BlockRouteError):
    exit_code = 4


class RoutingError(BlockRouteError):
    exit_code = 4


class HopInfeasibleError(RoutingError):
    pass


class BudgetInfeasibleError(BlockRouteError):
    exit_code = 5
