"""Exception types and resource limits shared by every module."""

from __future__ import annotations

import os
from dataclasses import dataclass


class LBGraphsError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(LBGraphsError, ValueError):
    """A construction or query parameter violates its documented precondition."""


class ResourceLimitError(LBGraphsError):
    """A projected point, vertex or edge count exceeds the configured budget."""


class InfeasibleError(LBGraphsError):
    """No parameter choice within budget satisfies the construction's requirements."""


class CorruptionError(LBGraphsError):
    """An instance or candidate file failed its digest or structural checks."""


class ConstructionError(LBGraphsError):
    """An internal invariant of a construction was violated (a bug, not bad input)."""


_ENV = {
    "max_points": "LBGRAPHS_MAX_POINTS",
    "max_vertices": "LBGRAPHS_MAX_VERTICES",
    "max_edges": "LBGRAPHS_MAX_EDGES",
    "oracle_vertices": "LBGRAPHS_ORACLE_VERTICES",
}


@dataclass(frozen=True)
class Limits:
    max_points: int = 5_000_000
    max_vertices: int = 3_000_000
    max_edges: int = 12_000_000
    oracle_vertices: int = 20_000

    @classmethod
    def from_env(cls) -> Limits:
        kwargs = {}
        for field, var in _ENV.items():
            raw = os.environ.get(var)
            if raw is None:
                continue
            try:
                kwargs[field] = int(raw)
            except ValueError as exc:
                raise InvalidParameterError(f"{var} must be an integer, got {raw!r}") from exc
        return cls(**kwargs)

    def check(self, what: str, count: int) -> None:
        cap = getattr(self, what)
        if count > cap:
            raise ResourceLimitError(
                f"projected {what.replace('max_', '')} count {count} exceeds budget {cap} "
                f"(raise {_ENV[what]} to allow it)"
            )


def current_limits() -> Limits:
    return Limits.from_env()
