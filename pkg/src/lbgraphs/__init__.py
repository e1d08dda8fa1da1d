"""Lattice-based hard instances for shortcut sets, additive spanners and emulators.

The package builds layered lattice graphs whose critical pairs have unique,
nearly disjoint shortest paths, derives spanner and emulator instances from
them, and checks every combinatorial claim with exact oracles.
"""

from __future__ import annotations

from .errors import (
    ConstructionError,
    CorruptionError,
    InfeasibleError,
    InvalidParameterError,
    LBGraphsError,
    Limits,
    ResourceLimitError,
)
from .graphs import BaseGraphParams, LayeredGraph, PairSet, alternation_product, build_base
from .instances import Instance, generate, verify
from .lattice import BallSpec, ball_count, corner_set, hull_corners

__all__ = [
    "BallSpec",
    "BaseGraphParams",
    "ConstructionError",
    "CorruptionError",
    "InfeasibleError",
    "Instance",
    "InvalidParameterError",
    "LBGraphsError",
    "LayeredGraph",
    "Limits",
    "PairSet",
    "ResourceLimitError",
    "alternation_product",
    "ball_count",
    "build_base",
    "corner_set",
    "generate",
    "hull_corners",
    "verify",
]
__version__ = "0.1.0"
