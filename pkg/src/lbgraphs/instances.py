"""Named constructions, their parameters, and the audits each one must pass."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import InvalidParameterError, Limits
from .graphs import BaseGraphParams, LayeredGraph, PairSet, alternation_product, build_base
from .lattice import corner_set
from .oracles import VerificationReport, audit_canonical_walks, audit_pair_disjointness, audit_unique_paths
from .transforms import (
    build_improved_spanner,
    build_inner_graph,
    build_outer_graph,
    build_spanner_instance,
    composite_path_length,
    inner_conditions,
)

PARAMS: dict[str, tuple[str, ...]] = {
    "base": ("d", "r", "D"),
    "product": ("d1", "r1", "d2", "r2", "D"),
    "spanner": ("d1", "r1", "d2", "r2", "D", "t"),
    "inner": ("c", "L", "q"),
    "outer": ("q", "L"),
    "improved-spanner": ("c", "L", "q"),
}

DISJOINTNESS_MODE = {
    "base": "edge_and_vertex",
    "product": "edge_overlap_le_1",
    "spanner": "clique_edge_unique",
    "inner": "edge_disjoint",
    "outer": "edge_and_vertex",
    "improved-spanner": "edge_disjoint",
}


@dataclass
class Instance:
    kind: str
    params: dict[str, int]
    graph: LayeredGraph
    pairs: PairSet
    derived: dict[str, Any] = field(default_factory=dict)

    def expected_path_length(self) -> int:
        return expected_path_length(self.kind, self.params)


def _check_params(kind: str, params: dict[str, int]) -> dict[str, int]:
    if kind not in PARAMS:
        raise InvalidParameterError(f"unknown construction {kind!r}; choose from {sorted(PARAMS)}")
    missing = [k for k in PARAMS[kind] if params.get(k) is None]
    if missing:
        raise InvalidParameterError(f"{kind} needs parameters {missing}")
    out = {}
    for k in PARAMS[kind]:
        v = params[k]
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
            raise InvalidParameterError(f"parameter {k} must be an integer, got {v!r}")
        if v < 1:
            raise InvalidParameterError(f"parameter {k} must be positive, got {v}")
        out[k] = int(v)
    return out


def expected_path_length(kind: str, params: dict[str, int]) -> int:
    p = params
    if kind == "base":
        return p["D"]
    if kind == "product":
        return 2 * p["D"]
    if kind == "spanner":
        return 2 * p["D"] * p["t"] + 2 * p["D"] - 1
    if kind == "inner":
        return p["L"] * p["c"]
    if kind == "outer":
        return p["L"]
    if kind == "improved-spanner":
        length = composite_path_length(p["L"], p["c"])
        if length.denominator != 1:
            raise InvalidParameterError(f"path length {length} is not integral")
        return int(length)
    raise InvalidParameterError(f"unknown construction {kind!r}")


def generate(kind: str, params: dict[str, int], limits: Limits | None = None) -> Instance:
    """Build the named construction from its integer parameters."""
    p = _check_params(kind, params)
    derived: dict[str, Any] = {}
    if kind == "base":
        bp = BaseGraphParams(p["d"], p["r"], p["D"])
        g, pairs = build_base(bp, limits)
        derived = {"R": bp.R, "corners": len(corner_set(bp.d, bp.r ** 2))}
    elif kind == "product":
        p1 = BaseGraphParams(p["d1"], p["r1"], p["D"])
        p2 = BaseGraphParams(p["d2"], p["r2"], p["D"])
        g, pairs = alternation_product(p1, p2, directed=True, limits=limits)
        derived = {"R1": p1.R, "R2": p2.R, "delta1": len(pairs.vectors[0]), "delta2": len(pairs.vectors[1])}
    elif kind == "spanner":
        g, pairs, cp = build_spanner_instance(p["d1"], p["r1"], p["d2"], p["r2"], p["D"], p["t"], limits)
        derived = {"R1": p["d1"] * p["r1"] * p["D"], "R2": p["d2"] * p["r2"] * p["D"],
                   "delta1": cp.delta1, "delta2": cp.delta2}
    elif kind == "inner":
        inner = build_inner_graph(p["c"], p["L"], p["q"], limits=limits)
        g, pairs = inner.graph, inner.ports
        pairs.instance_kind = "inner"
        derived = {"step_radius": inner.step_radius, "base_radius": inner.base_radius,
                   "available_pairs": len(inner.pairs)}
    elif kind == "outer":
        outer = build_outer_graph(p["q"], p["L"], limits=limits)
        g, pairs = outer.graph, outer.pairs
        derived = {"outer_radius": outer.radius}
    else:
        inst = build_improved_spanner(p["c"], p["L"], p["q"], limits=limits)
        g, pairs = inst.graph, inst.pairs
        derived = {"step_radius": inst.params.inner_radius, "outer_radius": inst.params.outer_radius,
                   "lambda": inst.lam}
    return Instance(kind, p, g, pairs, derived)


def verify(inst: Instance) -> list[VerificationReport]:
    """Run the audits that the construction promises; order is fixed."""
    g, pairs = inst.graph, inst.pairs
    reports = [audit_canonical_walks(g, pairs)]
    expected = inst.expected_path_length()
    bad = np.flatnonzero((pairs.expected_length != expected) | (pairs.paths.shape[1] != expected))
    reports.append(VerificationReport(
        "length_bookkeeping", len(bad) == 0,
        {"pairs": len(pairs), "expected_length": expected, "mismatch": len(bad)},
        [(int(i),) for i in bad],
    ))
    reports.append(audit_unique_paths(g, pairs))
    reports.append(audit_pair_disjointness(g, pairs, DISJOINTNESS_MODE[inst.kind]))
    if inst.kind == "inner":
        cond = inner_conditions(g, pairs, inst.params["L"], inst.params["c"])
        reports.append(VerificationReport(
            "inner_conditions", all(cond.values()),
            {k: int(v) for k, v in cond.items()} | {"vertices": g.n, "vertex_bound": inst.params["q"] * inst.params["L"]},
            [(i,) for i, ok in enumerate(cond.values(), start=1) if not ok],
        ))
    return reports

