"""Budgeted experiments: shortcut sets, spanners, emulators and the G_T family."""

from __future__ import annotations

import itertools
import math
import time
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

import numpy as np

from .errors import InvalidParameterError, LBGraphsError, ResourceLimitError, current_limits
from .graphs import EdgeKind, LayeredGraph, PairSet
from .instances import Instance, generate
from .oracles import (
    ShortcutSet,
    SpannerSubgraph,
    VerificationReport,
    WeightedEmulator,
    all_pairs_small_oracle,
    bfs,
    dag_distances,
    distances_from,
    emulator_to_spanner,
    pair_stretches,
    shortcut_accounting,
)

RNG_ID = "numpy-pcg64-v1"
REPORT_VERSION = 1


def make_rng(seed: int) -> np.random.Generator:
    if not 0 <= seed < 2 ** 64:
        raise InvalidParameterError(f"seed must fit in 64 unsigned bits, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


def _iroot(x: int, k: int) -> int:
    """floor(x ** (1/k)) for integers x >= 0, k >= 1."""
    if x < 2 or k == 1:
        return x
    y = 1 << -(-x.bit_length() // k)
    while True:
        z = ((k - 1) * y + x // y ** (k - 1)) // k
        if z >= y:
            break
        y = z
    while y ** k > x:
        y -= 1
    while (y + 1) ** k <= x:
        y += 1
    return y


@dataclass(frozen=True)
class Budget:
    """Edge or shortcut allowance: ``multiplier * n``, ``multiplier * m`` or ``multiplier * n^(1+epsilon)``."""

    kind: str
    multiplier: Fraction
    epsilon: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        if self.kind not in ("vertex_linear", "edge_linear", "exponent"):
            raise InvalidParameterError(f"unknown budget kind {self.kind!r}")
        object.__setattr__(self, "multiplier", Fraction(self.multiplier))
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        if self.multiplier < 0 or self.epsilon < 0:
            raise InvalidParameterError("budget multiplier and epsilon must be non-negative")

    def resolve(self, n: int, m: int) -> int:
        a, b = self.multiplier.numerator, self.multiplier.denominator
        if self.kind == "vertex_linear":
            return a * n // b
        if self.kind == "edge_linear":
            return a * m // b
        p, q = self.epsilon.numerator, self.epsilon.denominator
        # floor(a/b * n^((q+p)/q)) computed exactly
        return _iroot(a ** q * n ** (q + p), q) // b

    def describe(self) -> dict[str, str]:
        return {"kind": self.kind, "multiplier": str(self.multiplier), "epsilon": str(self.epsilon)}


@dataclass
class ExperimentReport:
    """Everything one evaluation measured; serialized with a fixed field order."""

    experiment: str
    instance: dict[str, Any]
    budget: dict[str, Any]
    candidate: str
    measured: dict[str, Any]
    audits: list[VerificationReport] = field(default_factory=list)
    status: str = "PASS"
    wall_clock: float | None = None

    @property
    def passed(self) -> bool:
        return self.status == "PASS"

    def to_text(self, timing: bool = False, max_violations: int = 20) -> str:
        lines = [f"# lbgraphs report v{REPORT_VERSION}", f"experiment: {self.experiment}"]
        lines += [f"instance.{k}: {v}" for k, v in self.instance.items()]
        lines += [f"budget.{k}: {v}" for k, v in self.budget.items()]
        lines.append(f"candidate: {self.candidate}")
        lines += [f"measured.{k}: {_fmt(v)}" for k, v in self.measured.items()]
        for rep in self.audits:
            lines.append(f"audit.{rep.summary()}")
            for viol in rep.violations[:max_violations]:
                lines.append(f"  violation {rep.name} " + " ".join(map(str, viol)))
            if len(rep.violations) > max_violations:
                lines.append(f"  violation {rep.name} ... {len(rep.violations) - max_violations} more")
        if timing and self.wall_clock is not None:
            lines.append(f"wall_clock_s: {self.wall_clock:.3f}")
        lines.append(f"status: {self.status}")
        return "\n".join(lines) + "\n"


def _fmt(v: Any) -> str:
    if isinstance(v, float):
        return "inf" if math.isinf(v) else repr(v)
    if isinstance(v, (list, tuple)):
        return " ".join(map(_fmt, v))
    return str(v)


def instance_summary(inst: Instance) -> dict[str, Any]:
    out: dict[str, Any] = {"kind": inst.kind}
    out.update(inst.params)
    out.update({"n": inst.graph.n, "m": inst.graph.m, "pairs": len(inst.pairs)})
    return out


def _status(audits: list[VerificationReport]) -> str:
    return "PASS" if all(a.passed for a in audits) else "FAIL"


def _rejected(experiment: str, inst: Instance, budget: Budget, allowance: int, desc: str, size: int) -> ExperimentReport:
    return ExperimentReport(experiment, instance_summary(inst), budget.describe() | {"allowance": allowance},
                            desc, {"candidate_size": size}, [], "REJECTED_OVER_BUDGET")


# ---------------------------------------------------------------------------
# shortcut sets


def trivial_shortcuts(g: LayeredGraph, k: int, seed: int) -> ShortcutSet:
    """Sample ``k`` vertices uniformly without replacement; shortcut every reachable ordered pair among them."""
    if k < 0:
        raise InvalidParameterError(f"k must be non-negative, got {k}")
    if k > g.n:
        raise InvalidParameterError(f"k={k} exceeds the vertex count {g.n}")
    if k == 0:
        return ShortcutSet(())
    rng = make_rng(seed)
    chosen = np.sort(rng.choice(g.n, size=k, replace=False))
    dist = distances_from(g, chosen)
    sub = dist[:, chosen]
    i, j = np.nonzero(sub > 0)
    return ShortcutSet(tuple((int(chosen[a]), int(chosen[b])) for a, b in zip(i, j)))


def _on_path_draws(walk: np.ndarray, onpath: np.ndarray, batch: int,
                   rng: np.random.Generator) -> np.ndarray:
    """``(2*batch, 2)`` vertex pairs alternating same-path positions and uniform on-path vertices."""
    npairs, width = walk.shape
    i = rng.integers(npairs, size=batch)
    a = rng.integers(width, size=batch)
    b = rng.integers(width - 1, size=batch)
    b = b + (b >= a)
    same = np.stack([walk[i, np.minimum(a, b)], walk[i, np.maximum(a, b)]], axis=1)
    anywhere = onpath[rng.integers(len(onpath), size=(batch, 2))]
    out = np.empty((2 * batch, 2), dtype=np.int64)
    out[0::2] = same
    out[1::2] = anywhere
    return out


class PathShortcutSampler:
    """Random shortcut sets whose endpoints lie on canonical paths.

    Draws alternate between joining two positions of one canonical path and
    joining two uniformly drawn on-path vertices connected in the host;
    duplicates and unreachable draws are discarded.
    """

    def __init__(self, g: LayeredGraph, pairs: PairSet):
        self.walk = pairs.vertex_paths(g)
        self.onpath = np.unique(self.walk)
        self.reach = np.full((g.n,), -1, dtype=np.int64)
        self.reach[self.onpath] = np.arange(len(self.onpath))
        self.dist = distances_from(g, self.onpath)[:, self.onpath]

    def sample(self, k: int, rng: np.random.Generator) -> ShortcutSet:
        out: dict[tuple[int, int], None] = {}
        for _ in range(100):
            if len(out) >= k:
                break
            draws = _on_path_draws(self.walk, self.onpath, max(64, k), rng)
            ok = self.dist[self.reach[draws[:, 0]], self.reach[draws[:, 1]]] > 0
            for u, v in draws[ok].tolist():
                out.setdefault((u, v))
                if len(out) == k:
                    break
        if len(out) < k:
            raise InvalidParameterError(f"cannot draw {k} distinct shortcuts on canonical paths")
        return ShortcutSet(tuple(out))


def diameter_with_shortcuts(g: LayeredGraph, arcs: Sequence[tuple[int, int]], batch: int = 256) -> int:
    """Largest finite distance over ordered pairs once ``arcs`` are added (layer-monotone digraphs)."""
    if not (g.directed and g.is_layer_monotone()):
        raise InvalidParameterError("shortcut diameters are measured on layer-monotone digraphs")
    best = 0
    for lo in range(0, g.n, batch):
        d = dag_distances(g, range(lo, min(g.n, lo + batch)), arcs)
        if d.size:
            best = max(best, int(d.max()))
    return best


def run_shortcut_experiment(inst: Instance, budget: Budget,
                            candidate: ShortcutSet | Callable[[Instance, int], ShortcutSet],
                            description: str, timing: bool = False) -> ExperimentReport:
    """Apply a shortcut set and audit it against the critical-pair accounting.

    When ``|E'| < |P|`` the measured diameter must stay at the critical path length.
    """
    if inst.kind not in ("base", "product"):
        raise InvalidParameterError(f"shortcut experiments need a base or product instance, got {inst.kind}")
    t0 = time.perf_counter()
    g, pairs = inst.graph, inst.pairs
    allowance = budget.resolve(g.n, g.m)
    sc = candidate(inst, allowance) if callable(candidate) else candidate
    if len(sc) > allowance:
        return _rejected("shortcut", inst, budget, allowance, description, len(sc))
    improved, acc = shortcut_accounting(g, pairs, sc)
    diam = diameter_with_shortcuts(g, sc.edges)
    expected = inst.expected_path_length()
    below = len(sc) < len(pairs)
    keep = VerificationReport(
        "diameter_retained", (not below) or diam == expected,
        {"applies": int(below), "diameter": diam, "critical_length": expected},
    )
    audits = [acc, keep]
    measured = {"shortcuts": len(sc), "critical_pairs": len(pairs), "improved_pairs": improved,
                "retained_pairs": len(pairs) - improved, "diameter_before": expected, "diameter_after": diam}
    return ExperimentReport("shortcut", instance_summary(inst), budget.describe() | {"allowance": allowance},
                            description, measured, audits, _status(audits),
                            time.perf_counter() - t0 if timing else None)


# ---------------------------------------------------------------------------
# spanners


def _require_spanner_instance(inst: Instance) -> None:
    if inst.kind != "spanner":
        raise InvalidParameterError(f"this experiment needs a spanner instance, got {inst.kind}")


def canonical_edge_mask(g: LayeredGraph, pairs: PairSet, pair_ids: Sequence[int], kind: EdgeKind) -> bytearray:
    """All-ones edge mask with the ``kind`` edges on the listed canonical paths cleared."""
    mask = bytearray(b"\x01") * g.m
    for i in pair_ids:
        for e in pairs.paths[i].tolist():
            if g.edge_kind[e] == kind:
                mask[e] = 0
    return mask


def spanner_without(g: LayeredGraph, removed: Sequence[int]) -> SpannerSubgraph:
    gone = set(int(e) for e in removed)
    return SpannerSubgraph(frozenset(e for e in range(g.m) if e not in gone))


def run_spanner_experiment(inst: Instance, budget: Budget, candidate: SpannerSubgraph, description: str,
                           timing: bool = False) -> ExperimentReport:
    """Measure stretch over critical pairs and check the clique-edge lower-bound mechanics.

    Per pair: missing at least D canonical clique edges forces stretch >= 2D and
    missing an inherited canonical edge forces stretch >= 2t. Globally: fewer than
    D|P| clique edges means some pair misses D of its own, and that pair is reported.
    """
    _require_spanner_instance(inst)
    t0 = time.perf_counter()
    g, pairs = inst.graph, inst.pairs
    D, t = inst.params["D"], inst.params["t"]
    allowance = budget.resolve(g.n, g.m)
    if len(candidate) > allowance:
        return _rejected("spanner", inst, budget, allowance, description, len(candidate))
    mask = np.frombuffer(bytes(candidate.mask(g)), dtype=np.uint8).astype(bool)
    clique_total = int(np.sum(mask & (g.edge_kind == EdgeKind.CLIQUE)))
    on_path_clique = g.edge_kind[pairs.paths] == EdgeKind.CLIQUE
    on_path_inherited = g.edge_kind[pairs.paths] == EdgeKind.INHERITED
    absent = ~mask[pairs.paths]
    missing_clique = (absent & on_path_clique).sum(axis=1)
    missing_inherited = (absent & on_path_inherited).sum(axis=1)

    got, host = pair_stretches(g, candidate, pairs)
    stretch = np.where(got < 0, np.iinfo(np.int64).max, got - host)
    bad_clique = np.flatnonzero((missing_clique >= D) & (stretch < 2 * D))
    bad_inherited = np.flatnonzero((missing_inherited >= 1) & (stretch < 2 * t))
    per_pair = VerificationReport(
        "per_pair_stretch", len(bad_clique) == 0 and len(bad_inherited) == 0,
        {"pairs_missing_D_clique": int(np.sum(missing_clique >= D)),
         "pairs_missing_inherited": int(np.sum(missing_inherited >= 1)),
         "clique_violations": len(bad_clique), "inherited_violations": len(bad_inherited)},
        [(int(i), 0) for i in bad_clique] + [(int(i), 1) for i in bad_inherited],
    )
    below = clique_total < D * len(pairs)
    witness = int(np.argmax(missing_clique)) if len(pairs) else -1
    ok = (not below) or (missing_clique[witness] >= D and stretch[witness] >= 2 * D)
    pigeon = VerificationReport(
        "clique_pigeonhole", bool(ok),
        {"applies": int(below), "clique_edges": clique_total, "threshold": D * len(pairs),
         "witness_pair": witness if below else -1},
    )
    audits = [per_pair, pigeon]
    finite = stretch[got >= 0]
    max_stretch: Any = float("inf") if np.any(got < 0) else (int(finite.max()) if len(finite) else 0)
    measured = {"edges": len(candidate), "clique_edges": clique_total, "max_stretch": max_stretch,
                "disconnected_pairs": int(np.sum(got < 0)),
                "pairs_with_stretch_ge_2D": int(np.sum(stretch >= 2 * D))}
    if below:
        measured["witness_pair"] = witness
        measured["witness_stretch"] = "inf" if got[witness] < 0 else int(stretch[witness])
    return ExperimentReport("spanner", instance_summary(inst), budget.describe() | {"allowance": allowance},
                            description, measured, audits, _status(audits),
                            time.perf_counter() - t0 if timing else None)


def random_subgraph(g: LayeredGraph, size: int, rng: np.random.Generator) -> SpannerSubgraph:
    size = min(max(size, 0), g.m)
    return SpannerSubgraph(frozenset(rng.choice(g.m, size=size, replace=False).tolist()))


# ---------------------------------------------------------------------------
# emulators


def host_table(g: LayeredGraph) -> np.ndarray | None:
    """All-pairs table when the graph fits the oracle budget, else None."""
    return all_pairs_small_oracle(g) if g.n <= current_limits().oracle_vertices else None


def pair_emulator(g: LayeredGraph, pairs: PairSet) -> WeightedEmulator:
    """One exact weighted edge per critical pair."""
    seen = {}
    for s, t, ln in zip(pairs.sources.tolist(), pairs.targets.tolist(), pairs.expected_length.tolist()):
        seen.setdefault((min(s, t), max(s, t)), ln)
    return WeightedEmulator(tuple((a, b, w) for (a, b), w in seen.items()))


def random_emulator(g: LayeredGraph, pairs: PairSet, size: int, rng: np.random.Generator,
                    table: np.ndarray) -> WeightedEmulator:
    """``size`` distinct normalised edges between canonical-path vertices.

    Draws alternate between two positions on one canonical path and two
    on-path vertices in the same component. Weights are host distances.
    """
    walk = pairs.vertex_paths(g)
    onpath = np.unique(walk)
    out: dict[tuple[int, int], int] = {}
    for _ in range(100):
        if len(out) >= size:
            break
        draws = _on_path_draws(walk, onpath, max(64, size), rng)
        w = table[draws[:, 0], draws[:, 1]]
        for (u, v), wt in zip(draws[w > 0].tolist(), w[w > 0].tolist()):
            out.setdefault((min(u, v), max(u, v)), int(wt))
            if len(out) == size:
                break
    if len(out) < size:
        raise InvalidParameterError(f"cannot draw {size} distinct emulator edges")
    return WeightedEmulator(tuple((a, b, w) for (a, b), w in out.items()))


def run_emulator_experiment(inst: Instance, budget: Budget, em: WeightedEmulator, description: str,
                            table: np.ndarray | None = None, timing: bool = False) -> ExperimentReport:
    """Convert the emulator to a spanner and audit the conversion and the size threshold."""
    _require_spanner_instance(inst)
    t0 = time.perf_counter()
    g, pairs = inst.graph, inst.pairs
    D = inst.params["D"]
    allowance = budget.resolve(g.n, g.m)
    if len(em) > allowance:
        return _rejected("emulator", inst, budget, allowance, description, len(em))
    if table is None:
        table = host_table(g)
    conv = emulator_to_spanner(g, em, pairs, table)
    got, host = pair_stretches(g, em, pairs, table)
    stretch = np.where(got < 0, np.iinfo(np.int64).max, got - host)
    under = np.flatnonzero((got >= 0) & (got < host))
    lower = VerificationReport("emulator_lower_bound", len(under) == 0, {"pairs_below_host": len(under)},
                               [(int(i),) for i in under])
    small = 2 * len(em) < len(pairs)
    big = np.flatnonzero(stretch >= 2 * D)
    witness = int(big[0]) if len(big) else -1
    threshold = VerificationReport(
        "emulator_size_threshold", (not small) or witness >= 0,
        {"applies": int(small), "emulator_edges": len(em), "pairs": len(pairs),
         "witness_pair": witness if small else -1},
    )
    delta2 = int(inst.derived.get("delta2", 0))
    audits = [conv.report, lower, threshold]
    measured = {"emulator_edges": len(em), "regime_delta2_ge_D2": int(delta2 >= D * D),
                "spanner_edges": len(conv.spanner), "spanner_clique_edges": conv.clique_edges,
                "clique_bound": 2 * D * len(em), "pairs_disconnected": int(np.sum(got < 0)),
                "pairs_with_stretch_ge_2D": len(big)}
    return ExperimentReport("emulator", instance_summary(inst), budget.describe() | {"allowance": allowance},
                            description, measured, audits, _status(audits),
                            time.perf_counter() - t0 if timing else None)


# ---------------------------------------------------------------------------
# the G_T family


def build_gT(g: LayeredGraph, pairs: PairSet, T: Sequence[int]) -> LayeredGraph:
    """Copy of ``g`` without the clique edges on the canonical paths of the pairs in ``T``.

    Vertex ids are unchanged; surviving edges keep their relative order.
    """
    bad = [i for i in T if not 0 <= i < len(pairs)]
    if bad:
        raise InvalidParameterError(f"T references unknown pairs {bad}")
    keep = np.frombuffer(bytes(canonical_edge_mask(g, pairs, T, EdgeKind.CLIQUE)), dtype=np.uint8).astype(bool)
    return LayeredGraph(
        directed=g.directed, num_layers=g.num_layers, coord_blocks=g.coord_blocks,
        vertex_kind=g.vertex_kind, vertex_layer=g.vertex_layer, coords=g.coords,
        provenance=g.provenance, port_index=g.port_index,
        src=g.src[keep], dst=g.dst[keep], edge_kind=g.edge_kind[keep],
        edge_origin=g.edge_origin[keep], edge_step=g.edge_step[keep],
    )


def _pair_distances(g: LayeredGraph, pairs: PairSet, allowed: bytearray | None) -> np.ndarray:
    by_src: dict[int, list[int]] = defaultdict(list)
    for i, s in enumerate(pairs.sources.tolist()):
        by_src[s].append(i)
    out = np.empty(len(pairs), dtype=np.int64)
    for s, idx in by_src.items():
        d = bfs(g, s, allowed=allowed)
        for i in idx:
            out[i] = d[int(pairs.targets[i])]
    return out


def gT_contract(g: LayeredGraph, pairs: PairSet, T: Sequence[int], D: int,
                base: np.ndarray | None = None) -> tuple[np.ndarray, list[tuple[int, ...]]]:
    """Pair distances in G_T and the pairs breaking the two-sided contract."""
    if base is None:
        base = _pair_distances(g, pairs, None)
    after = _pair_distances(g, pairs, canonical_edge_mask(g, pairs, T, EdgeKind.CLIQUE))
    inside = np.zeros(len(pairs), dtype=bool)
    inside[list(T)] = True
    ok_in = (after < 0) | (after >= base + 2 * D)
    ok_out = after == base
    bad = np.flatnonzero(np.where(inside, ~ok_in, ~ok_out))
    return after, [(int(i),) for i in bad]


def trimmed(pairs: PairSet, max_pairs: int) -> PairSet:
    return pairs.subset(np.arange(min(max_pairs, len(pairs))))


def run_compress_experiment(inst: Instance, T: Sequence[int] | None, max_pairs: int = 12,
                            timing: bool = False) -> ExperimentReport:
    """Check the G_T contract for one subset, or for every subset when ``T`` is None.

    The exhaustive mode also requires all ``2^|P|`` distance vectors to be distinct.
    """
    _require_spanner_instance(inst)
    t0 = time.perf_counter()
    g, D = inst.graph, inst.params["D"]
    pairs = trimmed(inst.pairs, max_pairs)
    base = _pair_distances(g, pairs, None)
    audits = []
    if T is not None:
        after, bad = gT_contract(g, pairs, T, D, base)
        audits.append(VerificationReport("gT_contract", not bad, {"pairs": len(pairs), "T_size": len(T),
                                                                  "violations": len(bad)}, bad))
        desc = "T=" + (",".join(map(str, T)) if T else "none")
        measured = {"pairs": len(pairs), "dist_G": base.tolist(), "dist_GT": after.tolist()}
    else:
        k = len(pairs)
        vectors = set()
        violations: list[tuple[int, ...]] = []
        for mask in range(1 << k):
            subset = [i for i in range(k) if mask >> i & 1]
            after, bad = gT_contract(g, pairs, subset, D, base)
            vectors.add(tuple(after.tolist()))
            violations += [(mask, b[0]) for b in bad]
        audits.append(VerificationReport("gT_contract_all_subsets", not violations,
                                         {"pairs": k, "subsets": 1 << k, "violations": len(violations)}, violations))
        audits.append(VerificationReport("gT_distinct_vectors", len(vectors) == 1 << k,
                                         {"subsets": 1 << k, "distinct_vectors": len(vectors)}))
        desc = "T=all-subsets"
        measured = {"pairs": k, "dist_G": base.tolist(), "distinct_vectors": len(vectors)}
    return ExperimentReport("compress", instance_summary(inst), {"kind": "none"}, desc, measured, audits,
                            _status(audits), time.perf_counter() - t0 if timing else None)


# ---------------------------------------------------------------------------
# sweeps


SWEEP_COLUMNS = ("kind", "params", "n", "m", "pairs", "path_length", "budget_kind", "multiplier", "epsilon",
                 "allowance", "candidate_size", "measure", "value", "status")


def sweep(cells: Sequence[tuple[str, dict[str, int]]], budgets: Sequence[Budget], seed: int = 0) -> list[dict[str, Any]]:
    """Run every cell against every budget with the trivial random baseline.

    Directed instances get ``trivial_shortcuts`` with ``k = isqrt(allowance)``
    and report the shortcut diameter; spanner instances get a random subgraph of
    ``allowance`` edges and report its maximum stretch. Cells that exceed the
    resource limits are recorded and skipped.
    """
    rows: list[dict[str, Any]] = []
    for kind, params in cells:
        label = ",".join(f"{k}={v}" for k, v in params.items())
        try:
            inst = generate(kind, params)
        except (ResourceLimitError, LBGraphsError) as exc:
            for b in budgets:
                status = "RESOURCE_LIMIT" if isinstance(exc, ResourceLimitError) else "ERROR"
                rows.append(_row(kind, label, None, b, None, None, "", "", status))
            continue
        for b in budgets:
            allowance = b.resolve(inst.graph.n, inst.graph.m)
            if kind in ("base", "product"):
                k = min(math.isqrt(allowance), inst.graph.n)
                rep = run_shortcut_experiment(inst, b, lambda i, a: trivial_shortcuts(i.graph, k, seed),
                                              f"trivial k={k} seed={seed} rng={RNG_ID}")
                size, measure, value = rep.measured.get("shortcuts"), "diameter", rep.measured.get("diameter_after")
            elif kind == "spanner":
                cand = random_subgraph(inst.graph, allowance, make_rng(seed))
                rep = run_spanner_experiment(inst, b, cand, f"random-subgraph seed={seed} rng={RNG_ID}")
                size, measure, value = len(cand), "max_stretch", rep.measured.get("max_stretch")
            else:
                rows.append(_row(kind, label, inst, b, allowance, None, "", "", "COUNTS_ONLY"))
                continue
            rows.append(_row(kind, label, inst, b, allowance, size, measure, value, rep.status))
    return rows


def _row(kind: str, label: str, inst: Instance | None, b: Budget, allowance: int | None, size: int | None,
         measure: str, value: Any, status: str) -> dict[str, Any]:
    return {
        "kind": kind, "params": label,
        "n": inst.graph.n if inst else "", "m": inst.graph.m if inst else "",
        "pairs": len(inst.pairs) if inst else "", "path_length": inst.expected_path_length() if inst else "",
        "budget_kind": b.kind, "multiplier": str(b.multiplier), "epsilon": str(b.epsilon),
        "allowance": "" if allowance is None else allowance, "candidate_size": "" if size is None else size,
        "measure": measure, "value": _fmt(value) if value != "" else "", "status": status,
    }


def sweep_table(rows: Sequence[dict[str, Any]]) -> str:
    lines = ["\t".join(SWEEP_COLUMNS)]
    lines += ["\t".join(str(r[c]) for c in SWEEP_COLUMNS) for r in rows]
    return "\n".join(lines) + "\n"


def param_grid(kind: str, axes: dict[str, Sequence[int]]) -> list[tuple[str, dict[str, int]]]:
    keys = list(axes)
    return [(kind, dict(zip(keys, combo))) for combo in itertools.product(*(axes[k] for k in keys))]
