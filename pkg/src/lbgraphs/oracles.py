"""Exact verification primitives over LayeredGraph instances."""

from __future__ import annotations

import heapq
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from .errors import ConstructionError, InvalidParameterError, Limits, current_limits
from .graphs import EdgeKind, LayeredGraph, PairSet

UNREACHABLE = -1
_INF = np.int32(1 << 29)


class CountClass(str, Enum):
    ZERO = "zero"
    ONE = "one"
    MANY = "many"


@dataclass(frozen=True)
class PathCountResult:
    dist: int | None
    count_class: CountClass


@dataclass
class VerificationReport:
    """Pass/fail plus counters for one audited property."""

    name: str
    passed: bool
    counters: dict[str, int] = field(default_factory=dict)
    violations: list[tuple[int, ...]] = field(default_factory=list)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        counters = " ".join(f"{k}={v}" for k, v in self.counters.items())
        return f"{self.name}: {status} {counters}".rstrip()


@dataclass(frozen=True)
class ShortcutSet:
    edges: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class SpannerSubgraph:
    edge_ids: frozenset[int]

    def __len__(self) -> int:
        return len(self.edge_ids)

    @classmethod
    def full(cls, g: LayeredGraph) -> SpannerSubgraph:
        return cls(frozenset(range(g.m)))

    def mask(self, g: LayeredGraph) -> bytearray:
        out = bytearray(g.m)
        for e in self.edge_ids:
            if not 0 <= e < g.m:
                raise InvalidParameterError(f"edge id {e} is not in the host graph")
            out[e] = 1
        return out


@dataclass(frozen=True)
class WeightedEmulator:
    edges: tuple[tuple[int, int, int], ...]

    def __len__(self) -> int:
        return len(self.edges)


# ---------------------------------------------------------------------------
# single-source searches


def bfs(g: LayeredGraph, source: int, target: int | None = None, allowed: bytearray | None = None,
        extra: dict[int, list[int]] | None = None) -> list[int]:
    """Hop distances from ``source`` (-1 when unreachable).

    ``allowed`` masks edges by id; ``extra`` adds arcs (or undirected links when
    the graph is undirected, as supplied by the caller). Stops early once
    ``target`` is settled.
    """
    indptr, nbr, eid = g.adjacency
    dist = [-1] * g.n
    dist[source] = 0
    frontier = [source]
    level = 0
    while frontier:
        if target is not None and dist[target] >= 0:
            break
        level += 1
        nxt = []
        for u in frontier:
            for k in range(indptr[u], indptr[u + 1]):
                if allowed is not None and not allowed[eid[k]]:
                    continue
                w = nbr[k]
                if dist[w] < 0:
                    dist[w] = level
                    nxt.append(w)
            if extra and u in extra:
                for w in extra[u]:
                    if dist[w] < 0:
                        dist[w] = level
                        nxt.append(w)
        frontier = nxt
    return dist


def _counting_bfs(g: LayeredGraph, u: int, targets: Iterable[int], allowed: bytearray | None = None
                  ) -> tuple[dict[int, int], dict[int, int]]:
    """Level-synchronous BFS from ``u`` with path counts saturated at 2.

    Stops after the level on which the last of ``targets`` is reached; counts of
    every settled vertex are final at that point.
    """
    indptr, nbr, eid = g.adjacency
    dist = {u: 0}
    count = {u: 1}
    pending = set(targets) - {u}
    frontier = [u]
    level = 0
    while frontier and pending:
        level += 1
        nxt = []
        for x in frontier:
            cx = count[x]
            for k in range(indptr[x], indptr[x + 1]):
                if allowed is not None and not allowed[eid[k]]:
                    continue
                w = nbr[k]
                dw = dist.get(w)
                if dw is None:
                    dist[w] = level
                    count[w] = cx
                    nxt.append(w)
                elif dw == level:
                    count[w] = min(2, count[w] + cx)
        pending.difference_update(nxt)
        frontier = nxt
    return dist, count


def count_shortest_paths(g: LayeredGraph, u: int, v: int, allowed: bytearray | None = None) -> PathCountResult:
    """Distance and shortest-path multiplicity (saturated at 2) from ``u`` to ``v``."""
    if not (0 <= u < g.n and 0 <= v < g.n):
        raise InvalidParameterError(f"vertex ids ({u}, {v}) out of range")
    dist, count = _counting_bfs(g, u, (v,), allowed)
    if v not in dist:
        return PathCountResult(None, CountClass.ZERO)
    return PathCountResult(dist[v], CountClass.ONE if count[v] == 1 else CountClass.MANY)


def dag_distances(g: LayeredGraph, sources: Sequence[int], extra: Iterable[tuple[int, int]] = ()) -> np.ndarray:
    """Distances ``(len(sources), n)`` in a directed layer-monotone graph by layer relaxation.

    ``extra`` arcs must also go strictly upward in layer. Unreachable entries are -1.
    """
    if not g.directed:
        raise InvalidParameterError("dag_distances needs a directed graph")
    extra = np.asarray(list(extra), dtype=np.int64).reshape(-1, 2)
    src = np.concatenate([g.src, extra[:, 0]])
    dst = np.concatenate([g.dst, extra[:, 1]])
    layer = g.vertex_layer
    if np.any(layer[src] >= layer[dst]):
        raise InvalidParameterError("graph or extra arcs are not layer-monotone")
    sources = np.asarray(sources, dtype=np.int64)
    dist = np.full((len(sources), g.n), _INF, dtype=np.int32)
    dist[np.arange(len(sources)), sources] = 0
    dl = layer[dst]
    order = np.lexsort((dst, dl))
    src, dst, dl = src[order], dst[order], dl[order]
    bounds = np.searchsorted(dl, np.arange(g.num_layers + 1))
    for lay in range(1, g.num_layers):
        lo, hi = bounds[lay], bounds[lay + 1]
        if lo == hi:
            continue
        es, ed = src[lo:hi], dst[lo:hi]
        uniq, starts = np.unique(ed, return_index=True)
        cand = dist[:, es] + 1
        red = np.minimum.reduceat(cand, starts, axis=1)
        dist[:, uniq] = np.minimum(dist[:, uniq], red)
    dist[dist >= _INF] = -1
    return dist


def _dag_applicable(g: LayeredGraph) -> bool:
    return g.directed and g.is_layer_monotone()


def csgraph_distances(g: LayeredGraph, sources: Sequence[int], allowed: np.ndarray | None = None,
                      batch: int = 512) -> np.ndarray:
    """Hop distances from each source via compiled unweighted search; -1 when unreachable."""
    keep = np.ones(g.m, dtype=bool) if allowed is None else np.asarray(allowed, dtype=bool)
    mat = sp.csr_matrix((np.ones(int(keep.sum()), dtype=np.int8), (g.src[keep], g.dst[keep])), shape=(g.n, g.n))
    sources = np.asarray(list(sources), dtype=np.int64)
    out = np.empty((len(sources), g.n), dtype=np.int64)
    for lo in range(0, len(sources), batch):
        chunk = sources[lo:lo + batch]
        d = csgraph.shortest_path(mat, directed=g.directed, unweighted=True, indices=chunk)
        d[np.isinf(d)] = -1
        out[lo:lo + len(chunk)] = d.astype(np.int64)
    return out


def distances_from(g: LayeredGraph, sources: Sequence[int]) -> np.ndarray:
    """Distances from each source, choosing the layer DP or compiled search as appropriate."""
    if _dag_applicable(g):
        return dag_distances(g, sources)
    return csgraph_distances(g, sources)


def diameter(g: LayeredGraph, batch: int = 256) -> int:
    """Exact maximum finite distance over ordered pairs of distinct vertices."""
    best = 0
    if _dag_applicable(g):
        for lo in range(0, g.n, batch):
            d = dag_distances(g, range(lo, min(g.n, lo + batch)))
            if d.size:
                best = max(best, int(d.max()))
        return best
    for lo in range(0, g.n, batch):
        d = csgraph_distances(g, range(lo, min(g.n, lo + batch)))
        best = max(best, int(d.max()))
    return best


def all_pairs_small_oracle(g: LayeredGraph, limits: Limits | None = None) -> np.ndarray:
    """All-pairs hop distances, one unweighted search per vertex; -1 marks unreachable."""
    (limits or current_limits()).check("oracle_vertices", g.n)
    return csgraph_distances(g, range(g.n)).astype(np.int32)


# ---------------------------------------------------------------------------
# critical-pair checks


def _unit_layered(g: LayeredGraph) -> bool:
    return g.directed and bool(np.all(g.vertex_layer[g.dst] == g.vertex_layer[g.src] + 1))


def pair_path_counts(g: LayeredGraph, pairs: PairSet, batch: int = 2048) -> tuple[np.ndarray, np.ndarray]:
    """``(dist, count)`` per critical pair; count saturates at 2 and dist is -1 if unreachable.

    When every arc climbs exactly one layer, all source-target paths have the
    same length, so counts come from a sparse path-count DP over whole batches
    of sources. Other graphs use one counting BFS per distinct source.
    """
    k = len(pairs)
    dist = np.full(k, -1, dtype=np.int64)
    cnt = np.zeros(k, dtype=np.int64)
    if not _unit_layered(g):
        by_src: dict[int, list[int]] = defaultdict(list)
        for i, s in enumerate(pairs.sources.tolist()):
            by_src[s].append(i)
        for s, idx in by_src.items():
            tg = pairs.targets[idx].tolist()
            d, c = _counting_bfs(g, s, tg)
            for i, t in zip(idx, tg):
                dist[i] = d.get(t, -1)
                cnt[i] = c.get(t, 0)
        return dist, cnt
    adj = sp.csr_matrix((np.ones(g.m, dtype=np.int64), (g.src, g.dst)), shape=(g.n, g.n))
    span = g.vertex_layer[pairs.targets].astype(np.int64) - g.vertex_layer[pairs.sources]
    uniq, inv = np.unique(pairs.sources, return_inverse=True)
    for lo in range(0, len(uniq), batch):
        hi = min(len(uniq), lo + batch)
        members = np.flatnonzero((inv >= lo) & (inv < hi))
        frontier = sp.csr_matrix((np.ones(hi - lo, dtype=np.int64), (np.arange(hi - lo), uniq[lo:hi])),
                                 shape=(hi - lo, g.n))
        top = int(span[members].max()) if len(members) else -1
        for step in range(top + 1):
            at = members[span[members] == step]
            if len(at):
                vals = np.asarray(frontier[inv[at] - lo, pairs.targets[at]]).ravel()
                cnt[at] = np.minimum(vals, 2)
                dist[at] = np.where(vals > 0, step, -1)
            if step < top:
                frontier = frontier @ adj
                frontier.data = np.minimum(frontier.data, 2)
    return dist, cnt


def audit_unique_paths(g: LayeredGraph, pairs: PairSet) -> VerificationReport:
    """Every pair has exactly one shortest path and its length is the recorded one."""
    dist, cnt = pair_path_counts(g, pairs)
    bad_count = np.flatnonzero(cnt != 1)
    bad_len = np.flatnonzero(dist != pairs.expected_length)
    canon_len = np.array([len(p) for p in pairs.paths]) if len(pairs) else np.zeros(0)
    bad_canon = np.flatnonzero(canon_len != pairs.expected_length)
    violations = [(int(i),) for i in sorted(set(bad_count) | set(bad_len) | set(bad_canon))]
    return VerificationReport(
        "unique_shortest_paths", not violations,
        {"pairs": len(pairs), "non_unique": len(bad_count), "length_mismatch": len(bad_len),
         "canonical_length_mismatch": len(bad_canon)},
        violations,
    )


def audit_canonical_walks(g: LayeredGraph, pairs: PairSet) -> VerificationReport:
    """Each canonical path is a walk from its source that ends at its target."""
    try:
        walk = pairs.vertex_paths(g)
    except ConstructionError:
        return VerificationReport("canonical_walks", False, {"pairs": len(pairs)}, [(-1,)])
    bad = np.flatnonzero(walk[:, -1] != pairs.targets)
    return VerificationReport("canonical_walks", len(bad) == 0, {"pairs": len(pairs), "bad": len(bad)},
                              [(int(i),) for i in bad])


def _shared_pairs(groups_key: np.ndarray, owner: np.ndarray, npairs: int) -> np.ndarray:
    """Codes ``i * npairs + j`` (i < j) for every owner pair sharing a key, with multiplicity."""
    order = np.lexsort((owner, groups_key))
    k, o = groups_key[order], owner[order]
    if len(k) == 0:
        return np.zeros(0, dtype=np.int64)
    starts = np.flatnonzero(np.concatenate([[True], k[1:] != k[:-1]]))
    sizes = np.diff(np.concatenate([starts, [len(k)]]))
    codes = []
    for s in np.unique(sizes):
        if s < 2:
            continue
        sel = starts[sizes == s]
        block = o[sel[:, None] + np.arange(s)[None, :]]
        ii, jj = np.triu_indices(s, 1)
        a, b = block[:, ii], block[:, jj]
        codes.append((np.minimum(a, b) * npairs + np.maximum(a, b)).reshape(-1))
    return np.concatenate(codes) if codes else np.zeros(0, dtype=np.int64)


def _pairs_over(codes: np.ndarray, limit: int, npairs: int) -> list[tuple[int, int]]:
    if len(codes) == 0:
        return []
    uniq, counts = np.unique(codes, return_counts=True)
    bad = uniq[counts > limit]
    return [(int(c // npairs), int(c % npairs)) for c in bad]


def audit_pair_disjointness(g: LayeredGraph, pairs: PairSet, mode: str) -> VerificationReport:
    """Pairwise overlap bounds on canonical paths.

    mode ``edge_and_vertex``: no shared edge and at most one shared vertex;
    ``edge_disjoint``: no shared edge;
    ``edge_overlap_le_1``: at most one shared edge;
    ``clique_edge_unique``: no clique edge lies on two canonical paths.
    """
    if pairs.paths.ndim != 2 or (len(pairs) and pairs.paths.shape[1] == 0):
        raise InvalidParameterError("pairs carry no canonical paths")
    k = len(pairs)
    length = pairs.paths.shape[1]
    owner_e = np.repeat(np.arange(k, dtype=np.int64), length)
    flat_e = pairs.paths.reshape(-1)
    if mode == "edge_and_vertex":
        shared_edges = _pairs_over(_shared_pairs(flat_e, owner_e, k), 0, k)
        verts = pairs.vertex_paths(g)
        owner_v = np.repeat(np.arange(k, dtype=np.int64), length + 1)
        shared_verts = _pairs_over(_shared_pairs(verts.reshape(-1), owner_v, k), 1, k)
        violations = sorted(set(shared_edges) | set(shared_verts))
        counters = {"pairs": k, "edge_sharing_pairs": len(shared_edges),
                    "multi_vertex_sharing_pairs": len(shared_verts)}
    elif mode == "edge_disjoint":
        violations = _pairs_over(_shared_pairs(flat_e, owner_e, k), 0, k)
        counters = {"pairs": k, "edge_sharing_pairs": len(violations)}
    elif mode == "edge_overlap_le_1":
        violations = _pairs_over(_shared_pairs(flat_e, owner_e, k), 1, k)
        counters = {"pairs": k, "multi_edge_sharing_pairs": len(violations)}
    elif mode == "clique_edge_unique":
        is_clique = g.edge_kind[flat_e] == EdgeKind.CLIQUE
        e, o = flat_e[is_clique], owner_e[is_clique]
        violations = _pairs_over(_shared_pairs(e, o, k), 0, k)
        counters = {"pairs": k, "clique_edges_on_paths": int(len(np.unique(e))),
                    "clique_sharing_pairs": len(violations)}
    else:
        raise InvalidParameterError(f"unknown disjointness mode {mode!r}")
    return VerificationReport(f"disjointness[{mode}]", not violations, counters, violations)


# ---------------------------------------------------------------------------
# shortcut accounting


def _path_incidence(g: LayeredGraph, pairs: PairSet) -> dict[int, list[tuple[int, int]]]:
    verts = pairs.vertex_paths(g)
    inc: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for i, row in enumerate(verts.tolist()):
        for pos, v in enumerate(row):
            inc[v].append((i, pos))
    return inc


def shortcut_accounting(g: LayeredGraph, pairs: PairSet, sc: ShortcutSet,
                        host_reach: np.ndarray | None = None) -> tuple[int, VerificationReport]:
    """Count pairs whose distance drops below the recorded length once ``sc`` is added.

    The report checks the injection behind the shortcut lower bound: every
    improved pair owns a useful shortcut (both endpoints on its canonical path,
    at least two steps apart), no shortcut is useful for two pairs, hence
    ``improved <= useful <= |E'|``. ``host_reach`` optionally supplies host
    distances from every vertex (``(n, n)``) to validate membership in the closure.
    """
    arcs = [(int(u), int(v)) for u, v in sc.edges]
    if arcs:
        us = sorted({u for u, _ in arcs})
        if host_reach is None:
            reach = dict(zip(us, distances_from(g, us)))
        else:
            reach = {u: host_reach[u] for u in us}
        bad = [(u, v) for u, v in arcs if u == v or reach[u][v] < 0]
        if bad:
            raise InvalidParameterError(f"shortcuts outside the transitive closure: {bad[:5]}")
    pair_src = np.unique(pairs.sources)
    if _dag_applicable(g):
        dist = dag_distances(g, pair_src, arcs)
    else:
        extra: dict[int, list[int]] = defaultdict(list)
        for u, v in arcs:
            extra[u].append(v)
            if not g.directed:
                extra[v].append(u)
        dist = np.array([bfs(g, int(s), extra=extra) for s in pair_src]).reshape(len(pair_src), g.n)
    row = {int(s): i for i, s in enumerate(pair_src)}
    after = dist[[row[int(s)] for s in pairs.sources], pairs.targets]
    improved = (after >= 0) & (after < pairs.expected_length)
    improved_count = int(improved.sum())

    inc = _path_incidence(g, pairs)
    useful_for: dict[int, set[int]] = {}
    for idx, (u, v) in enumerate(arcs):
        on_u = dict(inc.get(u, ()))
        hits = set()
        for p, pos_v in inc.get(v, ()):
            pos_u = on_u.get(p)
            if pos_u is not None and abs(pos_v - pos_u) >= 2:
                hits.add(p)
        if hits:
            useful_for[idx] = hits
    owners = defaultdict(int)
    for hits in useful_for.values():
        for p in hits:
            owners[p] += 1
    uncovered = [int(p) for p in np.flatnonzero(improved) if owners.get(int(p), 0) == 0]
    multi = [i for i, hits in useful_for.items() if len(hits) > 1]
    useful = len(useful_for)
    passed = improved_count <= useful <= len(arcs) and not uncovered and not multi
    report = VerificationReport(
        "shortcut_accounting", passed,
        {"shortcuts": len(arcs), "useful": useful, "improved_pairs": improved_count,
         "retained_pairs": int(len(pairs) - improved_count), "improved_without_useful": len(uncovered),
         "multi_pair_shortcuts": len(multi)},
        [(p,) for p in uncovered] + [(i, -1) for i in multi],
    )
    return improved_count, report


# ---------------------------------------------------------------------------
# stretch


def _dijkstra(adj: dict[int, list[tuple[int, int]]], source: int, n: int) -> tuple[dict[int, int], dict[int, int]]:
    dist = {source: 0}
    pred: dict[int, int] = {}
    heap = [(0, source)]
    done = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, w in adj.get(u, ()):
            nd = d + w
            if v not in dist or nd < dist[v] or (nd == dist[v] and u < pred.get(v, n)):
                if v not in done:
                    dist[v] = nd
                    pred[v] = u
                    heapq.heappush(heap, (nd, v))
    return dist, pred


def _emulator_adjacency(em: WeightedEmulator) -> dict[int, list[tuple[int, int]]]:
    adj: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for u, v, w in em.edges:
        adj[u].append((v, w))
        adj[v].append((u, w))
    for lst in adj.values():
        lst.sort()
    return adj


def _host_distance(g: LayeredGraph, table: np.ndarray | None, u: int, v: int, cache: dict) -> int:
    if table is not None:
        return int(table[u, v])
    if u not in cache:
        cache[u] = bfs(g, u)
    return cache[u][v]


def validate_emulator(g: LayeredGraph, em: WeightedEmulator, table: np.ndarray | None = None) -> None:
    """Every emulator edge must carry exactly the host distance between its endpoints."""
    cache: dict = {}
    for u, v, w in em.edges:
        if w <= 0:
            raise InvalidParameterError(f"emulator edge ({u}, {v}) has non-positive weight {w}")
        d = _host_distance(g, table, u, v, cache)
        if d < 0 or w < d:
            raise InvalidParameterError(f"emulator edge ({u}, {v}, {w}) undercuts host distance {d}")
        if w != d:
            raise InvalidParameterError(f"emulator edge ({u}, {v}, {w}) is not normalised (host distance {d})")


def pair_stretches(g: LayeredGraph, candidate: SpannerSubgraph | WeightedEmulator, pairs: PairSet,
                   table: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """``(dist_candidate, dist_host)`` per pair; -1 means disconnected."""
    host = np.empty(len(pairs), dtype=np.int64)
    got = np.empty(len(pairs), dtype=np.int64)
    cache: dict = {}
    if isinstance(candidate, SpannerSubgraph):
        allowed = candidate.mask(g)
        by_src: dict[int, list[int]] = defaultdict(list)
        for i, s in enumerate(pairs.sources.tolist()):
            by_src[s].append(i)
        for s, idx in by_src.items():
            d_h = bfs(g, s, allowed=allowed)
            for i in idx:
                t = int(pairs.targets[i])
                got[i] = d_h[t]
                host[i] = _host_distance(g, table, s, t, cache)
        return got, host
    validate_emulator(g, candidate, table)
    adj = _emulator_adjacency(candidate)
    by_src = defaultdict(list)
    for i, s in enumerate(pairs.sources.tolist()):
        by_src[s].append(i)
    for s, idx in by_src.items():
        d_em, _ = _dijkstra(adj, s, g.n)
        for i in idx:
            t = int(pairs.targets[i])
            got[i] = d_em.get(t, -1)
            host[i] = _host_distance(g, table, s, t, cache)
    return got, host


def additive_stretch(g: LayeredGraph, candidate: SpannerSubgraph | WeightedEmulator, pairs: PairSet,
                     table: np.ndarray | None = None) -> float:
    """Maximum of ``dist_H - dist_G`` over the pairs (``inf`` if some pair is cut off).

    For emulators this also enforces ``dist_H >= dist_G`` on every pair.
    """
    got, host = pair_stretches(g, candidate, pairs, table)
    if len(got) == 0:
        return 0
    if np.any(got < 0):
        return float("inf")
    if isinstance(candidate, WeightedEmulator) and np.any(got < host):
        raise ConstructionError("emulator distance below host distance")
    return int((got - host).max())


# ---------------------------------------------------------------------------
# emulator -> spanner


@dataclass
class ConversionResult:
    spanner: SpannerSubgraph
    clique_edges: int
    emulator_size: int
    skipped_pairs: list[int]
    report: VerificationReport


def lexmin_shortest_path(g: LayeredGraph, u: int, v: int, dist_to_v: Sequence[int]) -> list[int]:
    """Edge ids of the lexicographically least (by vertex id) shortest ``u``-``v`` path."""
    indptr, nbr, eid = g.adjacency
    path = []
    x = u
    while x != v:
        want = dist_to_v[x] - 1
        best = None
        for k in range(indptr[x], indptr[x + 1]):
            w = nbr[k]
            if dist_to_v[w] == want and (best is None or w < nbr[best]):
                best = k
        if best is None:
            raise ConstructionError(f"no shortest-path continuation from {x} towards {v}")
        path.append(eid[best])
        x = nbr[best]
    return path


def emulator_to_spanner(g: LayeredGraph, em: WeightedEmulator, pairs: PairSet,
                        table: np.ndarray | None = None) -> ConversionResult:
    """Expand each pair's emulator shortest path into host paths and take the union.

    Each emulator edge ``{u, v}`` expands once, to the lexicographically least
    shortest host path from ``min(u, v)`` to ``max(u, v)``. The report checks
    ``dist_H'(x, y) == dist_em(x, y)`` on every connected pair and the clique
    bound ``|clique edges of H'| <= 2 D |em|`` (D read from the instance's
    clique count per canonical path: 2D - 1 clique edges per path).
    """
    if g.directed:
        raise InvalidParameterError("emulators are defined on undirected hosts")
    validate_emulator(g, em, table)
    adj = _emulator_adjacency(em)
    expansions: dict[tuple[int, int], list[int]] = {}
    bfs_cache: dict[int, list[int]] = {}
    chosen: set[int] = set()
    skipped: list[int] = []
    dist_em = np.full(len(pairs), -1, dtype=np.int64)
    by_src: dict[int, list[int]] = defaultdict(list)
    for i, s in enumerate(pairs.sources.tolist()):
        by_src[s].append(i)
    for s in sorted(by_src):
        d_em, pred = _dijkstra(adj, s, g.n)
        for i in by_src[s]:
            t = int(pairs.targets[i])
            if t not in d_em:
                skipped.append(i)
                continue
            dist_em[i] = d_em[t]
            x = t
            while x != s:
                p = pred[x]
                key = (min(p, x), max(p, x))
                if key not in expansions:
                    a, b = key
                    if table is not None:
                        to_b = table[:, b].tolist()
                    else:
                        if b not in bfs_cache:
                            bfs_cache[b] = bfs(g, b)
                        to_b = bfs_cache[b]
                    expansions[key] = lexmin_shortest_path(g, a, b, to_b)
                chosen.update(expansions[key])
                x = p
    spanner = SpannerSubgraph(frozenset(chosen))
    clique = int(np.sum(g.edge_kind[list(chosen)] == EdgeKind.CLIQUE)) if chosen else 0
    got, _ = pair_stretches(g, spanner, pairs, table) if len(pairs) else (np.zeros(0), None)
    connected = dist_em >= 0
    mismatch = np.flatnonzero(connected & (got != dist_em))
    longer = np.flatnonzero(connected & ((got < 0) | (got > dist_em)))
    per_path_clique = clique_edges_per_path(g, pairs)
    bound = (per_path_clique + 1) * len(em)
    report = VerificationReport(
        "emulator_conversion", len(mismatch) == 0 and clique <= bound,
        {"emulator_edges": len(em), "spanner_edges": len(chosen), "clique_edges": clique,
         "clique_bound": bound, "pairs_skipped": len(skipped), "distance_mismatch": len(mismatch),
         "spanner_longer_than_emulator": len(longer)},
        [(int(i),) for i in mismatch],
    )
    return ConversionResult(spanner, clique, len(em), skipped, report)


def clique_edges_per_path(g: LayeredGraph, pairs: PairSet) -> int:
    """Clique edges on one canonical path (2D - 1 for the clique-replaced product)."""
    if len(pairs) == 0:
        return 0
    return int(np.sum(g.edge_kind[pairs.paths[0]] == EdgeKind.CLIQUE))
