"""Spanner/emulator hard instances: subdivision, clique replacement, inner/outer substitution."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ConstructionError, InfeasibleError, InvalidParameterError, Limits, current_limits
from .graphs import (
    BaseGraphParams,
    EdgeKind,
    LayeredGraph,
    PairSet,
    VertexKind,
    alternation_product,
    build_layered,
    product_counts,
)
from .lattice import ball_count, corner_set, minimal_radius_with_corners


@dataclass(frozen=True)
class CliqueParams:
    delta1: int
    delta2: int

    def __post_init__(self) -> None:
        if not self.delta1 >= self.delta2 >= 1:
            raise InvalidParameterError(f"need delta1 >= delta2 >= 1, got {self.delta1}, {self.delta2}")


@dataclass(frozen=True)
class InnerOuterParams:
    c: int
    L: int
    q: int
    inner_radius: int
    outer_radius: int
    c0: Fraction | None = None


def _concat(*arrays: np.ndarray) -> np.ndarray:
    return np.concatenate([np.asarray(a) for a in arrays])


def subdivide(g: LayeredGraph, pairs: PairSet, t: int, only_kind: EdgeKind | None = EdgeKind.INHERITED,
              limits: Limits | None = None) -> tuple[LayeredGraph, PairSet]:
    """Replace each targeted edge by a path of ``t`` edges through ``t - 1`` new vertices.

    Vertex ids of ``g`` are kept; new vertices follow in edge order. Edge ids are
    reassigned so every replaced edge becomes a consecutive run, walked from the
    old source towards the old target.
    """
    if not isinstance(t, (int, np.integer)) or t < 1:
        raise InvalidParameterError(f"subdivision factor must be >= 1, got {t!r}")
    if t == 1:
        return g, pairs
    target = np.ones(g.m, dtype=bool) if only_kind is None else (g.edge_kind == only_kind)
    per = np.where(target, t, 1)
    new_start = _concat([0], np.cumsum(per)).astype(np.int64)
    n_new = int(target.sum()) * (t - 1)
    limits = limits or current_limits()
    limits.check("max_vertices", g.n + n_new)
    limits.check("max_edges", int(new_start[-1]))

    tidx = np.flatnonzero(target)
    # chain vertices for targeted edge j: g.n + rank(j) * (t - 1) + 0..t-2
    rank = np.full(g.m, -1, dtype=np.int64)
    rank[tidx] = np.arange(len(tidx))
    chain = g.n + rank[:, None] * (t - 1) + np.arange(t - 1)[None, :]

    src = np.empty(int(new_start[-1]), dtype=np.int64)
    dst = np.empty_like(src)
    kind = np.repeat(g.edge_kind, per)
    origin = np.repeat(g.edge_origin, per)
    step = np.repeat(g.edge_step, per)
    keep = np.flatnonzero(~target)
    src[new_start[keep]] = g.src[keep]
    dst[new_start[keep]] = g.dst[keep]
    if len(tidx):
        base = new_start[tidx]
        nodes = np.hstack([g.src[tidx, None], chain[tidx], g.dst[tidx, None]])
        for k in range(t):
            src[base + k] = nodes[:, k]
            dst[base + k] = nodes[:, k + 1]

    sub = LayeredGraph(
        directed=g.directed, num_layers=g.num_layers, coord_blocks=g.coord_blocks,
        vertex_kind=_concat(g.vertex_kind, np.full(n_new, VertexKind.SUBDIVISION, dtype=np.int8)).astype(np.int8),
        vertex_layer=_concat(g.vertex_layer, np.repeat(g.vertex_layer[g.src[tidx]], t - 1)).astype(np.int32),
        coords=np.vstack([g.coords, np.repeat(g.coords[g.src[tidx]], t - 1, axis=0)]),
        provenance=_concat(g.provenance, np.repeat(g.edge_origin[tidx], t - 1)).astype(np.int64),
        port_index=_concat(g.port_index, np.full(n_new, -1, dtype=np.int64)).astype(np.int64),
        src=src, dst=dst, edge_kind=kind, edge_origin=origin, edge_step=step,
    )

    lengths = per[pairs.paths]
    if len(pairs) and not np.all(lengths == lengths[:, :1]):
        raise ConstructionError("canonical paths mix subdivided and untouched edges unevenly")
    width = int(lengths[0].sum()) if len(pairs) else 0
    new_paths = np.empty((len(pairs), width), dtype=np.int64)
    col = 0
    for k in range(pairs.paths.shape[1]):
        run = int(lengths[0, k]) if len(pairs) else 0
        starts = new_start[pairs.paths[:, k]]
        new_paths[:, col:col + run] = starts[:, None] + np.arange(run)[None, :]
        col += run
    new_pairs = PairSet(pairs.instance_kind, pairs.sources, pairs.targets, lengths.sum(axis=1).astype(np.int64),
                        new_paths, pairs.witness, pairs.vectors)
    return sub, new_pairs


def clique_replace(g: LayeredGraph, pairs: PairSet, delta1: int, delta2: int,
                   limits: Limits | None = None) -> tuple[LayeredGraph, PairSet, CliqueParams]:
    """Replace every interior lattice vertex of a (subdivided) product graph by a complete bipartite block.

    The delta1 ports stand for the first-factor corner vectors and the delta2 ports for the
    second-factor vectors; the edge whose step is vector ``s`` attaches to port ``s``.
    Boundary vertices keep all their ports even if some vectors have no edge there.
    """
    params = CliqueParams(delta1, delta2)
    top = g.num_layers - 1
    interior = np.flatnonzero((g.vertex_kind == VertexKind.LATTICE) & (g.vertex_layer > 0) & (g.vertex_layer < top))
    k_int = len(interior)
    ports_per = delta1 + delta2
    limits = limits or current_limits()
    limits.check("max_vertices", g.n - k_int + k_int * ports_per)
    limits.check("max_edges", g.m + k_int * delta1 * delta2)
    if np.any(g.edge_step < 0) or np.any(g.edge_step >= ports_per):
        raise ConstructionError("edge steps do not index the product's vector sets")

    replaced = np.zeros(g.n, dtype=bool)
    replaced[interior] = True
    keep = np.flatnonzero(~replaced)
    new_id = np.full(g.n, -1, dtype=np.int64)
    new_id[keep] = np.arange(len(keep))
    rank = np.full(g.n, -1, dtype=np.int64)
    rank[interior] = np.arange(k_int)
    port_base = len(keep)

    def port_of(v: np.ndarray, s: np.ndarray) -> np.ndarray:
        return port_base + rank[v] * ports_per + s

    src = np.where(replaced[g.src], port_of(g.src, g.edge_step), new_id[g.src])
    dst = np.where(replaced[g.dst], port_of(g.dst, g.edge_step), new_id[g.dst])
    # each port carries at most one external edge
    attached = np.concatenate([src[replaced[g.src]], dst[replaced[g.dst]]])
    if len(np.unique(attached)) != len(attached):
        raise ConstructionError("two external edges claim the same clique port")

    # clique edges: entering side -> leaving side; odd layers enter by first-factor steps
    lay = g.vertex_layer[interior]
    v_side = port_base + np.arange(k_int)[:, None] * ports_per + np.arange(delta1)[None, :]
    w_side = port_base + np.arange(k_int)[:, None] * ports_per + delta1 + np.arange(delta2)[None, :]
    a = np.repeat(v_side, delta2, axis=1)            # (k, delta1 * delta2) ordered by (v, w)
    b = np.tile(w_side, (1, delta1))
    odd = (lay % 2 == 1)[:, None]
    c_src = np.where(odd, a, b).reshape(-1)
    c_dst = np.where(odd, b, a).reshape(-1)
    clique_base = g.m

    n_ports = k_int * ports_per
    out = LayeredGraph(
        directed=g.directed, num_layers=g.num_layers, coord_blocks=g.coord_blocks,
        vertex_kind=_concat(g.vertex_kind[keep], np.full(n_ports, VertexKind.CLIQUE_PORT)).astype(np.int8),
        vertex_layer=_concat(g.vertex_layer[keep], np.repeat(lay, ports_per)).astype(np.int32),
        coords=np.vstack([g.coords[keep], np.repeat(g.coords[interior], ports_per, axis=0)]),
        provenance=_concat(g.provenance[keep], np.repeat(g.provenance[interior], ports_per)).astype(np.int64),
        port_index=_concat(g.port_index[keep], np.tile(np.arange(ports_per), k_int)).astype(np.int64),
        src=_concat(src, c_src).astype(np.int64),
        dst=_concat(dst, c_dst).astype(np.int64),
        edge_kind=_concat(g.edge_kind, np.full(len(c_src), EdgeKind.CLIQUE)).astype(np.int8),
        edge_origin=_concat(g.edge_origin, np.repeat(g.provenance[interior], delta1 * delta2)).astype(np.int64),
        edge_step=_concat(g.edge_step, np.full(len(c_src), -1)).astype(np.int64),
    )

    # rewrite canonical paths: after arriving at a replaced vertex, cross one clique edge
    old_walk = pairs.vertex_paths(g)
    length = pairs.paths.shape[1]
    cols = []
    for k in range(length):
        e = pairs.paths[:, k]
        cols.append(e)
        if k == length - 1:
            break
        at = old_walk[:, k + 1]
        hit = replaced[at]
        if not np.any(hit):
            continue
        if not np.all(hit):
            raise ConstructionError("canonical paths reach interior vertices at different steps")
        s_in = g.edge_step[e]
        s_out = g.edge_step[pairs.paths[:, k + 1]]
        jv = np.where(s_in < delta1, s_in, s_out)
        jw = np.where(s_in < delta1, s_out, s_in) - delta1
        if np.any(jv >= delta1) or np.any(jw < 0):
            raise ConstructionError("path does not alternate factors at a clique vertex")
        cols.append(clique_base + rank[at] * delta1 * delta2 + jv * delta2 + jw)
    new_paths = np.stack(cols, axis=1) if cols else pairs.paths
    new_pairs = PairSet(pairs.instance_kind, new_id[pairs.sources], new_id[pairs.targets],
                        np.full(len(pairs), new_paths.shape[1], dtype=np.int64), new_paths,
                        pairs.witness, pairs.vectors)
    if np.any(new_pairs.sources < 0) or np.any(new_pairs.targets < 0):
        raise ConstructionError("a critical pair endpoint was replaced")
    return out, new_pairs, params


def build_spanner_instance(d1: int, r1: int, d2: int, r2: int, D: int, t: int,
                           limits: Limits | None = None) -> tuple[LayeredGraph, PairSet, CliqueParams]:
    """Undirected product of two base graphs, subdivided ``t``-fold, interior vertices clique-replaced."""
    p1 = BaseGraphParams(d1, r1, D, directed=False)
    p2 = BaseGraphParams(d2, r2, D, directed=False)
    delta1 = len(corner_set(d1, r1 * r1))
    delta2 = len(corner_set(d2, r2 * r2))
    CliqueParams(delta1, delta2)
    g0, p0 = alternation_product(p1, p2, directed=False, limits=limits)
    ge, pe = subdivide(g0, p0, t, limits=limits)
    g, pairs, cp = clique_replace(ge, pe, delta1, delta2, limits=limits)
    pairs.instance_kind = "spanner"
    return g, pairs, cp


def spanner_counts(d1: int, r1: int, d2: int, r2: int, D: int, t: int) -> dict[str, int]:
    """Exact n, m, |P| of the spanner instance tallied by category from ball counts."""
    p1 = BaseGraphParams(d1, r1, D, directed=False)
    p2 = BaseGraphParams(d2, r2, D, directed=False)
    delta1 = len(corner_set(d1, r1 * r1))
    delta2 = len(corner_set(d2, r2 * r2))
    pc = product_counts(p1, p2)
    sizes = pc["layer_sizes"]
    interior = sum(sizes[1:-1])
    m0 = pc["m"]
    return {
        "lattice": sizes[0] + sizes[-1],
        "ports": interior * (delta1 + delta2),
        "subdivision": m0 * (t - 1),
        "n": sizes[0] + sizes[-1] + interior * (delta1 + delta2) + m0 * (t - 1),
        "m": m0 * t + interior * delta1 * delta2,
        "pairs": ball_count(d1, p1.R ** 2) * ball_count(d2, p2.R ** 2) * delta1 * delta2,
        "path_length": 2 * D * t + 2 * D - 1,
    }


# ---------------------------------------------------------------------------
# inner / outer graphs


@dataclass
class InnerGraph:
    graph: LayeredGraph
    pairs: PairSet
    ports: PairSet
    step_radius: int
    base_radius: int
    conditions: dict[str, bool]

    @property
    def q(self) -> int:
        return len(self.ports)


def _select_ports(pairs: PairSet, q: int) -> np.ndarray | None:
    """First ``q`` pairs in canonical order with pairwise distinct sources and sinks, or None."""
    chosen: list[int] = []
    used_s: set[int] = set()
    used_t: set[int] = set()
    for i, (s, t) in enumerate(zip(pairs.sources.tolist(), pairs.targets.tolist())):
        if s not in used_s and t not in used_t:
            chosen.append(i)
            used_s.add(s)
            used_t.add(t)
            if len(chosen) == q:
                return np.array(chosen, dtype=np.int64)
    return None


def inner_conditions(g: LayeredGraph, ports: PairSet, L: int, c: int) -> dict[str, bool]:
    """Mechanical check of the four inner-graph conditions for the port pairs."""
    from .oracles import audit_unique_paths, bfs

    q = len(ports)
    uniq = audit_unique_paths(g, ports)
    used = ports.paths.reshape(-1)
    edge_disjoint = len(np.unique(used)) == len(used)
    cross_ok = True
    targets = ports.targets.tolist()
    for i, s in enumerate(ports.sources.tolist()):
        dist = bfs(g, s)
        if any(j != i and 0 <= dist[t] < L * c for j, t in enumerate(targets)):
            cross_ok = False
            break
    return {
        "1_vertex_bound": g.n <= q * L,
        "2_pair_count": len(ports) >= q,
        "3_unique_length": uniq.passed and bool(np.all(ports.expected_length == L * c)),
        "4_disjoint_and_far": edge_disjoint and cross_ok,
    }


def build_inner_graph(c: int, L: int, q: int, max_radius: int = 64,
                      limits: Limits | None = None) -> InnerGraph:
    """Undirected 2D lattice graph with ``Lc + 1`` layers and ``q`` port pairs.

    Layer k is B_2(Lc*rho + k*rho) and edges step along the corners of B_2(rho).
    The step radius rho is the smallest integer for which ``q`` critical pairs with
    pairwise distinct sources and distinct sinks exist; those pairs become the ports.
    """
    if not isinstance(c, int) or c < 1:
        raise InvalidParameterError(f"c must be a positive integer, got {c!r}")
    if not isinstance(L, int) or L < 2:
        raise InvalidParameterError(f"L must be an integer >= 2, got {L!r}")
    if not isinstance(q, int) or q < 1:
        raise InvalidParameterError(f"q must be a positive integer, got {q!r}")
    layers = L * c
    for rho in range(1, max_radius + 1):
        if ball_count(2, (layers * rho) ** 2) < q:
            continue
        base = layers * rho
        vectors = corner_set(2, rho * rho).array
        g, pairs = build_layered(2, vectors, [(base + k * rho) ** 2 for k in range(layers + 1)],
                                 directed=False, kind="inner", limits=limits)
        idx = _select_ports(pairs, q)
        if idx is not None:
            ports = pairs.subset(idx)
            return InnerGraph(g, pairs, ports, rho, base, inner_conditions(g, ports, L, c))
    raise InfeasibleError(f"no step radius <= {max_radius} gives {q} distinct port pairs for c={c}, L={L}")


@dataclass
class OuterGraph:
    graph: LayeredGraph
    pairs: PairSet
    radius: int
    vectors: np.ndarray


def build_outer_graph(q: int, L: int, limits: Limits | None = None) -> OuterGraph:
    """Undirected 3D lattice graph with L+1 layers on B_3(Lr + kr), stepping by q corner vectors.

    r is the smallest radius with at least q corners; the first q corners in
    lexicographic order are used.
    """
    if not isinstance(q, int) or q < 1:
        raise InvalidParameterError(f"q must be a positive integer, got {q!r}")
    if not isinstance(L, int) or L < 1:
        raise InvalidParameterError(f"L must be a positive integer, got {L!r}")
    r = minimal_radius_with_corners(3, q)
    vectors = corner_set(3, r * r).array[:q]
    g, pairs = build_layered(3, vectors, [(L * r + k * r) ** 2 for k in range(L + 1)],
                             directed=False, kind="outer", limits=limits)
    return OuterGraph(g, pairs, r, vectors)


def substitute_inner(outer: OuterGraph, inner: InnerGraph, L: int,
                     limits: Limits | None = None) -> tuple[LayeredGraph, PairSet]:
    """Replace each interior outer vertex by a private copy of the inner graph, then subdivide.

    An outer edge arriving along vector i lands on input port i (source of port
    pair i); the edge leaving along vector i starts at output port i (its sink).
    Inherited outer edges are then subdivided into L/2 edges.
    """
    if L % 2:
        raise InvalidParameterError(f"L must be even so that L/2 is integral, got {L}")
    og, op = outer.graph, outer.pairs
    q = len(outer.vectors)
    if inner.q != q:
        raise InvalidParameterError(f"inner graph has {inner.q} ports but the outer graph uses {q} vectors")
    if og.num_layers != L + 1:
        raise InvalidParameterError(f"outer graph has {og.num_layers - 1} layers of edges, expected L={L}")
    ig = inner.graph
    top = og.num_layers - 1
    interior = np.flatnonzero((og.vertex_layer > 0) & (og.vertex_layer < top))
    k_int = len(interior)
    limits = limits or current_limits()
    limits.check("max_vertices", og.n - k_int + k_int * ig.n + og.m * (L // 2 - 1))
    limits.check("max_edges", og.m * (L // 2) + k_int * ig.m)

    replaced = np.zeros(og.n, dtype=bool)
    replaced[interior] = True
    keep = np.flatnonzero(~replaced)
    new_id = np.full(og.n, -1, dtype=np.int64)
    new_id[keep] = np.arange(len(keep))
    rank = np.full(og.n, -1, dtype=np.int64)
    rank[interior] = np.arange(k_int)
    copy_base = len(keep)
    in_port = inner.ports.sources
    out_port = inner.ports.targets

    step = og.edge_step
    src = np.where(replaced[og.src], copy_base + rank[og.src] * ig.n + out_port[step], new_id[og.src])
    dst = np.where(replaced[og.dst], copy_base + rank[og.dst] * ig.n + in_port[step], new_id[og.dst])
    offs = copy_base + np.arange(k_int)[:, None] * ig.n
    i_src = (offs + ig.src[None, :]).reshape(-1)
    i_dst = (offs + ig.dst[None, :]).reshape(-1)
    inner_base = og.m

    n_copy = k_int * ig.n
    g_star = LayeredGraph(
        directed=False, num_layers=og.num_layers, coord_blocks=og.coord_blocks,
        vertex_kind=_concat(og.vertex_kind[keep], np.full(n_copy, VertexKind.INNER)).astype(np.int8),
        vertex_layer=_concat(og.vertex_layer[keep], np.repeat(og.vertex_layer[interior], ig.n)).astype(np.int32),
        coords=np.vstack([og.coords[keep], np.repeat(og.coords[interior], ig.n, axis=0)]),
        provenance=_concat(og.provenance[keep], np.repeat(og.provenance[interior], ig.n)).astype(np.int64),
        port_index=_concat(og.port_index[keep], np.tile(np.arange(ig.n), k_int)).astype(np.int64),
        src=_concat(src, i_src).astype(np.int64),
        dst=_concat(dst, i_dst).astype(np.int64),
        edge_kind=_concat(og.edge_kind, np.full(k_int * ig.m, EdgeKind.INNER)).astype(np.int8),
        edge_origin=_concat(og.edge_origin, np.repeat(og.provenance[interior], ig.m)).astype(np.int64),
        edge_step=_concat(og.edge_step, np.tile(np.arange(ig.m), k_int)).astype(np.int64),
    )

    walk = op.vertex_paths(og)
    j = op.witness[:, 0]
    cols = []
    for k in range(L):
        cols.append(op.paths[:, [k]])
        if k < L - 1:
            at = walk[:, k + 1]
            cols.append(inner_base + rank[at][:, None] * ig.m + inner.ports.paths[j])
    paths = np.hstack(cols)
    star_pairs = PairSet("improved-spanner", new_id[op.sources], new_id[op.targets],
                         np.full(len(op), paths.shape[1], dtype=np.int64), paths, op.witness, op.vectors)
    g, pairs = subdivide(g_star, star_pairs, L // 2, only_kind=EdgeKind.INHERITED, limits=limits)
    return g, pairs


def composite_path_length(L: int, c: int) -> Fraction:
    return Fraction(L * L, 2) + (L - 1) * L * c


def measured_lambda(n: int, L: int, pairs: int) -> int:
    """Smallest integer multiplier k with k * L (L-1)/2 * |P| >= |V|."""
    denom = Fraction(L * (L - 1), 2) * pairs
    return math.ceil(Fraction(n) / denom)


@dataclass
class ImprovedSpannerInstance:
    graph: LayeredGraph
    pairs: PairSet
    inner: InnerGraph
    outer: OuterGraph
    params: InnerOuterParams
    lam: int


def build_improved_spanner(c: int, L: int, q: int, limits: Limits | None = None) -> ImprovedSpannerInstance:
    """Inner graph (c, L), outer graph (q, L), substitution and L/2 subdivision."""
    inner = build_inner_graph(c, L, q, limits=limits)
    outer = build_outer_graph(inner.q, L, limits=limits)
    g, pairs = substitute_inner(outer, inner, L, limits=limits)
    params = InnerOuterParams(c, L, inner.q, inner.step_radius, outer.radius)
    return ImprovedSpannerInstance(g, pairs, inner, outer, params, measured_lambda(g.n, L, len(pairs)))
