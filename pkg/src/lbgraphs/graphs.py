"""Layered lattice graphs: the base construction and the alternation product."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import ConstructionError, InvalidParameterError, Limits, current_limits
from .lattice import LatticePoint, ball_array, ball_count, corner_set


class VertexKind(IntEnum):
    LATTICE = 0
    SUBDIVISION = 1
    CLIQUE_PORT = 2
    INNER = 3


class EdgeKind(IntEnum):
    INHERITED = 0
    CLIQUE = 1
    INNER = 2


@dataclass(frozen=True)
class VertexLabel:
    kind: VertexKind
    layer: int
    coords: tuple[LatticePoint, ...]
    provenance: int | None
    port_index: int | None


@dataclass(eq=False)
class LayeredGraph:
    """Columnar vertex table plus an edge list with stable integer ids.

    Edges are stored in construction orientation (lower layer first). For
    undirected graphs the orientation carries no meaning for distances.
    ``provenance`` and ``edge_origin`` point into the root (pre-transform) graph.
    """

    directed: bool
    num_layers: int
    coord_blocks: tuple[int, ...]
    vertex_kind: np.ndarray
    vertex_layer: np.ndarray
    coords: np.ndarray
    provenance: np.ndarray
    port_index: np.ndarray
    src: np.ndarray
    dst: np.ndarray
    edge_kind: np.ndarray
    edge_origin: np.ndarray
    edge_step: np.ndarray

    @property
    def n(self) -> int:
        return len(self.vertex_kind)

    @property
    def m(self) -> int:
        return len(self.src)

    def label(self, v: int) -> VertexLabel:
        row = self.coords[v].tolist()
        blocks = []
        start = 0
        for w in self.coord_blocks:
            blocks.append(tuple(row[start:start + w]))
            start += w
        prov = int(self.provenance[v])
        port = int(self.port_index[v])
        return VertexLabel(VertexKind(int(self.vertex_kind[v])), int(self.vertex_layer[v]),
                           tuple(blocks), prov if prov >= 0 else None, port if port >= 0 else None)

    @cached_property
    def adjacency(self) -> tuple[list[int], list[int], list[int]]:
        """CSR ``(indptr, neighbours, edge_ids)`` as Python lists for fast BFS.

        Directed graphs list out-neighbours; undirected graphs list both directions.
        """
        if self.directed:
            u, v, e = self.src, self.dst, np.arange(self.m)
        else:
            u = np.concatenate([self.src, self.dst])
            v = np.concatenate([self.dst, self.src])
            e = np.concatenate([np.arange(self.m), np.arange(self.m)])
        order = np.lexsort((v, u))
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.add.at(indptr, u + 1, 1)
        indptr = np.cumsum(indptr)
        return indptr.tolist(), v[order].tolist(), e[order].tolist()

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        """Map ``(u, v)`` to edge id; both orientations when undirected."""
        out = {(int(a), int(b)): i for i, (a, b) in enumerate(zip(self.src.tolist(), self.dst.tolist()))}
        if not self.directed:
            out.update({(b, a): i for (a, b), i in list(out.items())})
        return out

    def is_layer_monotone(self) -> bool:
        return bool(np.all(self.vertex_layer[self.src] < self.vertex_layer[self.dst]))

    def counts_by_kind(self) -> dict[str, int]:
        out = {f"vertices_{k.name.lower()}": int(np.sum(self.vertex_kind == k)) for k in VertexKind}
        out.update({f"edges_{k.name.lower()}": int(np.sum(self.edge_kind == k)) for k in EdgeKind})
        return out

    def validate(self) -> None:
        """Structural checks: ids in range, no self-loops, no duplicate edges."""
        if self.m and (self.src.min() < 0 or self.dst.min() < 0 or max(self.src.max(), self.dst.max()) >= self.n):
            raise ConstructionError("edge endpoint out of range")
        if np.any(self.src == self.dst):
            raise ConstructionError("self-loop present")
        a, b = self.src, self.dst
        if not self.directed:
            a, b = np.minimum(self.src, self.dst), np.maximum(self.src, self.dst)
        keys = a.astype(np.int64) * self.n + b
        if len(np.unique(keys)) != self.m:
            raise ConstructionError("duplicate edge present")


@dataclass(frozen=True)
class CriticalPair:
    source: int
    target: int
    witness_vectors: tuple[LatticePoint, ...]
    canonical_path: tuple[int, ...]
    expected_length: int


@dataclass(eq=False)
class PairSet:
    """Critical pairs with their canonical witness paths (edge-id sequences)."""

    instance_kind: str
    sources: np.ndarray
    targets: np.ndarray
    expected_length: np.ndarray
    paths: np.ndarray
    witness: np.ndarray
    vectors: tuple[np.ndarray, ...]

    def __len__(self) -> int:
        return len(self.sources)

    def __getitem__(self, i: int) -> CriticalPair:
        wit = tuple(tuple(int(c) for c in self.vectors[k][int(j)]) for k, j in enumerate(self.witness[i]))
        return CriticalPair(int(self.sources[i]), int(self.targets[i]), wit,
                            tuple(int(e) for e in self.paths[i]), int(self.expected_length[i]))

    def subset(self, indices: Sequence[int] | np.ndarray) -> PairSet:
        idx = np.asarray(indices, dtype=np.int64)
        return PairSet(self.instance_kind, self.sources[idx], self.targets[idx], self.expected_length[idx],
                       self.paths[idx], self.witness[idx], self.vectors)

    def vertex_paths(self, g: LayeredGraph) -> np.ndarray:
        """Vertex sequences ``(|P|, L+1)`` of the canonical paths, walked from each source."""
        return walk_vertices(g, self.sources, self.paths)


def walk_vertices(g: LayeredGraph, sources: np.ndarray, paths: np.ndarray) -> np.ndarray:
    """Vertices visited when walking each edge-id path from its source.

    Raises ConstructionError if a path is not a contiguous walk.
    """
    k, length = paths.shape if paths.ndim == 2 else (len(paths), 0)
    out = np.empty((k, length + 1), dtype=np.int64)
    cur = np.asarray(sources, dtype=np.int64).copy()
    out[:, 0] = cur
    for step in range(length):
        e = paths[:, step]
        a, b = g.src[e], g.dst[e]
        fwd = a == cur
        back = (b == cur) & ~fwd
        if g.directed:
            back[:] = False
        if not np.all(fwd | back):
            bad = int(np.flatnonzero(~(fwd | back))[0])
            raise ConstructionError(f"path {bad} breaks at step {step}")
        cur = np.where(fwd, b, a)
        out[:, step + 1] = cur
    return out


@dataclass(frozen=True)
class BaseGraphParams:
    d: int
    r: int
    D: int
    directed: bool = True

    def __post_init__(self) -> None:
        for name in ("d", "r", "D"):
            val = getattr(self, name)
            if not isinstance(val, (int, np.integer)) or val < 1:
                raise InvalidParameterError(f"{name} must be a positive integer, got {val!r}")
        if self.d > 3:
            raise InvalidParameterError(f"graph constructions support d in {{1, 2, 3}}, got {self.d}")

    @property
    def R(self) -> int:
        return self.d * self.r * self.D

    def layer_radius(self, k: int) -> int:
        return self.R + k * self.r


def _encode(points: np.ndarray, offset: int) -> np.ndarray:
    base = 2 * offset + 1
    keys = np.zeros(len(points), dtype=np.int64)
    for i in range(points.shape[1]):
        keys = keys * base + (points[:, i] + offset)
    return keys


def _lookup(keys: np.ndarray, points: np.ndarray, offset: int) -> np.ndarray:
    """Local indices of ``points`` inside a layer whose sorted keys are ``keys``; -1 if absent."""
    q = _encode(points, offset)
    pos = np.searchsorted(keys, q)
    pos_c = np.minimum(pos, len(keys) - 1)
    return np.where((pos < len(keys)) & (keys[pos_c] == q), pos_c, -1)


def _vertex_table(layer_sizes: list[int], coords: np.ndarray, blocks: tuple[int, ...]) -> dict:
    n = sum(layer_sizes)
    return dict(
        coord_blocks=blocks,
        vertex_kind=np.full(n, VertexKind.LATTICE, dtype=np.int8),
        vertex_layer=np.repeat(np.arange(len(layer_sizes), dtype=np.int32), layer_sizes),
        coords=coords,
        provenance=np.arange(n, dtype=np.int64),
        port_index=np.full(n, -1, dtype=np.int64),
    )


def build_layered(d: int, vectors: np.ndarray, radii_sq: Sequence[int], directed: bool,
                  kind: str, limits: Limits | None = None) -> tuple[LayeredGraph, PairSet]:
    """Layer k holds B_d(sqrt(radii_sq[k])); every vertex below the top steps by every vector.

    Critical pairs run from each layer-0 point ``a`` to ``a + L*v`` for each vector ``v``.
    """
    limits = limits or current_limits()
    L = len(radii_sq) - 1
    s = len(vectors)
    sizes = [ball_count(d, rs) for rs in radii_sq]
    limits.check("max_vertices", sum(sizes))
    limits.check("max_edges", sum(sizes[:-1]) * s)
    offset = max(math.isqrt(rs) for rs in radii_sq) + 1
    layers = [ball_array(d, rs, limits) for rs in radii_sq]
    keys = [_encode(p, offset) for p in layers]
    vert_off = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
    edge_off = np.concatenate([[0], np.cumsum([sz * s for sz in sizes[:-1]])]).astype(np.int64)

    src_parts, dst_parts = [], []
    for k in range(L):
        pts = layers[k]
        moved = (pts[:, None, :] + vectors[None, :, :]).reshape(-1, d)
        loc = _lookup(keys[k + 1], moved, offset)
        if np.any(loc < 0):
            raise ConstructionError(f"step out of layer {k + 1} ball")
        src_parts.append(np.repeat(np.arange(sizes[k], dtype=np.int64) + vert_off[k], s))
        dst_parts.append(loc + vert_off[k + 1])
    m = int(edge_off[-1])
    src = np.concatenate(src_parts) if src_parts else np.zeros(0, dtype=np.int64)
    dst = np.concatenate(dst_parts) if dst_parts else np.zeros(0, dtype=np.int64)
    g = LayeredGraph(
        directed=directed, num_layers=L + 1,
        src=src, dst=dst,
        edge_kind=np.full(m, EdgeKind.INHERITED, dtype=np.int8),
        edge_origin=np.arange(m, dtype=np.int64),
        edge_step=np.tile(np.arange(s, dtype=np.int64), m // s if s else 0),
        **_vertex_table(sizes, np.concatenate(layers), (d,)),
    )

    a = layers[0]
    n0 = len(a)
    pair_a = np.repeat(np.arange(n0), s)
    pair_v = np.tile(np.arange(s), n0)
    paths = np.empty((n0 * s, L), dtype=np.int64)
    for k in range(L):
        at = a[pair_a] + k * vectors[pair_v]
        loc = _lookup(keys[k], at, offset)
        paths[:, k] = edge_off[k] + loc * s + pair_v
    end = _lookup(keys[L], a[pair_a] + L * vectors[pair_v], offset)
    pairs = PairSet(
        instance_kind=kind,
        sources=pair_a + vert_off[0],
        targets=end + vert_off[L],
        expected_length=np.full(n0 * s, L, dtype=np.int64),
        paths=paths,
        witness=pair_v.reshape(-1, 1),
        vectors=(vectors,),
    )
    return g, pairs


def build_base(params: BaseGraphParams, limits: Limits | None = None) -> tuple[LayeredGraph, PairSet]:
    """The D+1 layer graph on balls of radius R + k r with steps along the corners of B_d(r)."""
    vectors = corner_set(params.d, params.r ** 2).array
    radii_sq = [params.layer_radius(k) ** 2 for k in range(params.D + 1)]
    return build_layered(params.d, vectors, radii_sq, params.directed, "base", limits)


def base_counts(params: BaseGraphParams) -> dict[str, int]:
    """Exact n, m, |P| of the base graph from ball counts alone (no construction)."""
    s = len(corner_set(params.d, params.r ** 2))
    sizes = [ball_count(params.d, params.layer_radius(k) ** 2) for k in range(params.D + 1)]
    return {"n": sum(sizes), "m": sum(sizes[:-1]) * s, "pairs": sizes[0] * s}


def product_layer_radii(p1: BaseGraphParams, p2: BaseGraphParams, i: int) -> tuple[int, int]:
    return p1.R + -(-i // 2) * p1.r, p2.R + (i // 2) * p2.r


def alternation_product(p1: BaseGraphParams, p2: BaseGraphParams, directed: bool = True,
                        limits: Limits | None = None) -> tuple[LayeredGraph, PairSet]:
    """Product graph on 2D+1 layers alternating steps in the first and second factor.

    Even layers step the first block by corners of B_{d1}(r1); odd layers step the
    second block by corners of B_{d2}(r2). Edge steps are numbered 0..delta1-1 for the
    first factor and delta1..delta1+delta2-1 for the second.
    """
    if p1.D != p2.D:
        raise InvalidParameterError(f"factor graphs need the same D, got {p1.D} and {p2.D}")
    limits = limits or current_limits()
    D = p1.D
    d1, d2 = p1.d, p2.d
    v1 = corner_set(d1, p1.r ** 2).array
    v2 = corner_set(d2, p2.r ** 2).array
    s1, s2 = len(v1), len(v2)
    radii = [product_layer_radii(p1, p2, i) for i in range(2 * D + 1)]
    xs_n = [ball_count(d1, a * a) for a, _ in radii]
    ys_n = [ball_count(d2, b * b) for _, b in radii]
    sizes = [a * b for a, b in zip(xs_n, ys_n)]
    limits.check("max_vertices", sum(sizes))
    limits.check("max_edges", sum(sizes[i] * (s1 if i % 2 == 0 else s2) for i in range(2 * D)))
    off1 = p1.R + D * p1.r + 1
    off2 = p2.R + D * p2.r + 1
    xs = [ball_array(d1, a * a, limits) for a, _ in radii]
    ys = [ball_array(d2, b * b, limits) for _, b in radii]
    xkeys = [_encode(x, off1) for x in xs]
    ykeys = [_encode(y, off2) for y in ys]
    vert_off = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
    degs = [s1 if i % 2 == 0 else s2 for i in range(2 * D)]
    edge_off = np.concatenate([[0], np.cumsum([sizes[i] * degs[i] for i in range(2 * D)])]).astype(np.int64)

    coords = np.concatenate([
        np.hstack([np.repeat(xs[i], len(ys[i]), axis=0), np.tile(ys[i], (len(xs[i]), 1))])
        for i in range(2 * D + 1)
    ])
    src_parts, dst_parts, step_parts = [], [], []
    for i in range(2 * D):
        nx, ny = len(xs[i]), len(ys[i])
        ix = np.repeat(np.arange(nx), ny)
        iy = np.tile(np.arange(ny), nx)
        if i % 2 == 0:
            moved = (xs[i][:, None, :] + v1[None, :, :]).reshape(-1, d1)
            lx = _lookup(xkeys[i + 1], moved, off1).reshape(nx, s1)
            ly = _lookup(ykeys[i + 1], ys[i], off2)
            nxt_x = lx[ix]                     # (sizes, s1)
            nxt_y = np.repeat(ly[iy][:, None], s1, axis=1)
            steps = np.tile(np.arange(s1), nx * ny)
        else:
            moved = (ys[i][:, None, :] + v2[None, :, :]).reshape(-1, d2)
            ly = _lookup(ykeys[i + 1], moved, off2).reshape(ny, s2)
            lx = _lookup(xkeys[i + 1], xs[i], off1)
            nxt_y = ly[iy]
            nxt_x = np.repeat(lx[ix][:, None], s2, axis=1)
            steps = np.tile(np.arange(s2), nx * ny) + s1
        if np.any(nxt_x < 0) or np.any(nxt_y < 0):
            raise ConstructionError(f"product step out of layer {i + 1}")
        dst_local = (nxt_x * len(ys[i + 1]) + nxt_y).reshape(-1)
        src_parts.append(np.repeat(np.arange(sizes[i], dtype=np.int64) + vert_off[i], degs[i]))
        dst_parts.append(dst_local + vert_off[i + 1])
        step_parts.append(steps)
    m = int(edge_off[-1])
    g = LayeredGraph(
        directed=directed, num_layers=2 * D + 1,
        src=np.concatenate(src_parts), dst=np.concatenate(dst_parts),
        edge_kind=np.full(m, EdgeKind.INHERITED, dtype=np.int8),
        edge_origin=np.arange(m, dtype=np.int64),
        edge_step=np.concatenate(step_parts).astype(np.int64),
        **_vertex_table(sizes, coords, (d1, d2)),
    )

    a_n, b_n = len(xs[0]), len(ys[0])
    # pair order: source id, then v index, then w index
    src_local = np.repeat(np.arange(a_n * b_n), s1 * s2)
    ia, ib = src_local // b_n, src_local % b_n
    jv = np.tile(np.repeat(np.arange(s1), s2), a_n * b_n)
    jw = np.tile(np.arange(s2), a_n * b_n * s1)
    a, b = xs[0][ia], ys[0][ib]
    paths = np.empty((len(src_local), 2 * D), dtype=np.int64)
    for k in range(2 * D):
        x = a + (-(-k // 2)) * v1[jv]
        y = b + (k // 2) * v2[jw]
        lx = _lookup(xkeys[k], x, off1)
        ly = _lookup(ykeys[k], y, off2)
        local = lx * len(ys[k]) + ly
        j = jv if k % 2 == 0 else jw
        paths[:, k] = edge_off[k] + local * degs[k] + j
    tx = _lookup(xkeys[2 * D], a + D * v1[jv], off1)
    ty = _lookup(ykeys[2 * D], b + D * v2[jw], off2)
    pairs = PairSet(
        instance_kind="product",
        sources=src_local + vert_off[0],
        targets=tx * len(ys[2 * D]) + ty + vert_off[2 * D],
        expected_length=np.full(len(src_local), 2 * D, dtype=np.int64),
        paths=paths,
        witness=np.stack([jv, jw], axis=1),
        vectors=(v1, v2),
    )
    return g, pairs


def product_counts(p1: BaseGraphParams, p2: BaseGraphParams) -> dict[str, int]:
    """Exact n, m, |P| of the product graph from ball counts alone."""
    D = p1.D
    s1 = len(corner_set(p1.d, p1.r ** 2))
    s2 = len(corner_set(p2.d, p2.r ** 2))
    sizes = []
    for i in range(2 * D + 1):
        a, b = product_layer_radii(p1, p2, i)
        sizes.append(ball_count(p1.d, a * a) * ball_count(p2.d, b * b))
    m = sum(sizes[i] * (s1 if i % 2 == 0 else s2) for i in range(2 * D))
    return {"n": sum(sizes), "m": m, "pairs": sizes[0] * s1 * s2, "layer_sizes": sizes}


def transitive_closure_diameter(g: LayeredGraph) -> int:
    """Largest finite distance over ordered pairs (reachable pairs when directed)."""
    from .oracles import diameter

    return diameter(g)
