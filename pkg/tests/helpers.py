"""Independent reference implementations used to cross-check the package."""

from __future__ import annotations

import itertools
from collections import deque
from fractions import Fraction

import numpy as np


def brute_ball(d: int, radius_sq: int) -> list[tuple[int, ...]]:
    m = 0
    while (m + 1) ** 2 <= radius_sq:
        m += 1
    rng = range(-m, m + 1)
    return sorted(p for p in itertools.product(rng, repeat=d) if sum(c * c for c in p) <= radius_sq)


def _in_triangle(p, a, b, c) -> bool:
    def cross(o, u, v):
        return (u[0] - o[0]) * (v[1] - o[1]) - (u[1] - o[1]) * (v[0] - o[0])

    xs, ys = (a[0], b[0], c[0]), (a[1], b[1], c[1])
    if not (min(xs) <= p[0] <= max(xs) and min(ys) <= p[1] <= max(ys)):
        return False  # also rules out points on the line of a degenerate triple but off its segment
    d1, d2, d3 = cross(a, b, p), cross(b, c, p), cross(c, a, p)
    neg = d1 < 0 or d2 < 0 or d3 < 0
    pos = d1 > 0 or d2 > 0 or d3 > 0
    return not (neg and pos)


def planar_extreme_points(points: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """O(n^4) planar test: p is not extreme iff it lies in a (possibly degenerate) triangle of other points."""
    out = []
    for p in points:
        others = [q for q in points if q != p]
        if not any(_in_triangle(p, a, b, c) for a, b, c in itertools.combinations(others, 3)):
            out.append(p)
    return sorted(out)


def adjacency(g) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {v: [] for v in range(g.n)}
    for a, b in zip(g.src.tolist(), g.dst.tolist()):
        adj[a].append(b)
        if not g.directed:
            adj[b].append(a)
    return adj


def full_path_counts(adj: dict[int, list[int]], source: int) -> tuple[dict[int, int], dict[int, int]]:
    """BFS distances and exact (unsaturated) shortest-path counts."""
    dist = {source: 0}
    count = {source: 1}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                count[w] = count[u]
                queue.append(w)
            elif dist[w] == dist[u] + 1:
                count[w] += count[u]
    return dist, count


def rational_convex_combination(p, points) -> bool:
    """Exhaustive check whether ``p`` is a convex combination of some d+1 of ``points`` (tiny inputs only)."""
    d = len(p)
    for combo in itertools.combinations(points, d + 1):
        rows = [[Fraction(v[i]) for v in combo] for i in range(d)] + [[Fraction(1)] * (d + 1)]
        rhs = [Fraction(c) for c in p] + [Fraction(1)]
        sol = _solve(rows, rhs)
        if sol is not None and all(x >= 0 for x in sol):
            return True
    return False


def _solve(a, b):
    n = len(a)
    m = [row[:] + [b[i]] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col] / m[col][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[i][n] / m[i][i] for i in range(n)]


def layer_sizes(g) -> list[int]:
    return np.bincount(g.vertex_layer, minlength=g.num_layers).tolist()


def tiny_graph(edges: list[tuple[int, int]], layers: list[int], directed: bool = True):
    """Hand-built LayeredGraph with lattice-kind vertices and inherited edges."""
    from lbgraphs.graphs import LayeredGraph

    n = len(layers)
    src = np.array([a for a, _ in edges], dtype=np.int64)
    dst = np.array([b for _, b in edges], dtype=np.int64)
    return LayeredGraph(
        directed=directed, num_layers=max(layers) + 1, coord_blocks=(1,),
        vertex_kind=np.zeros(n, dtype=np.int8), vertex_layer=np.array(layers, dtype=np.int32),
        coords=np.arange(n, dtype=np.int64).reshape(n, 1), provenance=np.arange(n, dtype=np.int64),
        port_index=np.full(n, -1, dtype=np.int64),
        src=src, dst=dst, edge_kind=np.zeros(len(edges), dtype=np.int8),
        edge_origin=np.arange(len(edges), dtype=np.int64), edge_step=np.zeros(len(edges), dtype=np.int64),
    )
