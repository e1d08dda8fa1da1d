from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import adjacency, brute_ball, full_path_counts, layer_sizes
from lbgraphs.errors import ConstructionError, InvalidParameterError, Limits, ResourceLimitError
from lbgraphs.graphs import (
    BaseGraphParams,
    EdgeKind,
    VertexKind,
    alternation_product,
    base_counts,
    build_base,
    product_counts,
    product_layer_radii,
    transitive_closure_diameter,
    walk_vertices,
)
from lbgraphs.lattice import corner_set


def test_base_212_exact_counts(base212):
    g, pairs = base212.graph, base212.pairs
    # layers are balls of radius 4, 5, 6 around the origin
    assert layer_sizes(g) == [len(brute_ball(2, 16)), len(brute_ball(2, 25)), len(brute_ball(2, 36))]
    assert (g.n, g.m, len(pairs)) == (243, 520, 196)
    assert base_counts(BaseGraphParams(2, 1, 2)) == {"n": 243, "m": 520, "pairs": 196}


def test_base_212_structure(base212):
    g = base212.graph
    g.validate()
    assert g.directed and g.is_layer_monotone()
    assert np.all(g.vertex_layer[g.dst] == g.vertex_layer[g.src] + 1)
    assert np.all(g.vertex_kind == VertexKind.LATTICE)
    assert np.all(g.edge_kind == EdgeKind.INHERITED)
    # every edge steps by a corner vector
    vecs = {tuple(v) for v in corner_set(2, 1)}
    assert {tuple(x) for x in (g.coords[g.dst] - g.coords[g.src]).tolist()} == vecs


def test_base_212_pair_targets_are_multiples(base212):
    g, pairs = base212.graph, base212.pairs
    vec = pairs.vectors[0][pairs.witness[:, 0]]
    assert np.array_equal(g.coords[pairs.targets] - g.coords[pairs.sources], 2 * vec)
    assert np.all(g.vertex_layer[pairs.sources] == 0)
    assert np.all(g.vertex_layer[pairs.targets] == 2)


def test_critical_pairs_have_one_shortest_path(base212):
    g, pairs = base212.graph, base212.pairs
    adj = adjacency(g)
    for s in np.unique(pairs.sources).tolist():
        dist, count = full_path_counts(adj, s)
        for t in pairs.targets[pairs.sources == s].tolist():
            assert dist[t] == 2 and count[t] == 1


def test_label_and_pair_access(base212):
    g, pairs = base212.graph, base212.pairs
    lab = g.label(0)
    assert lab.kind == VertexKind.LATTICE and lab.layer == 0 and lab.provenance == 0
    cp = pairs[0]
    assert cp.source == pairs.sources[0] and len(cp.witness_vectors) == 1
    sub = pairs.subset([3, 1])
    assert list(sub.sources) == [pairs.sources[3], pairs.sources[1]]


def test_walk_vertices_rejects_broken_paths(base212):
    g, pairs = base212.graph, base212.pairs
    bad = pairs.paths[:1].copy()
    bad[0, 1] = pairs.paths[1, 0]
    with pytest.raises(ConstructionError):
        walk_vertices(g, pairs.sources[:1], bad)


def test_base_rejects_bad_params():
    for args in [(0, 1, 1), (2, 0, 1), (2, 1, 0), (4, 1, 1)]:
        with pytest.raises(InvalidParameterError):
            BaseGraphParams(*args)


def test_resource_budget_blocks_large_base():
    with pytest.raises(ResourceLimitError):
        build_base(BaseGraphParams(3, 2, 3), Limits(max_vertices=1000))


@pytest.mark.parametrize("d, r, D", [(2, 1, 1), (2, 2, 1), (2, 1, 3), (3, 1, 1), (3, 1, 2)])
def test_base_counts_match_construction(d, r, D):
    p = BaseGraphParams(d, r, D)
    g, pairs = build_base(p)
    R = d * r * D
    assert g.n == sum(len(brute_ball(d, (R + k * r) ** 2)) for k in range(D + 1))
    assert len(pairs) == len(brute_ball(d, R * R)) * len(corner_set(d, r * r))
    assert base_counts(p) == {"n": g.n, "m": g.m, "pairs": len(pairs)}


def test_product_d1_counts(product1):
    g, pairs = product1.graph, product1.pairs
    # layer i: first block radius R1 + ceil(i/2) r1, second block R2 + floor(i/2) r2
    assert layer_sizes(g) == [13 * 13, 29 * 13, 29 * 29]
    assert (g.n, g.m, len(pairs)) == (1387, 2184, 2704)
    p = BaseGraphParams(2, 1, 1)
    pc = product_counts(p, p)
    assert (pc["n"], pc["m"], pc["pairs"]) == (1387, 2184, 2704)
    assert product_layer_radii(p, p, 1) == (3, 2)


def test_product_steps_alternate(product1):
    g = product1.graph
    delta = g.coords[g.dst] - g.coords[g.src]
    even = g.vertex_layer[g.src] % 2 == 0
    assert np.all(delta[even, 2:] == 0) and np.all(np.abs(delta[even, :2]).sum(axis=1) > 0)
    assert np.all(delta[~even, :2] == 0)
    assert np.all(g.edge_step[even] < 4) and np.all(g.edge_step[~even] >= 4)


def test_product_requires_equal_depth():
    with pytest.raises(InvalidParameterError):
        alternation_product(BaseGraphParams(2, 1, 1), BaseGraphParams(2, 1, 2))


def test_diameters(base212, product1):
    assert transitive_closure_diameter(base212.graph) == 2
    assert transitive_closure_diameter(product1.graph) == 2


@settings(max_examples=10, deadline=None)
@given(st.integers(1, 2), st.integers(1, 2), st.integers(1, 2))
def test_product_counts_property(r1, r2, D):
    p1, p2 = BaseGraphParams(2, r1, D), BaseGraphParams(2, r2, D)
    pc = product_counts(p1, p2)
    g, pairs = alternation_product(p1, p2)
    assert (g.n, g.m, len(pairs)) == (pc["n"], pc["m"], pc["pairs"])
    assert layer_sizes(g) == pc["layer_sizes"]
