from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import brute_ball
from lbgraphs.errors import ConstructionError, InfeasibleError, InvalidParameterError
from lbgraphs.graphs import BaseGraphParams, EdgeKind, VertexKind, alternation_product, build_base
from lbgraphs.oracles import (
    audit_canonical_walks,
    audit_pair_disjointness,
    audit_unique_paths,
    pair_path_counts,
)
from lbgraphs.transforms import (
    build_improved_spanner,
    build_inner_graph,
    build_outer_graph,
    build_spanner_instance,
    clique_replace,
    composite_path_length,
    measured_lambda,
    spanner_counts,
    subdivide,
    substitute_inner,
)


@pytest.fixture(scope="module")
def undirected_product():
    p = BaseGraphParams(2, 1, 1, directed=False)
    return alternation_product(p, p, directed=False)


def test_subdivide_identity(undirected_product):
    g, pairs = undirected_product
    assert subdivide(g, pairs, 1) == (g, pairs)
    with pytest.raises(InvalidParameterError):
        subdivide(g, pairs, 0)


@settings(max_examples=6, deadline=None)
@given(st.integers(2, 4))
def test_subdivide_scales_lengths(undirected_product, t):
    g, pairs = undirected_product
    sg, sp = subdivide(g, pairs, t)
    assert sg.n == g.n + g.m * (t - 1)
    assert sg.m == g.m * t
    assert np.all(sp.expected_length == 2 * t)
    assert audit_canonical_walks(sg, sp).passed
    assert np.array_equal(sp.vertex_paths(sg)[:, -1], pairs.targets)
    dist, cnt = pair_path_counts(sg, sp.subset(np.arange(0, len(sp), 53)))
    assert np.all(dist == 2 * t) and np.all(cnt == 1)
    new = sg.vertex_kind == VertexKind.SUBDIVISION
    assert new.sum() == g.m * (t - 1)
    assert np.all(sg.provenance[new] < g.m)


def test_subdivision_runs_are_consecutive(undirected_product):
    g, pairs = undirected_product
    sg, sp = subdivide(g, pairs, 3)
    for row in sp.paths[:20]:
        chunks = row.reshape(-1, 3)
        assert np.all(np.diff(chunks, axis=1) == 1)


def test_clique_replace_counts(undirected_product):
    g, pairs = undirected_product
    cg, cp, params = clique_replace(g, pairs, 4, 4)
    interior = int(np.sum(g.vertex_layer == 1))
    assert cg.n == g.n - interior + interior * 8
    assert cg.m == g.m + interior * 16
    assert int(np.sum(cg.edge_kind == EdgeKind.CLIQUE)) == interior * 16
    assert np.all(cp.expected_length == 3)
    assert audit_canonical_walks(cg, cp).passed
    assert audit_pair_disjointness(cg, cp, "clique_edge_unique").passed


def test_clique_replace_requires_ordered_degrees(undirected_product):
    g, pairs = undirected_product
    with pytest.raises(InvalidParameterError):
        clique_replace(g, pairs, 2, 4)


def test_ports_carry_one_external_edge(spanner_micro):
    g = spanner_micro.graph
    ports = g.vertex_kind == VertexKind.CLIQUE_PORT
    ext = g.edge_kind != EdgeKind.CLIQUE
    deg = np.bincount(np.concatenate([g.src[ext], g.dst[ext]]), minlength=g.n)
    assert deg[ports].max() == 1


@pytest.mark.parametrize("args", [(2, 1, 2, 1, 1, 1), (2, 1, 2, 1, 1, 2), (2, 2, 2, 1, 1, 3)])
def test_spanner_instance_counts_and_audits(args):
    g, pairs, cp = build_spanner_instance(*args)
    cnt = spanner_counts(*args)
    assert (g.n, g.m, len(pairs)) == (cnt["n"], cnt["m"], cnt["pairs"])
    assert pairs.paths.shape[1] == cnt["path_length"]
    g.validate()
    assert audit_unique_paths(g, pairs).passed
    assert audit_pair_disjointness(g, pairs, "clique_edge_unique").passed


def test_spanner_micro_exact_values(spanner_micro):
    g, pairs = spanner_micro.graph, spanner_micro.pairs
    # 169 + 841 boundary lattice vertices, 377 interior vertices turned into 8 ports each
    assert (g.n, g.m, len(pairs)) == (169 + 841 + 377 * 8, 2184 + 377 * 16, 2704)
    assert spanner_micro.derived["delta1"] == spanner_micro.derived["delta2"] == 4


def test_inner_graph_micro():
    inner = build_inner_graph(1, 2, 4)
    assert inner.step_radius == 1 and inner.base_radius == 2
    assert inner.graph.n == len(brute_ball(2, 4)) + len(brute_ball(2, 9)) + len(brute_ball(2, 16))
    assert len(inner.pairs) == 13 * 4
    assert len(set(inner.ports.sources.tolist())) == 4
    assert len(set(inner.ports.targets.tolist())) == 4
    cond = inner.conditions
    assert cond["2_pair_count"] and cond["3_unique_length"] and cond["4_disjoint_and_far"]
    # the vertex bound |V| <= qL cannot hold with distinct ports: every layer holds >= q vertices
    assert not cond["1_vertex_bound"]


def test_inner_graph_rejects_bad_params():
    with pytest.raises(InvalidParameterError):
        build_inner_graph(1, 1, 4)
    with pytest.raises(InvalidParameterError):
        build_inner_graph(0, 2, 4)
    with pytest.raises(InfeasibleError):
        build_inner_graph(1, 2, 10 ** 6, max_radius=2)


def test_outer_graph_micro():
    outer = build_outer_graph(4, 2)
    assert outer.radius == 1
    assert len(outer.vectors) == 4
    assert len(outer.pairs) == len(brute_ball(3, 4)) * 4
    assert audit_unique_paths(outer.graph, outer.pairs).passed
    assert audit_pair_disjointness(outer.graph, outer.pairs, "edge_and_vertex").passed


def test_substitution_micro():
    inst = build_improved_spanner(1, 2, 4)
    g, pairs = inst.graph, inst.pairs
    assert composite_path_length(2, 1) == 4
    assert np.all(pairs.expected_length == 4)
    assert audit_unique_paths(g, pairs).passed
    assert audit_pair_disjointness(g, pairs, "edge_disjoint").passed
    copies = int(np.sum((inst.outer.graph.vertex_layer > 0) & (inst.outer.graph.vertex_layer < 2)))
    assert g.n == inst.outer.graph.n - copies + copies * inst.inner.graph.n
    assert inst.lam == measured_lambda(g.n, 2, len(pairs))


def test_substitution_rejects_odd_length():
    inner = build_inner_graph(1, 3, 4)
    outer = build_outer_graph(4, 3)
    with pytest.raises(InvalidParameterError):
        substitute_inner(outer, inner, 3)


def test_substitution_rejects_port_mismatch():
    inner = build_inner_graph(1, 2, 4)
    outer = build_outer_graph(5, 2)
    with pytest.raises(InvalidParameterError):
        substitute_inner(outer, inner, 2)


def test_clique_replace_on_directed_base_fails_cleanly():
    g, pairs = build_base(BaseGraphParams(2, 1, 2))
    with pytest.raises(ConstructionError):
        clique_replace(g, pairs, 4, 4)
