from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import brute_ball, planar_extreme_points, rational_convex_combination
from lbgraphs.errors import InvalidParameterError, ResourceLimitError, Limits
from lbgraphs.lattice import (
    BallSpec,
    ball_array,
    ball_count,
    corner_growth_profile,
    corner_set,
    decompositions_of_multiple,
    enumerate_ball,
    exact_in_hull,
    extreme_points_bruteforce,
    fit_growth_exponent,
    hull_corners,
    is_extreme,
    minimal_radius_with_corners,
)


@given(st.integers(1, 3), st.integers(0, 40))
def test_ball_count_matches_enumeration(d, radius_sq):
    assert ball_count(d, radius_sq) == len(brute_ball(d, radius_sq))


@given(st.integers(1, 3), st.integers(0, 30))
def test_ball_array_is_sorted_and_exact(d, radius_sq):
    arr = ball_array(d, radius_sq)
    assert [tuple(r) for r in arr.tolist()] == brute_ball(d, radius_sq)


def test_small_ball_values():
    assert ball_count(2, 16) == 49
    assert ball_count(2, 4) == 13
    assert ball_count(2, 9) == 29
    assert ball_count(3, 1) == 7
    assert enumerate_ball(BallSpec(1, 4)) == [(-2,), (-1,), (0,), (1,), (2,)]


def test_ballspec_validation():
    with pytest.raises(InvalidParameterError):
        BallSpec(0, 4)
    with pytest.raises(InvalidParameterError):
        BallSpec(2, -1)
    assert BallSpec(2, 5).contains((1, 2))
    assert not BallSpec(2, 5).contains((2, 2))


def test_point_budget_is_enforced():
    with pytest.raises(ResourceLimitError):
        ball_array(3, 400, Limits(max_points=100))


@pytest.mark.parametrize("radius_sq, expected", [
    (1, [(-1, 0), (0, -1), (0, 1), (1, 0)]),
    (4, [(-2, 0), (0, -2), (0, 2), (2, 0)]),
    (5, [(-2, -1), (-2, 1), (-1, -2), (-1, 2), (1, -2), (1, 2), (2, -1), (2, 1)]),
])
def test_planar_corner_sets(radius_sq, expected):
    assert list(corner_set(2, radius_sq)) == expected


def test_extremality_examples():
    b4 = brute_ball(2, 4)
    assert not is_extreme((1, 1), b4)
    assert is_extreme((2, 1), brute_ball(2, 5))
    with pytest.raises(InvalidParameterError):
        is_extreme((5, 5), b4)


def test_three_dim_unit_corners():
    assert list(corner_set(3, 1)) == sorted(
        tuple(s * (i == k) for k in range(3)) for i in range(3) for s in (-1, 1))


def test_three_dim_corner_counts_frozen():
    # computed with the exact oracle and cross-checked below against convex combinations
    assert [len(corner_set(3, r * r)) for r in range(1, 6)] == [6, 14, 30, 54, 54]


@pytest.mark.parametrize("radius_sq", [1, 2, 4, 5, 8, 9, 10])
def test_planar_corners_agree_with_triangle_oracle(radius_sq):
    pts = brute_ball(2, radius_sq)
    assert list(corner_set(2, radius_sq)) == planar_extreme_points(pts)


@pytest.mark.parametrize("radius_sq", [1, 2])
def test_spatial_corners_agree_with_convex_combination_search(radius_sq):
    pts = brute_ball(3, radius_sq)
    corners = set(corner_set(3, radius_sq))
    for p in pts:
        others = [q for q in pts if q != p]
        assert (p in corners) == (not rational_convex_combination(p, others))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 60))
def test_corner_set_symmetry(radius_sq):
    vs = set(corner_set(2, radius_sq))
    assert all((-x, y) in vs and (y, x) in vs for x, y in vs)


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 12))
def test_corners_are_extreme_by_exact_simplex(radius_sq):
    pts = brute_ball(2, radius_sq)
    corners = set(corner_set(2, radius_sq))
    for p in pts:
        others = [q for q in pts if q != p]
        assert exact_in_hull(p, others) == (p not in corners)


def test_bruteforce_matches_hull_small():
    for r in range(1, 8):
        assert extreme_points_bruteforce(brute_ball(2, r * r)) == list(hull_corners(BallSpec(2, r * r)))


def test_growth_profile_and_fit():
    prof = corner_growth_profile(2, 10, 40)
    assert len(prof) == 31 and all(v >= 4 for _, v in prof)
    assert 0.3 < fit_growth_exponent(prof) < 1.0
    with pytest.raises(InvalidParameterError):
        corner_growth_profile(4, 1, 2)


def test_minimal_radius_with_corners():
    assert minimal_radius_with_corners(3, 4) == 1
    assert minimal_radius_with_corners(3, 7) == 2
    assert minimal_radius_with_corners(2, 5) == 3


def test_corner_multiples_have_unique_decomposition():
    # a multiple k*v of a corner v is a sum of k corners only as v+...+v
    for radius_sq in (1, 4, 5, 9):
        vs = list(corner_set(2, radius_sq))
        for i, v in enumerate(vs):
            for k in (1, 2, 3):
                assert decompositions_of_multiple(vs, v, k) == [tuple([i] * k)]


def test_vectorset_index_roundtrip():
    vs = corner_set(2, 5)
    for i, v in enumerate(vs):
        assert vs.index(v) == i
    assert np.array_equal(vs.array, np.array(list(vs)))
    assert len(list(itertools.islice(iter(vs), 3))) == 3
