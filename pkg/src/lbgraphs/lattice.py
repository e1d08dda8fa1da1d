"""Exact integer geometry: lattice points in Euclidean balls and the corners of their hull.

Radii are always given squared (``radius_sq``) so that every membership and
extremality decision is made with integer or rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linprog

from .errors import InfeasibleError, InvalidParameterError, Limits, current_limits

LatticePoint = tuple[int, ...]


@dataclass(frozen=True)
class BallSpec:
    d: int
    radius_sq: int

    def __post_init__(self) -> None:
        if not isinstance(self.d, (int, np.integer)) or self.d < 1:
            raise InvalidParameterError(f"dimension must be >= 1, got {self.d!r}")
        if not isinstance(self.radius_sq, (int, np.integer)) or self.radius_sq < 0:
            raise InvalidParameterError(f"radius_sq must be a non-negative integer, got {self.radius_sq!r}")

    @property
    def bound(self) -> int:
        """Largest absolute coordinate a member can have."""
        return math.isqrt(self.radius_sq)

    def contains(self, p: Sequence[int]) -> bool:
        return len(p) == self.d and sum(c * c for c in p) <= self.radius_sq


@dataclass(frozen=True)
class VectorSet:
    """Corner vectors of the hull of a ball, in lexicographic order."""

    d: int
    radius_sq: int
    vectors: tuple[LatticePoint, ...]

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def __getitem__(self, i: int) -> LatticePoint:
        return self.vectors[i]

    @property
    def array(self) -> np.ndarray:
        return np.array(self.vectors, dtype=np.int64).reshape(len(self.vectors), self.d)

    def index(self, v: Sequence[int]) -> int:
        return self.vectors.index(tuple(int(c) for c in v))


def _box_size(d: int, radius_sq: int) -> int:
    return (2 * math.isqrt(radius_sq) + 1) ** d


def ball_count(d: int, radius_sq: int) -> int:
    """Number of lattice points in the closed ball, counted without enumerating them."""
    if d < 1 or radius_sq < 0:
        raise InvalidParameterError(f"bad ball ({d}, {radius_sq})")
    return _ball_count(d, radius_sq)


@lru_cache(maxsize=None)
def _ball_count(d: int, radius_sq: int) -> int:
    m = math.isqrt(radius_sq)
    if d == 1:
        return 2 * m + 1
    return sum(_ball_count(d - 1, radius_sq - x * x) for x in range(-m, m + 1))


def ball_array(d: int, radius_sq: int, limits: Limits | None = None) -> np.ndarray:
    """Ball points as an ``(n, d)`` int64 array in lexicographic order."""
    BallSpec(d, radius_sq)
    (limits or current_limits()).check("max_points", _box_size(d, radius_sq))
    m = math.isqrt(radius_sq)
    axis = np.arange(-m, m + 1, dtype=np.int64)
    if d == 1:
        return axis.reshape(-1, 1)
    grid = np.stack(np.meshgrid(*([axis] * d), indexing="ij"), axis=-1).reshape(-1, d)
    return grid[(grid * grid).sum(axis=1) <= radius_sq]


def enumerate_ball(spec: BallSpec, limits: Limits | None = None) -> list[LatticePoint]:
    """All lattice points ``p`` with ``sum(p_i**2) <= spec.radius_sq``, lexicographically sorted.

    Raises ResourceLimitError when the bounding-box scan exceeds the point budget.
    """
    return [tuple(int(c) for c in row) for row in ball_array(spec.d, spec.radius_sq, limits)]


# ---------------------------------------------------------------------------
# extremality


def _cross(o: LatticePoint, a: LatticePoint, b: LatticePoint) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _strict_hull_2d(points: Iterable[LatticePoint]) -> list[LatticePoint]:
    # monotone chain; popping on cross <= 0 drops collinear points
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list[LatticePoint] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[LatticePoint] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _axis_interior(points: np.ndarray) -> np.ndarray:
    """Mask of points that are midpoints of two members differing along one axis."""
    keyset = {tuple(row) for row in points.tolist()}
    d = points.shape[1]
    out = np.zeros(len(points), dtype=bool)
    for idx, row in enumerate(points.tolist()):
        for i in range(d):
            lo = list(row)
            hi = list(row)
            lo[i] -= 1
            hi[i] += 1
            if tuple(lo) in keyset and tuple(hi) in keyset:
                out[idx] = True
                break
    return out


def _solve_exact(columns: list[list[int]], rhs: list[int]) -> list[Fraction] | None:
    """Unique exact solution of ``A x = rhs`` (A given column-wise), or None."""
    rows = len(rhs)
    k = len(columns)
    mat = [[Fraction(columns[j][i]) for j in range(k)] + [Fraction(rhs[i])] for i in range(rows)]
    pivots = []
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, rows) if mat[i][c] != 0), None)
        if piv is None:
            return None
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(rows):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    for i in range(r, rows):
        if mat[i][k] != 0:
            return None
    return [mat[i][k] for i in range(k)]


def exact_in_hull(p: Sequence[int], others: Sequence[Sequence[int]]) -> bool:
    """Decide ``p in conv(others)`` by an exact rational phase-1 simplex (Bland's rule).

    Slow but free of any tolerance; used as the fallback and as a small-input oracle.
    """
    if not others:
        return False
    d = len(p)
    n = len(others)
    # rows: sum_j lam_j q_j[i] = p[i]  (i < d),  sum_j lam_j = 1
    a = [[Fraction(q[i]) for q in others] for i in range(d)] + [[Fraction(1)] * n]
    b = [Fraction(c) for c in p] + [Fraction(1)]
    m = d + 1
    for i in range(m):
        if b[i] < 0:
            a[i] = [-x for x in a[i]]
            b[i] = -b[i]
    # tableau columns: n structural + m artificial
    tab = [a[i] + [Fraction(1 if k == i else 0) for k in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    ncol = n + m
    cost = [Fraction(0)] * n + [Fraction(1)] * m
    while True:
        # reduced cost of column j: cost_j - sum_i cost_basis_i * tab[i][j]
        entering = None
        for j in range(ncol):
            if j in basis:
                continue
            rc = cost[j] - sum(cost[basis[i]] * tab[i][j] for i in range(m))
            if rc < 0:
                entering = j
                break
        if entering is None:
            break
        best = None
        for i in range(m):
            if tab[i][entering] > 0:
                ratio = tab[i][-1] / tab[i][entering]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:  # unbounded cannot happen in phase 1
            break
        r = best[1]
        inv = 1 / tab[r][entering]
        tab[r] = [x * inv for x in tab[r]]
        for i in range(m):
            if i != r and tab[i][entering] != 0:
                f = tab[i][entering]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[r])]
        basis[r] = entering
    objective = sum(cost[basis[i]] * tab[i][-1] for i in range(m))
    return objective == 0


class _ExtremeOracle:
    """Exact extremality decisions against a fixed point set.

    Floating-point LPs only propose certificates; every verdict is justified by a
    certificate checked in exact arithmetic, with the rational simplex as fallback.
    """

    def __init__(self, points: Sequence[Sequence[int]]):
        self.points = np.asarray(points, dtype=np.int64).reshape(len(points), -1)
        self.d = self.points.shape[1]
        self.keyset = {tuple(row) for row in self.points.tolist()}
        self.fallbacks = 0

    def __call__(self, p: Sequence[int]) -> bool:
        p = tuple(int(c) for c in p)
        if p not in self.keyset:
            raise InvalidParameterError(f"{p} is not a member of the point set")
        if len(self.keyset) == 1:
            return True
        for i in range(self.d):
            lo = list(p)
            hi = list(p)
            lo[i] -= 1
            hi[i] += 1
            if tuple(lo) in self.keyset and tuple(hi) in self.keyset:
                return False
        others = self.points[np.any(self.points != np.array(p), axis=1)]
        diffs = others - np.array(p)
        verdict = self._separating_certificate(diffs)
        if verdict is not None:
            return verdict
        verdict = self._combination_certificate(p, others)
        if verdict is not None:
            return verdict
        self.fallbacks += 1
        return not exact_in_hull(p, others.tolist())

    def _separating_certificate(self, diffs: np.ndarray) -> bool | None:
        # maximise s subject to c . (q - p) + s <= 0, |c_i| <= 1, s <= 1
        d = self.d
        obj = np.zeros(d + 1)
        obj[-1] = -1.0
        a_ub = np.hstack([diffs.astype(float), np.ones((len(diffs), 1))])
        res = linprog(obj, A_ub=a_ub, b_ub=np.zeros(len(diffs)),
                      bounds=[(-1, 1)] * d + [(None, 1)], method="highs")
        if res.status != 0 or -res.fun <= 1e-9:
            return None
        for denom in (1, 10**3, 10**6, 10**9):
            c = [Fraction(x).limit_denominator(denom) for x in res.x[:d]]
            scale = math.lcm(*(f.denominator for f in c))
            ci = [int(f * scale) for f in c]
            if any(ci) and all(sum(ci[k] * int(row[k]) for k in range(d)) < 0 for row in diffs.tolist()):
                return True
        return None

    def _combination_certificate(self, p: LatticePoint, others: np.ndarray) -> bool | None:
        n = len(others)
        a_eq = np.vstack([others.T.astype(float), np.ones((1, n))])
        b_eq = np.array(list(p) + [1], dtype=float)
        res = linprog(np.zeros(n), A_eq=a_eq, b_eq=b_eq, bounds=[(0, None)] * n, method="highs")
        if res.status != 0:
            return None
        support = [int(j) for j in np.argsort(-res.x)[: self.d + 1] if res.x[j] > 1e-12]
        cols = [others[j].tolist() + [1] for j in support]
        lam = _solve_exact(cols, list(p) + [1])
        if lam is not None and all(x >= 0 for x in lam):
            return False
        return None


def is_extreme(p: Sequence[int], points: Sequence[Sequence[int]]) -> bool:
    """True iff ``p`` is not in the convex hull of ``points`` without ``p``.

    Raises InvalidParameterError if ``p`` is not in ``points``.
    """
    return _ExtremeOracle(points)(p)


def extreme_points_bruteforce(points: Sequence[Sequence[int]]) -> list[LatticePoint]:
    """Every point of ``points`` that passes the exact extremality oracle, in lex order."""
    oracle = _ExtremeOracle(points)
    return sorted(tuple(int(c) for c in p) for p in oracle.points.tolist() if oracle(p))


def hull_corners(spec: BallSpec, limits: Limits | None = None) -> VectorSet:
    """Extreme points of the convex hull of the ball's lattice points."""
    pts = ball_array(spec.d, spec.radius_sq, limits)
    if spec.d == 1:
        m = spec.bound
        corners = [(-m,), (m,)] if m > 0 else [(0,)]
    elif spec.d == 2:
        # within a column only the lowest and highest point can be a corner
        cand: list[LatticePoint] = []
        m = spec.bound
        for x in range(-m, m + 1):
            h = math.isqrt(spec.radius_sq - x * x)
            cand.append((x, -h))
            if h:
                cand.append((x, h))
        corners = _strict_hull_2d(cand)
    else:
        boundary = pts[~_axis_interior(pts)]
        oracle = _ExtremeOracle(pts)
        corners = [tuple(row) for row in boundary.tolist() if oracle(row)]
    return VectorSet(spec.d, spec.radius_sq, tuple(sorted(tuple(int(c) for c in v) for v in corners)))


@lru_cache(maxsize=256)
def corner_set(d: int, radius_sq: int) -> VectorSet:
    """Cached ``hull_corners``; vector sets are reused across many constructions."""
    return hull_corners(BallSpec(d, radius_sq))


def corner_growth_profile(d: int, r_min: int, r_max: int) -> list[tuple[int, int]]:
    """Exact ``(r, |corners of B_d(r)|)`` for every integer radius in ``[r_min, r_max]``."""
    if d not in (2, 3):
        raise InvalidParameterError(f"growth profiles are supported for d in {{2, 3}}, got {d}")
    if not 1 <= r_min <= r_max:
        raise InvalidParameterError(f"need 1 <= r_min <= r_max, got {r_min}, {r_max}")
    return [(r, len(corner_set(d, r * r))) for r in range(r_min, r_max + 1)]


def fit_growth_exponent(profile: Sequence[tuple[int, int]]) -> float:
    """Least-squares slope of log|V| against log r."""
    r = np.log([p[0] for p in profile])
    v = np.log([p[1] for p in profile])
    slope, _ = np.polyfit(r, v, 1)
    return float(slope)


def minimal_radius_with_corners(d: int, count: int, max_radius: int = 256) -> int:
    """Smallest integer radius whose corner set has at least ``count`` vectors."""
    for r in range(1, max_radius + 1):
        if len(corner_set(d, r * r)) >= count:
            return r
    raise InfeasibleError(f"no radius <= {max_radius} gives {count} corners in dimension {d}")


def decompositions_of_multiple(vectors: Sequence[LatticePoint], v: LatticePoint, k: int) -> list[tuple[int, ...]]:
    """All multisets (as sorted index tuples) of ``k`` vectors summing to ``k * v``."""
    target = tuple(k * c for c in v)
    found = []
    for combo in combinations_with_replacement(range(len(vectors)), k):
        s = tuple(sum(vectors[i][j] for i in combo) for j in range(len(v)))
        if s == target:
            found.append(combo)
    return found
