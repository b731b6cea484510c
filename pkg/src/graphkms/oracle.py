"""Brute-force ground truth: extreme points of the beta-state polytope.

The feasible set at inverse temperature beta is

    { tau >= 0,  sum tau = 1,
      (B tau)_v  = e**beta tau_v   for every non-sink v,
      (B tau)_v <= e**beta tau_v   for every vertex }

with B the transposed adjacency.  Its extreme points are enumerated by basis
inspection, independently of the closed-form solver, and serve as the oracle
the closed form is compared against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ._arrays import readonly
from .errors import DimensionError, InputError
from .graphs import DirectedGraph, find_sinks

FEASIBILITY_TOL = 1e-9
DEDUPE_TOL = 1e-7
RANK_PIVOT_TOL = 1e-11
MAX_ENUM_DIMENSION = 12
MATCH_TOL = 1e-7


@dataclass(frozen=True, eq=False)
class Polytope:
    """Equality rows, inequality rows (<=), and the ambient dimension.

    Always contains the simplex constraints: the all-ones equality row with
    right-hand side 1, and one nonnegativity facet -tau_v <= 0 per coordinate.
    """

    a_eq: np.ndarray
    b_eq: np.ndarray
    a_ub: np.ndarray
    b_ub: np.ndarray
    dimension: int

    def __post_init__(self) -> None:
        for name in ("a_eq", "b_eq", "a_ub", "b_ub"):
            object.__setattr__(self, name, readonly(getattr(self, name), dtype=float))

    def contains(self, x: np.ndarray, tol: float = FEASIBILITY_TOL) -> bool:
        x = np.asarray(x, dtype=float)
        if self.a_eq.size and float(np.abs(self.a_eq @ x - self.b_eq).max()) > tol:
            return False
        if self.a_ub.size and float((self.a_ub @ x - self.b_ub).max()) > tol:
            return False
        return True


@dataclass(frozen=True, eq=False)
class VertexSet:
    """Deduplicated extreme points in lexicographic order, with active sets.

    ``active_sets[i]`` lists the inequality-row indices tight at vertex i;
    the equality rows are tight at every vertex by definition.
    """

    vertices: tuple[np.ndarray, ...]
    active_sets: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(readonly(v, dtype=float) for v in self.vertices))

    def __len__(self) -> int:
        return len(self.vertices)


def build_polytope(g: DirectedGraph, beta: float) -> Polytope:
    """Assemble the constraint system for graph ``g`` at inverse temperature beta."""
    if not beta > 0:
        raise InputError("beta must be positive")
    n = g.vertex_count
    if n == 0:
        raise InputError("graph must have at least one vertex")
    shifted = g.b_matrix() - math.exp(beta) * np.eye(n)
    sinks = sorted(find_sinks(g))
    non_sinks = sorted(set(range(n)) - set(sinks))
    a_eq = np.vstack([shifted[non_sinks], np.ones((1, n))])
    b_eq = np.zeros(len(non_sinks) + 1)
    b_eq[-1] = 1.0
    # Sink rows are slack for any nonnegative tau (their B row is zero) but
    # are kept so feasibility checks cover the full condition set.
    a_ub = np.vstack([shifted[sinks], -np.eye(n)]) if sinks else -np.eye(n)
    b_ub = np.zeros(a_ub.shape[0])
    return Polytope(a_eq=a_eq, b_eq=b_eq, a_ub=a_ub, b_ub=b_ub, dimension=n)


def _facet_pool(p: Polytope) -> list[int]:
    """Inequality rows with duplicates (up to positive scale) removed."""
    pool: list[int] = []
    seen: list[np.ndarray] = []
    for i in range(p.a_ub.shape[0]):
        row = p.a_ub[i]
        scale = float(np.abs(row).max(initial=0.0))
        if scale == 0.0:
            continue
        key = np.concatenate([row, [p.b_ub[i]]]) / scale
        if any(np.allclose(key, s, atol=1e-9) for s in seen):
            continue
        seen.append(key)
        pool.append(i)
    return pool


def enumerate_extreme_points(p: Polytope,
                             feasibility_tol: float = FEASIBILITY_TOL,
                             dedupe_tol: float = DEDUPE_TOL) -> VertexSet:
    """Enumerate every vertex of the polytope by exhaustive basis inspection.

    All equality rows are tight everywhere; a vertex needs dimension-many
    independent tight constraints, so the remaining ones are drawn from the
    deduplicated inequality facets.  Every subset of size
    ``dimension - rank(equalities)`` is tried: rank-deficient bases are
    skipped, inconsistent ones fail their own residual, and infeasible or
    duplicate solutions are dropped.  By basis exchange this covers every
    vertex, including degenerate ones.
    """
    n = p.dimension
    if n > MAX_ENUM_DIMENSION:
        raise DimensionError(
            f"enumeration is guarded at dimension {MAX_ENUM_DIMENSION}, got {n}"
        )
    pool = _facet_pool(p)
    rank_eq = int(np.linalg.matrix_rank(p.a_eq, tol=RANK_PIVOT_TOL)) if p.a_eq.size else 0
    k = n - rank_eq
    found: list[np.ndarray] = []
    for subset in combinations(pool, k):
        rows = np.vstack([p.a_eq, p.a_ub[list(subset)]]) if subset else p.a_eq
        rhs = np.concatenate([p.b_eq, p.b_ub[list(subset)]]) if subset else p.b_eq
        if int(np.linalg.matrix_rank(rows, tol=RANK_PIVOT_TOL)) < n:
            continue
        x = np.linalg.lstsq(rows, rhs, rcond=None)[0]
        if float(np.abs(rows @ x - rhs).max(initial=0.0)) > feasibility_tol:
            continue
        if not p.contains(x, tol=feasibility_tol):
            continue
        if any(float(np.abs(x - y).max()) <= dedupe_tol for y in found):
            continue
        found.append(x)
    found.sort(key=lambda v: tuple(v))
    active_sets = []
    for x in found:
        tight = np.flatnonzero(np.abs(p.a_ub @ x - p.b_ub) <= feasibility_tol)
        active_sets.append(tuple(int(i) for i in tight))
    return VertexSet(vertices=tuple(found), active_sets=tuple(active_sets))


@dataclass(frozen=True)
class ComparisonSummary:
    """Greedy nearest-pair matching between oracle vertices and solver states."""

    matched_pairs: tuple[tuple[int, int], ...]
    unmatched_oracle: tuple[int, ...]
    unmatched_states: tuple[int, ...]
    max_matched_distance: float

    @property
    def agrees(self) -> bool:
        return not self.unmatched_oracle and not self.unmatched_states


def compare_with_closed_form(vertex_set: VertexSet, states,
                             tol: float = MATCH_TOL) -> ComparisonSummary:
    """Match oracle vertices with closed-form states under max-norm distance.

    ``states`` may be anything exposing ``weights`` (or raw vectors).  Pairs
    are matched greedily by ascending distance, stopping at ``tol``.
    """
    weights = [np.asarray(getattr(s, "weights", s), dtype=float) for s in states]
    pairs = []
    for i, v in enumerate(vertex_set.vertices):
        for j, w in enumerate(weights):
            dist = float(np.abs(v - w).max()) if v.shape == w.shape else math.inf
            pairs.append((dist, i, j))
    pairs.sort()
    used_oracle: set[int] = set()
    used_states: set[int] = set()
    matched: list[tuple[int, int]] = []
    max_dist = 0.0
    for dist, i, j in pairs:
        if dist > tol:
            break
        if i in used_oracle or j in used_states:
            continue
        used_oracle.add(i)
        used_states.add(j)
        matched.append((i, j))
        max_dist = max(max_dist, dist)
    return ComparisonSummary(
        matched_pairs=tuple(sorted(matched)),
        unmatched_oracle=tuple(i for i in range(len(vertex_set.vertices)) if i not in used_oracle),
        unmatched_states=tuple(j for j in range(len(weights)) if j not in used_states),
        max_matched_distance=max_dist,
    )
