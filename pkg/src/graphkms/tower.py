"""Path-space trace tower: consistency and monotonicity of level functionals.

A level-n path is a composable edge sequence; the diagonal functional at
level n assigns a path the value e**(-n beta) tau(range).  Refining a path
projection one level deeper replaces tau(range v) with
e**(-beta) (B tau)_v, so the tower is consistent at v exactly when the
equality condition holds there, and monotone when the inequality does.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._arrays import readonly
from .errors import InputError, SizeError
from .graphs import DirectedGraph, find_sinks

PATH_GUARD = 10 ** 6

Edge = tuple[int, int, int]  # (source, range, parallel-copy index)


@dataclass(frozen=True, eq=False)
class PathSpace:
    """All composable edge sequences of one length.

    Level 0 paths are the vertices themselves (plain ints); at level >= 1 a
    path is a tuple of ``(source, range, copy)`` edges with the range of each
    step equal to the source of the next.  ``ranges[i]`` caches the range
    vertex of ``paths[i]``.
    """

    level: int
    paths: tuple
    ranges: tuple[int, ...]

    def range_of(self, path) -> int:
        if isinstance(path, int):
            return path
        return path[-1][1]

    def __len__(self) -> int:
        return len(self.paths)


def _count_paths(g: DirectedGraph, n: int, guard: int) -> int:
    """Total number of length-n paths; aborts early once past the guard."""
    d = g.adjacency.astype(float)
    counts = np.ones(g.vertex_count)
    for _ in range(n):
        counts = d @ counts
        total = float(counts.sum())
        if total > guard:
            raise SizeError(
                f"level {n} would hold more than {guard} paths"
            )
    return int(round(float(counts.sum())))


def build_paths(g: DirectedGraph, n: int, guard: int = PATH_GUARD) -> PathSpace:
    """Enumerate every composable edge sequence of length ``n``.

    Parallel edges are distinguished by a copy index so the path count equals
    the sum of the entries of the n-th adjacency power.
    """
    if n < 0:
        raise InputError("path length must be nonnegative")
    _count_paths(g, n, guard)
    if n == 0:
        vertices = tuple(range(g.vertex_count))
        return PathSpace(level=0, paths=vertices, ranges=vertices)
    out_edges: list[list[Edge]] = [[] for _ in range(g.vertex_count)]
    for src in range(g.vertex_count):
        for dst in range(g.vertex_count):
            for copy in range(int(g.adjacency[dst, src])):
                out_edges[src].append((src, dst, copy))
    paths: list[tuple[Edge, ...]] = [(e,) for src in range(g.vertex_count) for e in out_edges[src]]
    for _ in range(n - 1):
        paths = [p + (e,) for p in paths for e in out_edges[p[-1][1]]]
    ranges = tuple(p[-1][1] for p in paths)
    return PathSpace(level=n, paths=tuple(paths), ranges=ranges)


@dataclass(frozen=True, eq=False)
class TowerFunctional:
    """Diagonal level-n functional: path -> e**(-n beta) tau(range)."""

    weights: np.ndarray
    beta: float
    level: int

    def __post_init__(self) -> None:
        if not self.beta > 0:
            raise InputError("beta must be positive")
        if self.level < 0:
            raise InputError("level must be nonnegative")
        raw = getattr(self.weights, "weights", self.weights)
        object.__setattr__(self, "weights", readonly(raw, dtype=float))

    def value(self, path) -> float:
        v = path if isinstance(path, int) else path[-1][1]
        return math.exp(-self.level * self.beta) * float(self.weights[v])

    def values(self, space: PathSpace) -> np.ndarray:
        if space.level != self.level:
            raise InputError("path space level does not match functional level")
        scale = math.exp(-self.level * self.beta)
        return scale * self.weights[list(space.ranges)]

    def total(self, space: PathSpace) -> float:
        """Sum over all paths, by direct enumeration."""
        return float(np.sum(self.values(space)))


def level_mass(g: DirectedGraph, tau, beta: float, n: int) -> float:
    """Total level-n mass by matrix power: e**(-n beta) * sum(B**n tau).

    Independent route to ``TowerFunctional.total``: the number of length-n
    paths with range v is the v-th row sum of the n-th adjacency power, so
    weighting ranges by tau and summing is a single matrix-power contraction.
    """
    weights = np.asarray(getattr(tau, "weights", tau), dtype=float)
    powered = np.linalg.matrix_power(g.b_matrix(), n) @ weights
    return math.exp(-n * beta) * float(powered.sum())


@dataclass(frozen=True)
class ConsistencyReport:
    """Worst gap between a level-n value and its level-(n+1) refinement."""

    level: int
    residual: float
    worst_vertex: int | None
    checked_paths: int


@dataclass(frozen=True)
class MonotonicityReport:
    """Whether refinement never gains mass, and the tightest margin seen."""

    level: int
    holds: bool
    worst_margin: float
    worst_vertex: int | None


def _reachable_ranges(g: DirectedGraph, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Vertices that occur as ranges of level-n paths, with their path counts."""
    counts = np.linalg.matrix_power(g.adjacency.astype(float), n).sum(axis=1)
    return np.flatnonzero(counts > 0), counts


def tower_consistency_check(g: DirectedGraph, tau, beta: float, n: int,
                            ideal_vertices=None) -> ConsistencyReport:
    """Compare level-n values with their one-step refinements on the ideal.

    The refinement of a path projection with range v is
    e**(-(n+1) beta) (B tau)_v versus the level-n value e**(-n beta) tau_v;
    the gap vanishes exactly where the equality condition holds.  By default
    the ideal is the full set of non-sinks; ``ideal_vertices`` may restrict
    it to a subset (exploratory, no closed-form classification is attached
    to proper subsets).
    """
    if not beta > 0:
        raise InputError("beta must be positive")
    if n < 0:
        raise InputError("level must be nonnegative")
    weights = np.asarray(getattr(tau, "weights", tau), dtype=float)
    if weights.shape != (g.vertex_count,):
        raise InputError("state length does not match vertex count")
    non_sinks = set(range(g.vertex_count)) - find_sinks(g)
    if ideal_vertices is None:
        ideal = non_sinks
    else:
        ideal = set(int(v) for v in ideal_vertices)
        if not ideal <= non_sinks:
            raise InputError("ideal vertices must be non-sinks")
    btau = g.b_matrix() @ weights
    reachable, counts = _reachable_ranges(g, n)
    scope = [int(v) for v in reachable if int(v) in ideal]
    if not scope:
        return ConsistencyReport(level=n, residual=0.0, worst_vertex=None, checked_paths=0)
    level_value = math.exp(-n * beta) * weights[scope]
    refined = math.exp(-(n + 1) * beta) * btau[scope]
    gaps = np.abs(level_value - refined)
    worst = int(np.argmax(gaps))
    return ConsistencyReport(
        level=n,
        residual=float(gaps[worst]),
        worst_vertex=scope[worst],
        checked_paths=int(round(float(counts[scope].sum()))),
    )


def tower_monotonicity_check(g: DirectedGraph, tau, beta: float, n: int,
                             tol: float = 1e-9) -> MonotonicityReport:
    """Check that one-step refinement never increases a level-n value.

    The margin at a range vertex v is
    e**(-n beta) tau_v - e**(-(n+1) beta) (B tau)_v; the tower is monotone
    when the smallest margin over reachable ranges stays above -tol.
    Vacuously true when no level-n path exists.
    """
    if not beta > 0:
        raise InputError("beta must be positive")
    if n < 0:
        raise InputError("level must be nonnegative")
    weights = np.asarray(getattr(tau, "weights", tau), dtype=float)
    if weights.shape != (g.vertex_count,):
        raise InputError("state length does not match vertex count")
    btau = g.b_matrix() @ weights
    reachable, _ = _reachable_ranges(g, n)
    if reachable.size == 0:
        return MonotonicityReport(level=n, holds=True, worst_margin=math.inf,
                                  worst_vertex=None)
    scope = [int(v) for v in reachable]
    margins = math.exp(-n * beta) * weights[scope] - math.exp(-(n + 1) * beta) * btau[scope]
    worst = int(np.argmin(margins))
    return MonotonicityReport(
        level=n,
        holds=float(margins[worst]) >= -tol,
        worst_margin=float(margins[worst]),
        worst_vertex=scope[worst],
    )
