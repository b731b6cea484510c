"""Finite directed graphs and their structural decomposition.

Adjacency convention: ``adjacency[i, j]`` counts edges with source ``j`` and
range ``i`` (rows index ranges, columns index sources).  The transpose
``B = adjacency.T`` then satisfies ``B[v, w] = number of edges v -> w``, which
is the orientation used when walking the graph.

Vertices are 0-based integers internally; user-facing ids are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._arrays import readonly
from .errors import InputError, StrictModeError


@dataclass(frozen=True, eq=False)
class DirectedGraph:
    """Immutable finite directed graph with nonnegative-integer adjacency."""

    adjacency: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        a = np.asarray(self.adjacency)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InputError(f"adjacency must be a square matrix, got shape {a.shape}")
        if not np.issubdtype(a.dtype, np.integer):
            if not np.all(np.isfinite(a)) or np.any(a != np.floor(a)):
                raise InputError("adjacency entries must be nonnegative integers")
        a = a.astype(np.int64)
        if np.any(a < 0):
            raise InputError("adjacency entries must be nonnegative")
        object.__setattr__(self, "adjacency", readonly(a, dtype=np.int64))
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != a.shape[0]:
                raise InputError("label count must equal vertex count")
            object.__setattr__(self, "labels", labels)

    @property
    def vertex_count(self) -> int:
        return self.adjacency.shape[0]

    @classmethod
    def from_edges(cls, vertex_count, edges, labels=None, strict=False):
        """Build a graph from 0-based ``(source, range[, multiplicity])`` tuples."""
        d = np.zeros((vertex_count, vertex_count), dtype=np.int64)
        for edge in edges:
            src, dst, mult = edge if len(edge) == 3 else (*edge, 1)
            if not (0 <= src < vertex_count and 0 <= dst < vertex_count):
                raise InputError(f"edge ({src}, {dst}) out of range for {vertex_count} vertices")
            if mult < 1:
                raise InputError("edge multiplicity must be at least 1")
            d[dst, src] += mult
        g = cls(adjacency=d, labels=tuple(labels) if labels is not None else None)
        if strict:
            g.require_simple()
        return g

    def require_simple(self) -> None:
        """Raise unless every adjacency entry is 0 or 1."""
        bad = np.argwhere(self.adjacency > 1)
        if bad.size:
            i, j = (int(x) for x in bad[0])
            raise StrictModeError(
                f"strict mode forbids multiple edges; found {int(self.adjacency[i, j])} "
                f"copies of {self.label(j)} -> {self.label(i)}"
            )

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else f"v{v + 1}"

    def b_matrix(self) -> np.ndarray:
        """Transposed adjacency as float64; ``result[v, w] = edges v -> w``."""
        return self.adjacency.T.astype(float)

    def successors(self) -> list[list[int]]:
        """``successors()[v]`` lists targets of edges out of v, ascending."""
        return [
            [int(w) for w in np.flatnonzero(self.adjacency[:, v] > 0)]
            for v in range(self.vertex_count)
        ]

    def predecessors(self) -> list[list[int]]:
        """``predecessors()[w]`` lists sources of edges into w, ascending."""
        return [
            [int(v) for v in np.flatnonzero(self.adjacency[w] > 0)]
            for w in range(self.vertex_count)
        ]

    def __eq__(self, other):
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return np.array_equal(self.adjacency, other.adjacency) and self.labels == other.labels


@dataclass(frozen=True)
class VertexPartition:
    """Disjoint vertex split: e1 reaches a cycle, e3 are the sinks, e2 the rest.

    ``e_r = e1 | e2`` are the non-sinks and ``e_s = e3`` the sinks.  No edge
    leaves ``e2 | e3`` for ``e1``: a vertex with an edge into e1 would itself
    head an infinite path.
    """

    e1: frozenset[int]
    e2: frozenset[int]
    e3: frozenset[int]

    def __post_init__(self) -> None:
        if self.e1 & self.e2 or self.e1 & self.e3 or self.e2 & self.e3:
            raise InputError("partition classes must be pairwise disjoint")

    @property
    def e_r(self) -> frozenset[int]:
        return self.e1 | self.e2

    @property
    def e_s(self) -> frozenset[int]:
        return self.e3


@dataclass(frozen=True)
class CanonicalNumbering:
    """Vertex renumbering produced by iterated sink elimination.

    ``old_to_new[v]`` is the 0-based position of vertex v in the canonical
    order: infinite-path vertices first (ascending original index), then the
    elimination rounds from last to first, so the original sinks occupy the
    highest positions.  Edges inside the eliminated part always point from a
    lower position to a higher one.
    """

    old_to_new: tuple[int, ...]
    elimination_rounds: tuple[tuple[int, ...], ...]

    @property
    def new_to_old(self) -> tuple[int, ...]:
        out = [0] * len(self.old_to_new)
        for old, new in enumerate(self.old_to_new):
            out[new] = old
        return tuple(out)

    def permute_matrix(self, m: np.ndarray) -> np.ndarray:
        order = list(self.new_to_old)
        return np.asarray(m)[np.ix_(order, order)]

    def permute_vector(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x)[list(self.new_to_old)]

    def unpermute_vector(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        out = np.empty_like(x)
        out[list(self.new_to_old)] = x
        return out


@dataclass(frozen=True)
class CoreGraph:
    """Induced subgraph on the infinite-path vertices, with the index map back."""

    graph: DirectedGraph
    vertex_map: tuple[int, ...]

    @property
    def is_empty(self) -> bool:
        return self.graph.vertex_count == 0


def find_sinks(g: DirectedGraph) -> frozenset[int]:
    """Vertices with no outgoing edge (zero adjacency column)."""
    return frozenset(int(v) for v in np.flatnonzero(g.adjacency.sum(axis=0) == 0))


def find_sources(g: DirectedGraph) -> frozenset[int]:
    """Vertices with no incoming edge (zero adjacency row)."""
    return frozenset(int(v) for v in np.flatnonzero(g.adjacency.sum(axis=1) == 0))


def _strongly_connected(succ: list[list[int]]) -> list[tuple[int, ...]]:
    """Iterative Tarjan over successor lists; components in reverse topological order."""
    n = len(succ)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    components: list[tuple[int, ...]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        work = [(root, iter(succ[root]))]
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(succ[w])))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                components.append(tuple(sorted(comp)))
    return components


def strongly_connected_components(g: DirectedGraph) -> list[tuple[int, ...]]:
    return _strongly_connected(g.successors())


def partition_vertices(g: DirectedGraph) -> VertexPartition:
    """Split vertices by whether an infinite outgoing path exists.

    A vertex of a finite graph heads an infinite path exactly when it reaches
    a cycle, so e1 is the reverse-reachable closure of the nontrivial strongly
    connected components (size >= 2 or a positive diagonal entry).
    """
    components = _strongly_connected(g.successors())
    diag = np.diag(g.adjacency)
    seeds = [v for comp in components if len(comp) >= 2 or diag[comp[0]] > 0 for v in comp]
    preds = g.predecessors()
    reach = set(seeds)
    stack = list(seeds)
    while stack:
        w = stack.pop()
        for v in preds[w]:
            if v not in reach:
                reach.add(v)
                stack.append(v)
    e1 = frozenset(reach)
    e3 = find_sinks(g)
    e2 = frozenset(range(g.vertex_count)) - e1 - e3
    return VertexPartition(e1=e1, e2=e2, e3=e3)


def canonical_numbering(g: DirectedGraph, partition: VertexPartition) -> CanonicalNumbering:
    """Number vertices by stripping sinks round after round.

    Round 0 removes the sinks of the graph, round 1 the sinks of what is
    left, and so on until only infinite-path vertices survive.  Eliminated
    vertices take the highest remaining positions (so the original sinks end
    up highest of all); survivors keep the lowest positions.  Ties inside a
    round break by ascending original index, which makes the numbering
    deterministic.
    """
    n = g.vertex_count
    d = g.adjacency
    alive = [True] * n
    out_degree = [int(x) for x in d.sum(axis=0)]
    preds = g.predecessors()
    rounds: list[tuple[int, ...]] = []
    while True:
        current = tuple(v for v in range(n) if alive[v] and out_degree[v] == 0)
        if not current:
            break
        rounds.append(current)
        for w in current:
            alive[w] = False
        for w in current:
            for v in preds[w]:
                if alive[v]:
                    out_degree[v] -= int(d[w, v])
    survivors = [v for v in range(n) if alive[v]]
    if frozenset(survivors) != partition.e1:
        raise InputError("partition is inconsistent with the graph's elimination structure")
    old_to_new = [0] * n
    for pos, v in enumerate(survivors):
        old_to_new[v] = pos
    hi = n
    for rnd in rounds:
        base = hi - len(rnd)
        for k, v in enumerate(rnd):
            old_to_new[v] = base + k
        hi = base
    return CanonicalNumbering(old_to_new=tuple(old_to_new), elimination_rounds=tuple(rounds))


def extract_core(g: DirectedGraph, partition: VertexPartition) -> CoreGraph:
    """Induced subgraph on e1; empty when the graph is acyclic."""
    idx = sorted(partition.e1)
    if idx:
        sub = g.adjacency[np.ix_(idx, idx)]
    else:
        sub = np.zeros((0, 0), dtype=np.int64)
    labels = tuple(g.labels[v] for v in idx) if g.labels is not None else None
    return CoreGraph(graph=DirectedGraph(adjacency=sub, labels=labels), vertex_map=tuple(idx))


def correspondence_degree(g: DirectedGraph) -> int:
    """Largest in-degree counting multiplicity; 0 for an edgeless graph.

    For the edge-indexed bimodule over the vertex algebra this is the degree
    of the correspondence: summing the basis inner products evaluates, at each
    vertex, to its in-degree.
    """
    if g.vertex_count == 0:
        return 0
    return int(g.adjacency.sum(axis=1).max())
