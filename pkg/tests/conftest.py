"""Shared graph builders and independent test oracles.

The oracles here deliberately avoid the library's own code paths: cycle
detection is a three-color DFS, infinite-path membership is decided by
counting walks of length n (pigeonhole), and the spectral radius oracle goes
through Faddeev-LeVerrier coefficients and companion-matrix roots.
"""

from __future__ import annotations

import numpy as np

from graphkms import DirectedGraph


# ---------------------------------------------------------------- builders

def graph(n, edges, labels=None):
    """0-based (source, range[, multiplicity]) edges."""
    return DirectedGraph.from_edges(n, edges, labels=labels)


def loop_and_sink():
    """Loop at v1 plus edge v1 -> v2."""
    return graph(2, [(0, 0), (0, 1)])


def path3():
    """v1 -> v2 -> v3, no cycles."""
    return graph(3, [(0, 1), (1, 2)])


def complete2():
    """All four 0-1 entries set."""
    return DirectedGraph(adjacency=np.ones((2, 2), dtype=np.int64))


def isolated_vertex():
    return DirectedGraph(adjacency=np.zeros((1, 1), dtype=np.int64))


def single_loop():
    return graph(1, [(0, 0)])


def two_cycle():
    return graph(2, [(0, 1), (1, 0)])


def cuntz(n_loops):
    """One vertex carrying n parallel loops."""
    return DirectedGraph(adjacency=np.array([[n_loops]], dtype=np.int64))


# ------------------------------------------------------- independent oracles

def dfs_has_cycle(g):
    """Three-color DFS cycle detector, independent of the SCC machinery."""
    succ = g.successors()
    color = [0] * g.vertex_count  # 0 white, 1 gray, 2 black
    for root in range(g.vertex_count):
        if color[root]:
            continue
        stack = [(root, iter(succ[root]))]
        color[root] = 1
        while stack:
            v, it = stack[-1]
            advanced = False
            for w in it:
                if color[w] == 1:
                    return True
                if color[w] == 0:
                    color[w] = 1
                    stack.append((w, iter(succ[w])))
                    advanced = True
                    break
            if not advanced:
                color[v] = 2
                stack.pop()
    return False


def walk_infinite_path_vertices(g):
    """Vertices admitting a walk of length n (pigeonhole: such a walk hits a cycle)."""
    n = g.vertex_count
    b = (g.adjacency.T > 0).astype(float)
    walks = np.linalg.matrix_power(b, n) @ np.ones(n)
    return frozenset(int(v) for v in np.flatnonzero(walks > 0))


def brute_force_sinks(g):
    """Enumerate s^-1 per vertex directly from the edge list."""
    out = set(range(g.vertex_count))
    for dst in range(g.vertex_count):
        for src in range(g.vertex_count):
            if g.adjacency[dst, src] > 0:
                out.discard(src)
    return frozenset(out)


def char_poly_max_root(m):
    """Spectral radius via Faddeev-LeVerrier coefficients + companion roots.

    Coefficient recursion uses only matrix products and traces; np.roots then
    finds the eigenvalues of the companion matrix.  No power iteration.
    """
    m = np.asarray(m, dtype=float)
    n = m.shape[0]
    if n == 0:
        return 0.0
    coeffs = [1.0]
    mk = m.copy()
    coeffs.append(-float(np.trace(mk)))
    for k in range(2, n + 1):
        mk = m @ (mk + coeffs[-1] * np.eye(n))
        coeffs.append(-float(np.trace(mk)) / k)
    roots = np.roots(coeffs)
    return float(np.abs(roots).max()) if roots.size else 0.0


# --------------------------------------------------------- random generators

def random_graph(rng, n, density=0.35):
    d = (rng.random((n, n)) < density).astype(np.int64)
    return DirectedGraph(adjacency=d)


def random_cyclic_sink_graph(rng, max_n=7):
    """Random 0-1 graph with at least one cycle and at least one sink."""
    n = int(rng.integers(3, max_n + 1))
    d = (rng.random((n, n)) < 0.35).astype(np.int64)
    loop = int(rng.integers(0, n))
    d[loop, loop] = 1
    sink = int(rng.integers(0, n))
    if sink == loop:
        sink = (sink + 1) % n
    d[:, sink] = 0
    return DirectedGraph(adjacency=d)


def random_acyclic_graph(rng, max_n=7):
    """Random DAG: edges follow a hidden random topological order."""
    n = int(rng.integers(2, max_n + 1))
    order = rng.permutation(n)
    d = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < 0.4:
                d[order[b], order[a]] = 1  # edge order[a] -> order[b]
    return DirectedGraph(adjacency=d)


def _is_irreducible_pattern(a):
    n = a.shape[0]
    if n == 1:
        return a[0, 0] > 0
    reach = (a > 0).astype(bool)
    closure = reach.copy()
    for _ in range(n):
        closure = closure | (closure @ reach)
    return bool(closure.all())


def _is_permutation(a):
    return bool(np.all(a.sum(axis=0) == 1) and np.all(a.sum(axis=1) == 1) and a.max() <= 1)


def random_irreducible_01(rng, max_n=5):
    """Irreducible, non-permutation 0-1 matrix (spectral radius > 1)."""
    while True:
        n = int(rng.integers(2, max_n + 1))
        a = (rng.random((n, n)) < 0.45).astype(np.int64)
        if _is_irreducible_pattern(a) and not _is_permutation(a):
            return a


def random_core_with_tail(rng, core_size=None):
    """Irreducible core plus a chain of fresh vertices ending in a sink."""
    core = random_irreducible_01(rng, max_n=4 if core_size is None else core_size)
    k = core.shape[0]
    tail = int(rng.integers(1, 3))
    n = k + tail
    d = np.zeros((n, n), dtype=np.int64)
    d[:k, :k] = core
    attach = int(rng.integers(0, k))
    d[k, attach] = 1  # core vertex -> first tail vertex
    for t in range(tail - 1):
        d[k + t + 1, k + t] = 1
    return DirectedGraph(adjacency=d)
