"""Dense small-matrix numerics for the transposed adjacency matrix.

Everything here works on the canonical block form of ``B = adjacency.T``:

    [ b11 b12 b13 ]
    [  0  b22 b23 ]
    [  0   0   0  ]

with b11 indexed by the infinite-path vertices, b22 (strictly upper
triangular, hence nilpotent) by the eliminated non-sinks, and the sink rows
identically zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._arrays import readonly
from .errors import ConvergenceError, InputError, PhaseError, StructureError
from .graphs import CanonicalNumbering, VertexPartition, _strongly_connected

EIGEN_TOL = 1e-12
MAX_POWER_ITERATIONS = 10 ** 5
RESIDUAL_TOL = 1e-10
PHASE_TOL = 1e-9
NEUMANN_TERM_TOL = 1e-15
MAX_NEUMANN_TERMS = 10 ** 6


def phase_tolerance(lambda0: float) -> float:
    """Width of the transition window on the e**beta axis."""
    return PHASE_TOL * max(1.0, lambda0)


@dataclass(frozen=True, eq=False)
class BlockDecomposition:
    """Blocks of the permuted transposed adjacency, by (e1, e2, e3) position."""

    b11: np.ndarray
    b12: np.ndarray
    b13: np.ndarray
    b22: np.ndarray
    b23: np.ndarray
    numbering: CanonicalNumbering
    sizes: tuple[int, int, int]

    def __post_init__(self) -> None:
        for name in ("b11", "b12", "b13", "b22", "b23"):
            object.__setattr__(self, name, readonly(getattr(self, name), dtype=float))

    def reassemble(self) -> np.ndarray:
        """Permuted full matrix with the zero blocks filled back in."""
        n1, n2, n3 = self.sizes
        n = n1 + n2 + n3
        full = np.zeros((n, n))
        full[:n1, :n1] = self.b11
        full[:n1, n1:n1 + n2] = self.b12
        full[:n1, n1 + n2:] = self.b13
        full[n1:n1 + n2, n1:n1 + n2] = self.b22
        full[n1:n1 + n2, n1 + n2:] = self.b23
        return full


@dataclass(frozen=True, eq=False)
class PerronResult:
    """Spectral radius of a nonnegative matrix plus Perron data when it exists.

    ``eigenvector`` sums to 1 and satisfies the eigen equation when
    ``irreducible`` is true; for a reducible matrix it is the Perron vector of
    the first component achieving the radius, padded with zeros, and must not
    be treated as unique.  ``lambda0`` is 0 for an empty matrix.
    """

    lambda0: float
    eigenvector: np.ndarray | None
    irreducible: bool
    iterations: int

    def __post_init__(self) -> None:
        if self.eigenvector is not None:
            object.__setattr__(self, "eigenvector", readonly(self.eigenvector, dtype=float))


def decompose(b: np.ndarray, numbering: CanonicalNumbering,
              partition: VertexPartition) -> BlockDecomposition:
    """Extract the canonical blocks of ``b`` and assert the zero pattern."""
    b = np.asarray(b, dtype=float)
    n1, n2, n3 = len(partition.e1), len(partition.e2), len(partition.e3)
    if b.shape != (n1 + n2 + n3, n1 + n2 + n3):
        raise InputError("matrix size does not match the partition")
    perm = numbering.permute_matrix(b)
    if np.any(perm[n1:n1 + n2, :n1] != 0):
        raise StructureError("forbidden block: edges from eliminated vertices into the core")
    if np.any(perm[n1 + n2:, :] != 0):
        raise StructureError("forbidden block: sink rows must vanish")
    b22 = perm[n1:n1 + n2, n1:n1 + n2]
    if np.any(np.tril(b22) != 0):
        raise StructureError("eliminated block must be strictly upper triangular")
    return BlockDecomposition(
        b11=perm[:n1, :n1],
        b12=perm[:n1, n1:n1 + n2],
        b13=perm[:n1, n1 + n2:],
        b22=b22,
        b23=perm[n1:n1 + n2, n1 + n2:],
        numbering=numbering,
        sizes=(n1, n2, n3),
    )


def _power_iteration(m: np.ndarray, tol: float, max_iterations: int):
    """Power iteration on ``m + I`` with Collatz-Wielandt bracketing.

    The +I shift makes the iteration matrix primitive for irreducible m, so
    the ratio bracket [min_i (y/x)_i, max_i (y/x)_i] collapses geometrically
    onto the spectral radius.  Returns (radius of m, eigenvector, iterations).
    """
    n = m.shape[0]
    shifted = m + np.eye(n)
    x = np.full(n, 1.0 / n)
    for k in range(1, max_iterations + 1):
        y = shifted @ x
        ratios = y / x
        lo = float(ratios.min())
        hi = float(ratios.max())
        x = y / y.sum()
        if hi - lo <= tol * max(1.0, hi):
            return (lo + hi) / 2.0 - 1.0, x, k
    raise ConvergenceError(
        f"power iteration did not converge within {max_iterations} iterations"
    )


def spectral_radius(m: np.ndarray, tol: float = EIGEN_TOL,
                    max_iterations: int = MAX_POWER_ITERATIONS) -> PerronResult:
    """Spectral radius of a nonnegative matrix by per-component power iteration.

    The support pattern is split into strongly connected components; each
    nontrivial component is irreducible, so shifted power iteration converges
    on it.  The radius of the whole matrix is the largest component radius
    (trivial loop-free components contribute 0).  Running the iteration per
    component avoids the stall of plain power iteration on reducible inputs
    with a defective dominant eigenvalue.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError(f"expected a square matrix, got shape {m.shape}")
    if m.size and m.min() < 0:
        raise InputError("matrix entries must be nonnegative")
    n = m.shape[0]
    if n == 0:
        return PerronResult(lambda0=0.0, eigenvector=None, irreducible=False, iterations=0)
    succ = [[int(w) for w in np.flatnonzero(m[v] > 0)] for v in range(n)]
    components = _strongly_connected(succ)
    irreducible = bool(len(components) == 1 and (n >= 2 or m[0, 0] > 0))
    lambda0 = 0.0
    best_comp: tuple[int, ...] | None = None
    best_vec: np.ndarray | None = None
    iterations = 0
    for comp in components:
        if len(comp) == 1 and m[comp[0], comp[0]] == 0:
            continue
        lam, vec, iters = _power_iteration(m[np.ix_(comp, comp)], tol, max_iterations)
        iterations += iters
        if lam > lambda0:
            lambda0 = lam
            best_comp = comp
            best_vec = vec
    if best_comp is None:
        return PerronResult(lambda0=0.0, eigenvector=None, irreducible=False,
                            iterations=iterations)
    eigenvector = np.zeros(n)
    eigenvector[list(best_comp)] = best_vec
    return PerronResult(lambda0=lambda0, eigenvector=eigenvector,
                        irreducible=irreducible, iterations=iterations)


def solve_tau2(b22: np.ndarray, b23: np.ndarray, tau3: np.ndarray,
               beta: float) -> np.ndarray:
    """Eliminated-block weights as the finite geometric sum over b22 powers.

    b22 is nilpotent, so tau2 = sum_k e**(-(k+1) beta) b22**k b23 tau3 has at
    most dim(b22) nonzero terms and needs no matrix inversion.
    """
    if not beta > 0:
        raise InputError("beta must be positive")
    b22 = np.asarray(b22, dtype=float)
    b23 = np.asarray(b23, dtype=float)
    tau3 = np.asarray(tau3, dtype=float)
    n2 = b22.shape[0]
    if n2 == 0:
        return np.zeros(0)
    decay = math.exp(-beta)
    term = decay * (b23 @ tau3)
    total = term.copy()
    for _ in range(n2 - 1):
        term = decay * (b22 @ term)
        total += term
    return np.maximum(total, 0.0)


def solve_tau1(b11: np.ndarray, b12: np.ndarray, b13: np.ndarray,
               tau2: np.ndarray, tau3: np.ndarray, beta: float,
               lambda0: float) -> np.ndarray:
    """Core weights from the resolvent solve (e**beta I - b11) tau1 = rhs.

    Valid only above the transition; at or below it the system is singular or
    gives signed solutions, so a PhaseError is raised instead.  The LU solve
    is verified against its own residual at 1e-10 relative to the right-hand
    side, and tiny negative entries are clamped to zero.
    """
    b11 = np.asarray(b11, dtype=float)
    n1 = b11.shape[0]
    if n1 == 0:
        return np.zeros(0)
    ebeta = math.exp(beta)
    if ebeta <= lambda0 + phase_tolerance(lambda0):
        raise PhaseError(
            f"resolvent form needs e**beta > {lambda0:.12g}, got e**beta = {ebeta:.12g}"
        )
    rhs = np.asarray(b12, dtype=float) @ np.asarray(tau2, dtype=float)
    rhs = rhs + np.asarray(b13, dtype=float) @ np.asarray(tau3, dtype=float)
    lhs = ebeta * np.eye(n1) - b11
    tau1 = np.linalg.solve(lhs, rhs)
    scale = float(np.abs(rhs).max(initial=0.0))
    residual = float(np.abs(lhs @ tau1 - rhs).max(initial=0.0))
    if residual > RESIDUAL_TOL * scale:
        raise ConvergenceError(
            f"resolvent solve residual {residual:.3e} exceeds {RESIDUAL_TOL:.0e} * |rhs|"
        )
    return np.maximum(tau1, 0.0)


def neumann_total(b: np.ndarray, tau3_padded: np.ndarray, beta: float,
                  term_tol: float = NEUMANN_TERM_TOL,
                  max_terms: int = MAX_NEUMANN_TERMS) -> np.ndarray:
    """Sum the geometric series sum_k e**(-k beta) b**k applied to a vector.

    Converges exactly when e**beta dominates the spectral radius of the part
    of ``b`` the vector feeds; equals the assembled block solution before
    normalization.  Truncates once a term drops below ``term_tol`` in max
    norm, and raises PhaseError if that never happens within ``max_terms``.
    """
    if not beta > 0:
        raise InputError("beta must be positive")
    b = np.asarray(b, dtype=float)
    total = np.asarray(tau3_padded, dtype=float).copy()
    term = total.copy()
    decay = math.exp(-beta)
    # overflow is detected and reported via the finiteness check in the loop
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(max_terms):
            term = decay * (b @ term)
            if not np.all(np.isfinite(term)):
                raise PhaseError(
                    "series term overflowed; e**beta must exceed the core spectral radius"
                )
            total += term
            if float(np.abs(term).max(initial=0.0)) < term_tol:
                return total
    raise PhaseError(
        f"series did not converge within {max_terms} terms; "
        "e**beta must exceed the core spectral radius"
    )
