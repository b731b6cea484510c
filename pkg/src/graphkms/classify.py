"""Closed-form KMS state classification and the phase scan over beta.

For beta above log(lambda0) (or any beta > 0 when the graph is acyclic) the
extreme states are exactly the sink states: put a Dirac weight on one sink,
back-substitute through the nilpotent block, solve the core resolvent, and
normalize.  At the transition the normalized Perron vector of the core,
padded with zeros, is a state.  Below the transition the closed form is
silent and only the polytope oracle can answer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ._arrays import readonly
from .errors import InputError, NonUniqueError, PhaseError, StructureError
from .graphs import (
    CanonicalNumbering,
    DirectedGraph,
    canonical_numbering,
    correspondence_degree,
    extract_core,
    find_sinks,
    find_sources,
    partition_vertices,
)
from .oracle import ComparisonSummary, build_polytope, compare_with_closed_form, \
    enumerate_extreme_points
from .spectral import BlockDecomposition, decompose, phase_tolerance, solve_tau1, \
    solve_tau2, spectral_radius

BETA_CONDITION_TOL = 1e-9

REGIME_NO_CORE = "no_core"
REGIME_ABOVE = "above_transition"
REGIME_AT = "at_transition"
REGIME_BELOW = "below_transition"


@dataclass(frozen=True, eq=False)
class TracialState:
    """Probability vector over the original vertices plus where it came from.

    ``provenance`` is one of ``sink:<id>``, ``perron_frobenius``, or
    ``oracle:<index>`` with 1-based vertex ids.
    """

    weights: np.ndarray
    provenance: str
    beta: float

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise InputError("state weights must be a nonempty vector")
        if float(w.min()) < -1e-12:
            raise InputError("state weights must be nonnegative")
        if abs(float(w.sum()) - 1.0) > 1e-12:
            raise InputError("state weights must sum to 1")
        if not self.beta > 0:
            raise InputError("beta must be positive")
        object.__setattr__(self, "weights", readonly(np.maximum(w, 0.0)))

    @classmethod
    def from_unnormalized(cls, weights, provenance: str, beta: float,
                          clamp_tol: float = 1e-9) -> "TracialState":
        w = np.asarray(weights, dtype=float)
        if w.size == 0:
            raise StructureError("candidate state is empty")
        if float(w.min()) < -clamp_tol:
            raise StructureError(
                f"candidate state has significantly negative weight {float(w.min()):.3e}"
            )
        w = np.maximum(w, 0.0)
        total = float(w.sum())
        if total <= 0.0:
            raise StructureError("candidate state has zero total mass")
        return cls(weights=w / total, provenance=provenance, beta=beta)


@dataclass(frozen=True)
class BetaConditionReport:
    """Residuals of the two beta conditions at a tolerance.

    ``equality_residual`` is the worst |(B tau)_v - e**beta tau_v| over the
    non-sinks; ``inequality_violation`` the worst positive part of
    (B tau)_v - e**beta tau_v over every vertex.
    """

    equality_residual: float
    inequality_violation: float
    satisfied: bool
    tolerance: float


@dataclass(frozen=True, eq=False)
class KmsReport:
    """Everything known about the state set of one graph at one beta."""

    beta: float
    lambda0: float
    regime: str
    extreme_states: tuple[TracialState, ...]
    reports: tuple[BetaConditionReport, ...]
    oracle_agreement: ComparisonSummary | None
    notes: tuple[str, ...]
    vertex_labels: tuple[str, ...]


def check_beta_conditions(g: DirectedGraph, beta: float, tau,
                          tol: float = BETA_CONDITION_TOL) -> BetaConditionReport:
    """Measure how far ``tau`` is from the equality and inequality conditions."""
    if not beta > 0:
        raise InputError("beta must be positive")
    tau = np.asarray(getattr(tau, "weights", tau), dtype=float)
    if tau.shape != (g.vertex_count,):
        raise InputError(
            f"state length {tau.shape} does not match vertex count {g.vertex_count}"
        )
    diff = g.b_matrix() @ tau - math.exp(beta) * tau
    non_sinks = sorted(set(range(g.vertex_count)) - find_sinks(g))
    equality = float(np.abs(diff[non_sinks]).max()) if non_sinks else 0.0
    violation = max(0.0, float(diff.max(initial=0.0)))
    return BetaConditionReport(
        equality_residual=equality,
        inequality_violation=violation,
        satisfied=equality <= tol and violation <= tol,
        tolerance=tol,
    )


def sink_vector(blocks: BlockDecomposition, numbering: CanonicalNumbering,
                sink_v: int, beta: float, lambda0: float | None = None) -> np.ndarray:
    """Unnormalized state vector for one sink, in original vertex order.

    Puts a unit weight on the sink, back-substitutes the eliminated block,
    solves the core resolvent, and undoes the canonical permutation.  Useful
    on its own for comparing against the single geometric-series route.
    """
    n1, n2, n3 = blocks.sizes
    new = numbering.old_to_new[sink_v]
    if new < n1 + n2:
        raise InputError(f"vertex {sink_v + 1} is not a sink")
    if lambda0 is None:
        lambda0 = spectral_radius(blocks.b11).lambda0
    tau3 = np.zeros(n3)
    tau3[new - n1 - n2] = 1.0
    tau2 = solve_tau2(blocks.b22, blocks.b23, tau3, beta)
    tau1 = solve_tau1(blocks.b11, blocks.b12, blocks.b13, tau2, tau3, beta, lambda0)
    return numbering.unpermute_vector(np.concatenate([tau1, tau2, tau3]))


def sink_state(g: DirectedGraph, blocks: BlockDecomposition,
               numbering: CanonicalNumbering, sink_v: int, beta: float,
               lambda0: float | None = None) -> TracialState:
    """Normalized extreme state carried by one sink; needs e**beta > lambda0."""
    vec = sink_vector(blocks, numbering, sink_v, beta, lambda0)
    return TracialState.from_unnormalized(vec, f"sink:{sink_v + 1}", beta)


def perron_state(blocks: BlockDecomposition, numbering: CanonicalNumbering,
                 beta: float, tol: float = BETA_CONDITION_TOL) -> TracialState:
    """State at the transition: normalized core Perron vector, zero elsewhere.

    Only defined for beta = log(lambda0) with a positive beta and an
    irreducible core; the eigen equation is verified numerically on the
    reassembled matrix rather than assumed.
    """
    n1, n2, n3 = blocks.sizes
    if not beta > 0:
        raise PhaseError("beta must be positive")
    if n1 == 0:
        raise PhaseError("graph has no core, so there is no transition")
    perron = spectral_radius(blocks.b11)
    ebeta = math.exp(beta)
    if abs(ebeta - perron.lambda0) > phase_tolerance(perron.lambda0):
        raise PhaseError(
            f"beta {beta:.12g} is not at the transition log({perron.lambda0:.12g})"
        )
    if not perron.irreducible:
        raise NonUniqueError("core is reducible; the Perron vector is not unique")
    padded = np.concatenate([perron.eigenvector, np.zeros(n2 + n3)])
    diff = blocks.reassemble() @ padded - ebeta * padded
    equality = float(np.abs(diff[:n1 + n2]).max(initial=0.0))
    violation = max(0.0, float(diff.max(initial=0.0)))
    if equality > tol or violation > tol:
        raise StructureError(
            f"padded Perron vector fails the beta conditions (residual {equality:.3e})"
        )
    return TracialState(
        weights=numbering.unpermute_vector(padded),
        provenance="perron_frobenius",
        beta=beta,
    )


def classify(g: DirectedGraph, beta: float, with_oracle: bool = False,
             tol: float = BETA_CONDITION_TOL) -> KmsReport:
    """Full classification of the extreme state set at one beta.

    Regime dispatch: an acyclic graph has one sink state per sink at every
    beta; a graph with a core has the sink states above the transition, the
    Perron state at it, and nothing from the closed form below it.  Every
    candidate is residual-checked before being reported; with the oracle
    enabled, the polytope vertices are enumerated and compared, and at or
    below the transition any vertices the closed form missed are appended
    with oracle provenance.
    """
    if not beta > 0:
        raise InputError("beta must be positive")
    if g.vertex_count == 0:
        raise InputError("graph must have at least one vertex")
    partition = partition_vertices(g)
    numbering = canonical_numbering(g, partition)
    blocks = decompose(g.b_matrix(), numbering, partition)
    sinks = sorted(find_sinks(g))
    n1 = len(partition.e1)
    if n1 == 0 and not sinks:
        raise StructureError("acyclic graph without a sink cannot exist")
    lambda0 = spectral_radius(blocks.b11).lambda0 if n1 else 0.0
    ebeta = math.exp(beta)
    ptol = phase_tolerance(lambda0)
    notes: list[str] = []
    candidates: list[TracialState] = []
    if n1 == 0:
        regime = REGIME_NO_CORE
        candidates = [sink_state(g, blocks, numbering, v, beta, lambda0) for v in sinks]
    elif ebeta > lambda0 + ptol:
        regime = REGIME_ABOVE
        candidates = [sink_state(g, blocks, numbering, v, beta, lambda0) for v in sinks]
    elif abs(ebeta - lambda0) <= ptol:
        regime = REGIME_AT
        try:
            candidates.append(perron_state(blocks, numbering, beta, tol))
        except NonUniqueError as exc:
            notes.append(f"perron state withheld: {exc}")
        if sinks:
            notes.append("sink states are unavailable at the transition (singular resolvent)")
    else:
        regime = REGIME_BELOW
        notes.append("closed form is silent below the transition")
    states: list[TracialState] = []
    reports: list[BetaConditionReport] = []
    for s in candidates:
        report = check_beta_conditions(g, beta, s, tol)
        if report.satisfied:
            states.append(s)
            reports.append(report)
        else:
            notes.append(
                f"dropped {s.provenance}: equality residual {report.equality_residual:.3e}"
            )
    comparison = None
    if with_oracle:
        vertex_set = enumerate_extreme_points(build_polytope(g, beta))
        comparison = compare_with_closed_form(vertex_set, states)
        if regime in (REGIME_AT, REGIME_BELOW):
            for i in comparison.unmatched_oracle:
                s = TracialState.from_unnormalized(vertex_set.vertices[i], f"oracle:{i}", beta)
                report = check_beta_conditions(g, beta, s, tol)
                if report.satisfied:
                    states.append(s)
                    reports.append(report)
                else:
                    notes.append(f"dropped oracle vertex {i}: residual too large")
        elif not comparison.agrees:
            notes.append("oracle disagrees with the closed form; see comparison summary")
    return KmsReport(
        beta=beta,
        lambda0=lambda0,
        regime=regime,
        extreme_states=tuple(states),
        reports=tuple(reports),
        oracle_agreement=comparison,
        notes=tuple(notes),
        vertex_labels=tuple(g.label(v) for v in range(g.vertex_count)),
    )


def analyze_structure(g: DirectedGraph) -> dict:
    """Deterministic structural summary: partition, numbering, core, spectral data.

    Returns a plain dict (1-based vertex ids) ready for serialization:
    sinks, sources, the e1/e2/e3 partition, the canonical numbering with its
    elimination rounds, the core subgraph, lambda0 with its irreducibility
    flag, and the correspondence degree.
    """
    if g.vertex_count == 0:
        raise InputError("graph must have at least one vertex")
    partition = partition_vertices(g)
    numbering = canonical_numbering(g, partition)
    core = extract_core(g, partition)
    perron = spectral_radius(core.graph.b_matrix())
    return {
        "vertex_count": g.vertex_count,
        "labels": [g.label(v) for v in range(g.vertex_count)],
        "sinks": [v + 1 for v in sorted(find_sinks(g))],
        "sources": [v + 1 for v in sorted(find_sources(g))],
        "partition": {
            "e1": [v + 1 for v in sorted(partition.e1)],
            "e2": [v + 1 for v in sorted(partition.e2)],
            "e3": [v + 1 for v in sorted(partition.e3)],
        },
        "numbering": {
            "old_to_new": [p + 1 for p in numbering.old_to_new],
            "elimination_rounds": [[v + 1 for v in rnd] for rnd in numbering.elimination_rounds],
        },
        "core": {
            "vertices": [v + 1 for v in core.vertex_map],
            "adjacency": core.graph.adjacency.tolist(),
        },
        "lambda0": perron.lambda0,
        "core_irreducible": perron.irreducible,
        "correspondence_degree": correspondence_degree(g),
    }


def phase_scan(g: DirectedGraph, betas, with_oracle: bool = False,
               tol: float = BETA_CONDITION_TOL) -> list[KmsReport]:
    """Classify along an ascending beta grid and mark the transition bracket."""
    betas = [float(b) for b in betas]
    if not betas:
        raise InputError("beta grid must be nonempty")
    if any(not b > 0 for b in betas):
        raise InputError("beta grid values must be positive")
    if any(b2 < b1 for b1, b2 in zip(betas, betas[1:])):
        raise InputError("beta grid must be sorted ascending")
    reports = [classify(g, b, with_oracle=with_oracle, tol=tol) for b in betas]
    lambda0 = reports[0].lambda0
    if lambda0 > 1.0:
        transition = math.log(lambda0)
        for i, (report, b) in enumerate(zip(reports, betas)):
            if b >= transition and (i == 0 or betas[i - 1] < transition):
                note = (
                    f"transition log(lambda0) = {transition:.15g} reached at grid point "
                    f"{b:.15g}"
                )
                reports[i] = replace(report, notes=report.notes + (note,))
                break
    return reports
