"""KMS equilibrium-state classification for finite directed graph algebras.

The library decomposes a finite directed graph (sinks, sources, the
infinite-path core), computes the Perron-Frobenius data of the core, and
classifies the extreme KMS states at each inverse temperature: one state per
sink above the transition, the Perron state at it.  Every answer can be
cross-checked against an independent polytope vertex enumeration and a
path-space trace tower.
"""

from .classify import (
    BETA_CONDITION_TOL,
    BetaConditionReport,
    KmsReport,
    REGIME_ABOVE,
    REGIME_AT,
    REGIME_BELOW,
    REGIME_NO_CORE,
    TracialState,
    analyze_structure,
    check_beta_conditions,
    classify,
    perron_state,
    phase_scan,
    sink_state,
    sink_vector,
)
from .errors import (
    ConvergenceError,
    DimensionError,
    GraphKmsError,
    InputError,
    InternalError,
    NonUniqueError,
    ParseError,
    PhaseError,
    PreconditionError,
    SizeError,
    StrictModeError,
    StructureError,
)
from .formats import (
    GraphDocument,
    detect_format,
    emit_analysis,
    emit_report,
    emit_scan,
    parse_graph,
    serialize_graph,
)
from .graphs import (
    CanonicalNumbering,
    CoreGraph,
    DirectedGraph,
    VertexPartition,
    canonical_numbering,
    correspondence_degree,
    extract_core,
    find_sinks,
    find_sources,
    partition_vertices,
    strongly_connected_components,
)
from .oracle import (
    ComparisonSummary,
    Polytope,
    VertexSet,
    build_polytope,
    compare_with_closed_form,
    enumerate_extreme_points,
)
from .spectral import (
    BlockDecomposition,
    PerronResult,
    decompose,
    neumann_total,
    phase_tolerance,
    solve_tau1,
    solve_tau2,
    spectral_radius,
)
from .tower import (
    ConsistencyReport,
    MonotonicityReport,
    PathSpace,
    TowerFunctional,
    build_paths,
    level_mass,
    tower_consistency_check,
    tower_monotonicity_check,
)

__version__ = "0.1.0"

__all__ = [
    "BETA_CONDITION_TOL",
    "BetaConditionReport",
    "BlockDecomposition",
    "CanonicalNumbering",
    "ComparisonSummary",
    "ConsistencyReport",
    "ConvergenceError",
    "CoreGraph",
    "DimensionError",
    "DirectedGraph",
    "GraphDocument",
    "GraphKmsError",
    "InputError",
    "InternalError",
    "KmsReport",
    "MonotonicityReport",
    "NonUniqueError",
    "ParseError",
    "PathSpace",
    "PerronResult",
    "PhaseError",
    "Polytope",
    "PreconditionError",
    "REGIME_ABOVE",
    "REGIME_AT",
    "REGIME_BELOW",
    "REGIME_NO_CORE",
    "SizeError",
    "StrictModeError",
    "StructureError",
    "TowerFunctional",
    "TracialState",
    "VertexPartition",
    "VertexSet",
    "analyze_structure",
    "build_paths",
    "build_polytope",
    "canonical_numbering",
    "check_beta_conditions",
    "classify",
    "compare_with_closed_form",
    "correspondence_degree",
    "decompose",
    "detect_format",
    "emit_analysis",
    "emit_report",
    "emit_scan",
    "enumerate_extreme_points",
    "extract_core",
    "find_sinks",
    "find_sources",
    "level_mass",
    "neumann_total",
    "parse_graph",
    "partition_vertices",
    "perron_state",
    "phase_scan",
    "phase_tolerance",
    "serialize_graph",
    "sink_state",
    "sink_vector",
    "solve_tau1",
    "solve_tau2",
    "spectral_radius",
    "strongly_connected_components",
    "tower_consistency_check",
    "tower_monotonicity_check",
]
