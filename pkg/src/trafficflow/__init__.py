"""Traffic equations for single-class fluid networks with finite buffers
and overflow routing: solvers, existence/uniqueness condition checks,
brute-force oracles, and example-network generators."""

from .errors import (
    ConditionNotVerifiedError,
    IsolatedClassError,
    IterationCapError,
    NetworkFormatError,
    NonConvergenceError,
    OracleSizeError,
    SingularInnerSystemError,
    SpectralRadiusAtLeastOneError,
    TrafficFlowError,
)
from .generators import (
    CellGridSpec,
    gen_example1,
    gen_example2,
    gen_example3,
    gen_example4,
    gen_random,
)
from .linalg import (
    LinearSolveResult,
    SolveStatus,
    has_stochastic_class,
    mask_rows,
    solve_left,
    spectral_radius,
    submatrix,
)
from .network import (
    Equation,
    Network,
    TrafficSolution,
    classify_nodes,
    load_network,
    make_network,
    parse_network,
    residual,
    save_network,
    serialize_network,
    validate_network,
)
from .solvers import (
    OracleKind,
    OracleVerdict,
    SolveTrace,
    TraceStep,
    enumerate_solutions,
    solve_goodman_massey,
    solve_jackson,
    solve_overflow,
    tarski_fixed_point,
)
from .structure import (
    ClassDecomposition,
    ConditionReport,
    ConditionStatus,
    ConditionVerdict,
    characterize_classes,
    check_filled_or_drained,
    check_non_isolated,
    check_overflow_condition,
    communicating_classes,
    condition_report,
)

__version__ = "0.1.0"

__all__ = [
    "CellGridSpec",
    "ClassDecomposition",
    "ConditionNotVerifiedError",
    "ConditionReport",
    "ConditionStatus",
    "ConditionVerdict",
    "Equation",
    "IsolatedClassError",
    "IterationCapError",
    "LinearSolveResult",
    "Network",
    "NetworkFormatError",
    "NonConvergenceError",
    "OracleKind",
    "OracleSizeError",
    "OracleVerdict",
    "SingularInnerSystemError",
    "SolveStatus",
    "SolveTrace",
    "SpectralRadiusAtLeastOneError",
    "TraceStep",
    "TrafficFlowError",
    "TrafficSolution",
    "characterize_classes",
    "check_filled_or_drained",
    "check_non_isolated",
    "check_overflow_condition",
    "classify_nodes",
    "communicating_classes",
    "condition_report",
    "enumerate_solutions",
    "gen_example1",
    "gen_example2",
    "gen_example3",
    "gen_example4",
    "gen_random",
    "has_stochastic_class",
    "load_network",
    "make_network",
    "mask_rows",
    "parse_network",
    "residual",
    "save_network",
    "serialize_network",
    "solve_goodman_massey",
    "solve_jackson",
    "solve_left",
    "solve_overflow",
    "spectral_radius",
    "submatrix",
    "tarski_fixed_point",
    "validate_network",
]
