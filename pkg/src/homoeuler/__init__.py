"""Self-similar stationary planar flows: profiles, spans, and assembly."""

__version__ = "0.1.0"

from .assemble import (
    FieldSample,
    GlobalSolution,
    GridSpec,
    LocalArc,
    Piece,
    SmoothnessKind,
    bernoulli_drift,
    elliptic_arc,
    elliptic_global,
    energy_flux,
    export_grid,
    field_at,
    global_profile,
    h1_seminorm,
    hyperbolic_arc,
    residual_max,
    stitch,
    weak_residuals,
)
from .classify import (
    CountKind,
    EllipticCatalog,
    EllipticRoot,
    PSign,
    SolutionTag,
    SolutionType,
    TypeBasis,
    bernoulli,
    count_elliptic,
    solution_type,
    solve_all_elliptic,
    solve_elliptic,
    solve_hyperbolic_span,
)
from .config import RunConfig
from .core import (
    FlowParams,
    PhaseState,
    SteadyStateInfo,
    conjugate,
    phase_vector_field,
    pressure_hamiltonian,
    rescale_to_unit_B,
    rescale_to_unit_P,
    steady_state,
)
from .errors import (
    DomainError,
    EventNotFound,
    InadmissibleArc,
    InconsistentParams,
    InsufficientSamples,
    NoBracket,
    NoSolution,
    NonMonotoneDetected,
    NumericalError,
    OnSingularRay,
    OutOfRange,
    QuadratureFailure,
    SingularEndpoint,
    SpanMismatch,
    StepFailure,
    SteadyStateError,
)
from .families import (
    ExplicitFamily,
    ResidualReport,
    evaluate_family,
    harmonic,
    lambda2,
    lambda_half,
    ode_residual,
    parallel_shear,
    point_vortex,
    rotational,
)
from .orbits import (
    FixedTime,
    InterceptKind,
    Intercepts,
    Orbit,
    PhaseState,
    ReturnToAxis,
    ReturnToStart,
    find_intercepts,
    integrate_orbit,
)
from .periods import (
    LimitValues,
    SpanMethod,
    SpanResult,
    chicone_W,
    limit_values,
    period_elliptic,
    span_any,
    span_hyperbolic,
    span_quadrature,
)

__all__ = [
    "__version__",
    "RunConfig",
    "FieldSample",
    "GlobalSolution",
    "GridSpec",
    "LocalArc",
    "Piece",
    "SmoothnessKind",
    "bernoulli_drift",
    "elliptic_arc",
    "elliptic_global",
    "energy_flux",
    "export_grid",
    "field_at",
    "global_profile",
    "h1_seminorm",
    "hyperbolic_arc",
    "residual_max",
    "stitch",
    "weak_residuals",
    "CountKind",
    "EllipticCatalog",
    "EllipticRoot",
    "PSign",
    "SolutionTag",
    "SolutionType",
    "TypeBasis",
    "bernoulli",
    "count_elliptic",
    "solution_type",
    "solve_all_elliptic",
    "solve_elliptic",
    "solve_hyperbolic_span",
    "ExplicitFamily",
    "ResidualReport",
    "evaluate_family",
    "harmonic",
    "lambda2",
    "lambda_half",
    "ode_residual",
    "parallel_shear",
    "point_vortex",
    "rotational",
    "FixedTime",
    "InterceptKind",
    "Intercepts",
    "Orbit",
    "ReturnToAxis",
    "ReturnToStart",
    "find_intercepts",
    "integrate_orbit",
    "LimitValues",
    "SpanMethod",
    "SpanResult",
    "chicone_W",
    "limit_values",
    "period_elliptic",
    "span_any",
    "span_hyperbolic",
    "span_quadrature",
    "FlowParams",
    "PhaseState",
    "SteadyStateInfo",
    "conjugate",
    "phase_vector_field",
    "pressure_hamiltonian",
    "rescale_to_unit_B",
    "rescale_to_unit_P",
    "steady_state",
    "DomainError",
    "EventNotFound",
    "InadmissibleArc",
    "InconsistentParams",
    "InsufficientSamples",
    "NoBracket",
    "NoSolution",
    "NonMonotoneDetected",
    "NumericalError",
    "OnSingularRay",
    "OutOfRange",
    "QuadratureFailure",
    "SingularEndpoint",
    "SpanMismatch",
    "StepFailure",
    "SteadyStateError",
]
