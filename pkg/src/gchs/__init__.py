"""Numerical toolkit for structural Poisson brackets, covariant Hamilton systems and geodesics."""

from .analogy import (
    GeodesicPath,
    GeodesicState,
    IdentityEntry,
    IdentityReport,
    gchs_velocity_rate,
    geodesic_rhs,
    integrate_geodesic,
    paired_decay,
    run_identity_suite,
    trace_identity_check,
)
from .bracket import (
    Geometrio,
    StructuralMatrix,
    StructuralSystem,
    canonical_system,
    commutation,
    geobracket,
    geometrio,
    gpb,
    gspb,
    s_operator_iterates,
    structural_operator,
)
from .dynamics import (
    Acceleration,
    PhaseState,
    Trajectory,
    acceleration,
    equilibrium_solution,
    gchs_rate,
    gchs_riemannian_rate,
    induced_system,
    integrate,
    ordinary_time_derivative,
    s_dynamics,
    tghs_rhs,
)
from .errors import (
    BlowUp,
    DimensionMismatch,
    ExpressionError,
    GCHSError,
    NoCanonicalSplit,
    OutOfChart,
    SingularMetric,
    StepSizeError,
)
from .expm import matrix_exponential
from .fields import ScalarField
from .manifold import (
    ChristoffelField,
    GeospinMatrix,
    Metric,
    christoffel,
    covariant_derivative,
    euclidean,
    geospin,
    poincare_half_plane,
    sphere2,
    structural_gradient,
)

__version__ = "0.1.0"
