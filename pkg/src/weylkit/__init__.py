"""Weyl polynomials of polynomial families and recurrence along them."""
from .dynamics import (
    CharacterSum,
    CorrelationClosedForm,
    CorrelationExpansion,
    Factor,
    GaussianRational,
    Phase,
    PhaseSequence,
    StandardWeylSystem,
    correlate_closed_form,
    correlate_exact,
    ergodic_average,
    expansion,
    orbit,
    pushforward,
    running_averages,
)
from .linalg import RationalMatrix, Subspace, nullspace, rank, rref
from .polynomial import (
    IntegralityError,
    IntegralPolynomial,
    PolynomialSyntaxError,
    RationalPolynomial,
    binomial_transform,
    parse_family,
    parse_poly,
    parse_rational_poly,
)
from .realization import MissingRealization, convergent, realize
from .recurrence import (
    CrossCheck,
    ExplicitList,
    FullRange,
    ProbeReport,
    ThresholdSet,
    Verdict,
    cross_check,
    generate_set,
    probe_kronecker,
    probe_topological,
    validate_report,
)
from .weyl import (
    NotEssentiallyDistinct,
    NotStabilized,
    PolyFamily,
    Relation,
    SchemeComparison,
    WeylSpace,
    complexity_with_trace,
    contains_poly,
    integral_basis,
    lambda_matrix,
    scheme_compare,
    span_dim,
    weyl_complexity,
    weyl_polynomials,
    weyl_space,
    xi,
)

__version__ = "0.1.0"
