"""skewlab: exact checks for skew polynomial rings R[x; sigma, delta].

The library side builds coefficient rings from a small closed catalog,
twists them with endomorphisms and sigma-derivations, and runs exact,
certificate-producing checks: centrality, semi-invariance, bounded PI
decisions, uniform dimensions over fixed subalgebras, orbit and kernel
decompositions.  The CLI side drives the same machinery from JSON
scenario files and replays a set of frozen worked examples.
"""

from .errors import (
    ArityMismatch,
    BadIdempotents,
    BadLiteral,
    BoundExceeded,
    BudgetExceeded,
    CenterNotStable,
    ClosureViolation,
    ContextMismatch,
    DanglingReference,
    IllDefined,
    LeibnizViolation,
    NotAProduct,
    NotASubringOf,
    NotCentral,
    NotRegular,
    NotStable,
    OutOfCatalog,
    RhoIllDefined,
    RingMismatch,
    ScenarioError,
    SkewlabError,
    UnknownExample,
    Unsupported,
    UnsupportedKind,
    WitnessNotInvertible,
)
from .scalars import (
    QQ,
    QI,
    Fraction,
    GF,
    GaussianRational,
    PrimeFieldElement,
    ScalarField,
    field_by_name,
)
from .rings import (
    ConstraintDomain,
    FieldRing,
    LocalizedRing,
    MatrixRing,
    MatrixSubring,
    PolynomialRing,
    ProductRing,
    Ring,
    RingElem,
    example_constrained_ring,
    field_ring,
    membership,
)
from .twists import (
    Endo,
    FixedSubalgebra,
    InnerWitness,
    SigmaDeriv,
    TwistReport,
    deriv_component,
    deriv_inner,
    deriv_partial,
    deriv_zero,
    endo_component,
    endo_conj,
    endo_identity,
    endo_inner,
    endo_lift,
    endo_var_map,
    fixed_subalgebra,
    inner_auto_witness,
    endo_order_on_center,
    shift_endo,
    validate_twist,
)
from .orepoly import (
    GradedCheck,
    OreContext,
    OrePoly,
    graded_lead_check,
    ore_commutator,
    ore_mul,
    render_orepoly,
)
from .centerlab import (
    CentralityReport,
    KernelChainReport,
    LeadingReport,
    OrbitDecomposition,
    PipelineReport,
    QuasiAlgebraicReport,
    SemiInvariantReport,
    UdimReport,
    central_leading_checks,
    inner_delta_witness,
    is_central,
    jordan_closure_probe,
    kernel_chain,
    orbit_decompose,
    pi_decide_pipeline,
    primitive_idempotents,
    quasi_algebraic_solve,
    semi_invariant_solve,
    udim_over_fixed,
)
from .pilab import (
    EXPECTED_VERSION,
    IdentitySpec,
    REPLAY_DEFAULTS,
    ReplayReport,
    SearchReport,
    commutator_power_check,
    default_pool,
    identity_search,
    replay,
    standard_identity_eval,
)
from .scenario import (
    Scenario,
    Twist,
    execute_run,
    load_scenario,
    parse_element,
    parse_orepoly,
    runs_for_family,
)
from .reports import Report, TOOL_VERSION, render_report
from .figures import render_figures

__version__ = TOOL_VERSION

__all__ = [name for name in dir() if not name.startswith("_")]
