"""Exact-arithmetic monoid geometry over the rational numbers.

Arithmetic divisors with infinite coefficients, truncated-precision finite
adeles, the Picard and Jacobian monoids of the compactified arithmetic
site, framed divisors with their torsion duals and root systems, abelian
cover decompositions with Frobenius bookkeeping, and a numerical
two-sided balance of the explicit formula for zeta.

Everything algebraic is exact (integers and fractions end to end);
the only floating point lives in the explicit-formula module, where every
quadrature reports an error estimate and the zero table is certified by an
independent evaluator.
"""

from .errors import (
    AllZeroError,
    FixedPointSingularError,
    InfiniteCoefficientError,
    InfiniteTypeError,
    InsufficientPrecisionError,
    InsufficientZerosError,
    MissingCapError,
    MissingPrimeError,
    NegativeScaleError,
    NonPrimeError,
    NonUnitGeneratorError,
    NotInGroupError,
    PicmonoidError,
    PrimeMismatchError,
    QuadratureFailureError,
    RamifiedError,
    UsageError,
    ZeroInputError,
    ZeroScaleError,
)
from .numtheory import (
    INF,
    ExtInt,
    crt,
    ext_min,
    factorize,
    factorize_fraction,
    is_inf,
    is_prime,
    kronecker,
    primes_up_to,
    require_prime,
    strip_prime,
    unit_part,
    valuation,
    xgcd,
)
from .divisors import (
    ALL_PRIMES,
    NO_PRIMES,
    ArithmeticDivisor,
    OracleDivisor,
    PrimeSet,
    class_normalize,
    classes_equivalent,
    divisor_add,
    divisor_from_generators,
    divisor_from_localization,
    divisor_from_rational,
    divisor_from_text,
    divisor_negate,
    divisor_to_text,
    is_idempotent_class,
    sections_contains,
    sections_generator,
)
from .adeles import (
    Adele,
    FiniteAdele,
    QmodZ,
    TruncatedPadic,
    adele_multiply,
    adele_to_divisor,
    divisor_to_adele,
    fractional_part,
    padic_from_rational,
    psi_pair,
    subgroup_membership,
    yq_reduce,
)
from .picard import (
    ARCHIMEDEAN_PLACE,
    GENERIC_POINT,
    JacClass,
    PicClass,
    SpectrumSample,
    abel_jacobi,
    abel_jacobi_set,
    jac_product,
    jac_project,
    jac_theta,
    pic_equal,
    pic_from_data,
    pic_product,
    theta_class,
    unit_ball_sections,
    value_spectrum_sample,
    xq_class,
)
from .frames import (
    DualTorsionDescriptor,
    Frame,
    dual_torsion,
    frame_check_tight,
    frame_from_rational,
    frame_tensor,
    pic_framed_class,
    root_consistency_check,
    root_eval,
    root_level_values,
    root_psi_compatible,
    root_table,
    root_tensor_check,
    root_vanishing,
)
from .covers import (
    CoverSpec,
    FiberDecomposition,
    FiberDescriptor,
    FiberPoint,
    TorusPoint,
    cover_for_quadratic,
    cover_from_character,
    cp_identity,
    cp_inverse,
    cp_product,
    fiber_decomposition,
    fiber_descriptor,
    fiber_point,
    frobenius,
    ramified_set,
    stabilizer_contains,
    torus_normalize,
)
from .explicit_formula import (
    BalanceReport,
    SemilocalReport,
    TestFunction,
    ZeroTable,
    balance_curve,
    dist_trace,
    finite_shell_decomposition,
    geometric_side,
    load_zero_table,
    local_term_arch,
    local_term_arch_digamma,
    local_term_finite,
    mellin_hat,
    mellin_hat_with_error,
    parse_zero_table,
    product_formula_holds,
    semilocal_rhs,
    smoothed_triangle,
    spectral_side,
    spectral_tail_bound,
    test_function_from_spec,
    verify_zero_ordinate,
    weil_balance,
    windowed_cosine,
    zero_sum_terms,
    zeta_euler_maclaurin,
)

__version__ = "0.1.0"
