"""Exact-arithmetic toolkit for S-integral points in backward orbits of
power maps z -> z**d over the rationals.

Enumerates backward orbits symbolically, partitions levels into Galois
orbits by exact factorization, decides S-integrality through Newton
polygons, evaluates local heights and equidistribution discrepancies, and
verifies the quantitative bounds at desk scale.
"""

from .arith import (
    LogValue,
    Place,
    ProductFormulaRecord,
    Rational,
    default_precision,
    euler_totient,
    log_abs,
    padic_valuation,
    product_formula_check,
    weil_height,
)
from .binomial import (
    GaloisOrbitPartition,
    IntPolynomial,
    OrbitClass,
    capelli_irreducible,
    degree_bound_report,
    factor_binomial,
    galois_orbits,
    subset_factor_oracle,
)
from .errors import (
    CertificationError,
    DegenerateInputError,
    DomainError,
    InputError,
    OrbitError,
    ResourceError,
    UnsupportedInputError,
)
from .gaussian import GaussianRational, gaussian_weil_height
from .harness import (
    CensusReport,
    ClosenessReport,
    DepthRecord,
    SuiteReport,
    archimedean_closeness,
    az_pairing_curve,
    bound_suite,
    discrepancy,
    s_integral_census,
)
from .integrality import (
    SIntegralityReport,
    Witness,
    candidate_primes,
    full_level_s_integrality,
    is_s_integral,
)
from .localheights import (
    LocalHeightValue,
    chordal_distance,
    class_height_sum,
    decay_envelope,
    dirichlet_quadrature,
    equidistribution_bound,
    equilibrium_integral,
    equilibrium_quadrature,
    level_height_sum,
    local_height,
    truncated_local_height,
    truncation_constants,
)
from .orbits import OrbitLevel, RadicalPoint, embed, level_valuation, point_height, preimages
from .padic import (
    MinDistanceScan,
    NewtonPolygon,
    cluster_count,
    distance_profile,
    min_distance_bound,
    min_distance_scan,
    newton_polygon,
)

__version__ = "0.1.0"
