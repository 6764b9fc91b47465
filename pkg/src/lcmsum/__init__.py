"""Exact and certified computation of reciprocal-lcm sum constants.

Library layout:

* `exactmath`   exact rationals, dyadic enclosures, sieves, certified zeta
* `coprimality` the coprimality graphs, local-factor polynomials, and the
                tuple decomposition into coprime parts
* `polytope`    exact volumes of the hyperbolic-constraint polytopes via
                lattice-point counting
* `eulerprod`   certified Euler products with zeta-factorization acceleration
* `oracle`      exact brute-force sums and the assembled leading constants
* `cli`         the `lcmsum` command with a full `verify` battery
"""

from .coprimality import (
    CoprimalityGraph,
    Graph,
    build_coprimality_graph,
    decompose_tuple,
    edge_count_formula,
    graph_dump,
    independent_set_counts,
    is_gwise_coprime,
    local_factor_poly,
    local_factor_poly_by_edge_subsets,
    stirling_ism_counts,
)
from .errors import (
    InvariantViolation,
    PeriodDetectionError,
    PrecisionError,
    ResourceLimitError,
)
from .eulerprod import (
    coprime_density,
    count_density_poly,
    euler_product,
    hadamard_constants,
    lcm_count_density,
    series_identity_check,
    zeta_factorization,
)
from .exactmath import (
    BoundedReal,
    ExactRational,
    SieveTables,
    SurdRatio,
    leading_coeff_by_differences,
    sieve,
    stirling2,
    valuation,
    zeta_value,
)
from .oracle import (
    LeadingConstants,
    SumReport,
    brute_prod_over_lcm_sum,
    brute_recip_lcm_sum,
    brute_recip_lcm_sum_coprime,
    convergence_report,
    fast_recip_lcm_sum2,
    gwise_constrained_sum,
    lcm_multiplicity,
    lcm_multiplicity_sum,
    leading_constants,
    sum_report,
    theta_exponents,
)
from .polytope import (
    EhrhartSamples,
    HyperbolicPolytope,
    build_polytope,
    ehrhart_volume,
    export_ieqs,
    ieqs_rows,
    lattice_count,
    lattice_counts,
    volume_of,
    volume_relations_check,
)

__version__ = "0.1.0"
