"""q-Bernstein-Durrmeyer operators with Jacobi weights.

A numerics library and CLI for the q-deformed Bernstein-Durrmeyer
operator family: q-calculus primitives, the operator in coefficient and
kernel form, its little q-Jacobi eigensystem, and a desk-scale experiment
harness for convergence, shape-preservation and spectral behavior.
"""

from .errors import (
    CapabilityError,
    ConfigError,
    ConvergenceError,
    DomainError,
    PoleError,
    QbdError,
)
from .poly import Poly
from .qcore import (
    DEFAULT_TOL,
    QParam,
    RealFunction,
    TailTolerance,
    jackson_integral,
    newton_expand,
    q_beta,
    q_binomial,
    q_binomial_real,
    q_derivative,
    q_factorial,
    q_gamma,
    q_number,
    q_pochhammer,
)
from .qbasis import (
    BasisSpec,
    SortedNodes,
    all_minors_nonneg,
    bernstein_all,
    bernstein_basis,
    bernstein_matrix,
    collocation_matrix,
    sign_changes,
)
from .durrmeyer import (
    JacobiWeight,
    OperatorSpec,
    apply_to_poly,
    durrmeyer_coeff,
    durrmeyer_coeffs,
    eigenvalue_lambda,
    eval_operator,
    inner_product,
    kernel_eval,
    kernel_phi,
    make_spec,
    moment_T,
    operator_function,
    operator_moment,
    q_derivative_of_image,
)
from .qjacobi import (
    QJacobiPoly,
    SpectralExpansion,
    classical_jacobi,
    eigenvalue_mu,
    q_derivative_relation_check,
    qjacobi_norm,
    qjacobi_rodrigues,
    qjacobi_series,
    spectral_expand,
    spectral_limit,
    u_operator,
    u_operator_poly,
)
from .catalog import CatalogFunction, catalog_ids, get_function
from .experiments import (
    ExperimentConfig,
    QnSequence,
    Table,
    convergence_experiment,
    derivative_experiment,
    emit,
    empirical_modulus,
    kantorovich_limit_experiment,
    parse_qn,
    property_s_report,
    qn_value,
    render,
    shape_experiment,
    voronovskaya_experiment,
)

__version__ = "0.1.0"
