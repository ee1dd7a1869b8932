"""genshift: generalized translation operators on [-1, 1], moduli of
smoothness, weighted best polynomial approximation, and Jackson-type
verification experiments, exposed as a library, a FastAPI service, and a CLI.
"""

from .errors import ContractError, DomainError, NumericsError
from .jacobi import (
    JacobiBasis,
    PolynomialCoeffs,
    QuadratureRule,
    SturmLiouvilleParams,
    fourier_jacobi_coeff,
    fourier_jacobi_coeffs,
    gauss_jacobi_rule,
    jacobi_eval,
    jacobi_norm_sq,
    jacobi_table,
    sl_apply_coeffs,
    sl_apply_pointwise,
    sl_eigenvalue,
)
from .spaces import (
    INF,
    Admissibility,
    FunctionHandle,
    SampledFunction,
    SpaceParams,
    check_admissible,
    load_function_csv,
    weighted_distance,
    weighted_norm,
    weighted_norm_with_error,
)
from .translation import (
    GeodesicFrame,
    TranslationConfig,
    asym_translate,
    duality_check,
    geodesic_frame,
    identity_domain_ok,
    sym_translate,
    translate_norm_bound_check,
)
from .smoothness import (
    KFunctionalConfig,
    KFunctionalResult,
    ModulusConfig,
    ModulusResult,
    equivalence_ratio,
    k_functional,
    modulus,
)
from .approx import (
    ApproxConfig,
    BestApproxResult,
    JacksonSpec,
    best_approx,
    best_approx_sequence,
    jackson_operator,
    make_jackson_spec,
    markov_bernstein_check,
)
from .corpus import CorpusFunction, corpus, corpus_entries

__version__ = "0.1.0"
