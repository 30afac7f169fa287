"""PT-symmetric Robin Laplacian on an interval: spectra, biorthonormal
bases, the closed-form metric operator and a verification suite for every
identity the model satisfies."""

__version__ = "0.1.0"

from .analytic import (
    AnalyticTestFunction,
    constant,
    cos_function,
    exp_function,
    inner_product_exact,
    monomial,
    norm_exact,
    real_exponential,
    sin_function,
)
from .grids import (
    Grid,
    GridFunction,
    GridMismatchError,
    cumulative_integral,
    grid_function_from_dict,
    grid_function_to_dict,
    inner_product,
    load_grid_function,
    norm,
    sample,
    save_grid_function,
)
from .metric import (
    MetricConfig,
    apply_closed,
    apply_closed_analytic,
    apply_inverse_series,
    apply_series,
    norm_bound_coefficient,
    quadratic_form,
)
from .spectrum import (
    DegeneracyError,
    DegeneracyFlag,
    ModelParams,
    RootRecord,
    SpectralPair,
    adjoint_eigenfunction,
    check_nondegenerate,
    closed_spectrum,
    dirichlet_mode,
    dispersion,
    dispersion_residual,
    eigenfunction,
    eigenvalue,
    neumann_mode,
    solve_spectrum,
    spectral_pair,
)
from .verify import VerificationReport, VerifyConfig, run_all
