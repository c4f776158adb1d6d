"""Weinstein transform toolbox with numerical checks of its sharp inequalities."""

from .clt import AtomicMeasure, bernoulli_measure, clt_moment_check, measure_convolve
from .config import RunConfig
from .core import (
    ProductFunction,
    ThetaRule,
    convolve,
    forward_transform,
    inverse_transform,
    kernel_psi,
    kernel_psi_integral,
    theta_rule,
    translate,
    translate_on_grid,
)
from .errors import (
    ConfigurationError,
    ConvergenceError,
    DegenerateInputError,
    DomainError,
    IntegrityError,
    ResourceError,
    WeinsteinError,
)
from .hermite import (
    MultiIndex,
    closed_form_norm,
    generating_lhs,
    generating_partial_sum,
    hermite_multi,
    mehler_apply,
    mehler_eigenvalue,
    mehler_kernel,
    multi_indices,
    norm_table,
)
from .inequalities import (
    HolderTriple,
    babenko_check,
    beckner_constant,
    sweep,
    young_check,
    young_constant,
    young_gaussian_constant,
)
from .quadrature import (
    GridFunction,
    MeasureTag,
    QuadratureGrid,
    WeinsteinParams,
    build_mu_grid,
    build_nu_grid,
    integrate,
    lp_norm,
    sample,
)
from .special import SeriesConfig, bessel_j_norm, ell_alpha, gamma_fn, hermite_1d, laguerre

__version__ = "0.1.0"
