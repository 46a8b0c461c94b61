"""Numerics for a scale-dependent UV suppression weight Omega(k, Lambda).

Submodules
----------
regulator         pointwise evaluation, admissibility, regimes
quadrature        radial integrals with convergence classification
weighted_measure  Omega-weighted L^p norms and embedding diagnostics
operators         weakly singular kernel operators: HS norm, Nystrom, spectra
rg_flow           Lambda-derivatives, flow trajectories, log-partition
cli               the ``suppression`` command-line workbench
"""
from .errors import (
    BandSensitivityError,
    ClassifierDisagreement,
    ConvergenceFailure,
    DivergentIntegral,
    DomainError,
    IllDefinedGaussianMode,
    SuppressionError,
    UsageError,
)
from .regulator import (
    GaussianWeight,
    Regime,
    RegulatorParams,
    UnitWeight,
    check_admissibility,
    classify_regime,
    epsilon_eval,
    omega_eval,
    omega_uv_asymptote,
)
from .quadrature import (
    Convergence,
    QuadratureResult,
    classify_convergence,
    integrate_radial,
    regulated_loop_integral,
)
from .weighted_measure import (
    SampledFunction,
    embedding_diagnostics,
    total_mass,
    weighted_inner_product,
    weighted_lp_norm,
)
from .operators import (
    KernelSpec,
    eigen_spectrum,
    hs_norm_direct,
    nystrom_discretize,
    spectral_gap,
)
from .rg_flow import (
    domega_dlambda_analytic,
    flow_trajectory,
    log_partition,
    ricci_flow_eval,
)

__version__ = "0.1.0"
