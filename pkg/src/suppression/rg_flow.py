"""Scale dependence of Omega: Lambda-derivatives, flow trajectories, the
curvature-flow expression and the Gaussian log-partition integral.

Two derivative evaluators are provided on purpose.
:func:`domega_dlambda_analytic` is the exact ``Lambda dOmega/dLambda`` of the
minus-sign Omega used throughout the package.  :func:`domega_dlambda_printed`
evaluates the commonly quoted closed form

    -2 beta (k/L)^(2 beta) L / (1 + (k/L)^(2 beta))^2 - 2 eta k^2 e^{-k^2/L^2} / (eps L)

term for term, so the two can be compared (:func:`derivative_discrepancy`).
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError, IllDefinedGaussianMode, UsageError
from .quadrature import DEFAULT_TOL, integrate_radial_finite
from .regulator import epsilon_eval, omega_complement, omega_eval

__all__ = [
    "FlowSample",
    "FlowTrajectory",
    "PartitionResult",
    "domega_dlambda_analytic",
    "domega_dlambda_printed",
    "domega_dlog_lambda_fd",
    "derivative_discrepancy",
    "flow_trajectory",
    "ricci_flow_eval",
    "log_partition_integrand",
    "log_partition",
    "LN_2PI",
]

LN_2PI = math.log(2.0 * math.pi)


def _scalar_or_array(x):
    return float(x) if np.ndim(x) == 0 else x


def domega_dlambda_analytic(k, params):
    """Exact ``Lambda * dOmega/dLambda`` at fixed k.

    With ``u = (k/L)^(2 beta)`` and ``x = k^2/L^2``:
    ``2 beta u / (1 + u)^2 - 2 eta x e^{-x} / eps(k^2)``.
    """
    k = np.asarray(k, dtype=float)
    if np.any(k < 0):
        raise DomainError("k must be >= 0")
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        u = (k / params.lam) ** (2.0 * params.beta)
        power = np.where(np.isinf(u), 0.0, 2.0 * params.beta * u / (1.0 + u) ** 2)
        if params.eta:
            # x e^{-x} / eps evaluated in logs so huge k gives 0, not inf * 0
            x = (k / params.lam) ** 2
            log_t = 2.0 * params.alpha_eps * np.log(k / params.k_c)
            log_x = 2.0 * np.log(k / params.lam)
            expo = 2.0 * params.eta * np.exp(log_x - x + np.logaddexp(0.0, log_t))
        else:
            expo = 0.0
    return _scalar_or_array(power - expo)


def domega_dlambda_printed(k, params):
    """The printed closed form, evaluated exactly as typeset (eps at k^2)."""
    k = np.asarray(k, dtype=float)
    lam, beta = params.lam, params.beta
    r = (k / lam) ** (2.0 * beta)
    first = -2.0 * beta * r * lam / (1.0 + r) ** 2
    second = 2.0 * params.eta * k**2 * np.exp(-(k**2) / lam**2) / (epsilon_eval(k * k, params) * lam)
    return _scalar_or_array(first - second)


def domega_dlog_lambda_fd(k, params, step=1e-5):
    """Central finite difference of Omega in ln(Lambda)."""
    up = omega_eval(k, params.with_lambda(params.lam * math.exp(step)))
    down = omega_eval(k, params.with_lambda(params.lam * math.exp(-step)))
    return _scalar_or_array((np.asarray(up) - np.asarray(down)) / (2.0 * step))


def derivative_discrepancy(k, params):
    """Side-by-side comparison of the printed and exact derivatives at one point."""
    exact = float(domega_dlambda_analytic(k, params))
    printed = float(domega_dlambda_printed(k, params))
    return {
        "k": float(k),
        "lambda": params.lam,
        "analytic": exact,
        "printed": printed,
        "difference": printed - exact,
        "magnitude": abs(printed - exact),
        "sign_mismatch": bool(exact * printed < 0),
    }


def ricci_flow_eval(k, params):
    """Curvature-flow expression ``-4 beta^2 k^(4 beta - 2) / Lambda^3``."""
    k = np.asarray(k, dtype=float)
    if np.any(k <= 0):
        raise DomainError("ricci_flow_eval needs k > 0")
    return _scalar_or_array(-4.0 * params.beta**2 * k ** (4.0 * params.beta - 2.0) / params.lam**3)


@dataclass(frozen=True)
class FlowSample:
    lam: float
    omega: float
    domega_dlog_lambda: float
    ricci_proxy: float


@dataclass(frozen=True)
class FlowTrajectory:
    """Samples along log-spaced Lambda plus a fundamental-theorem check.

    ``integrated_change`` is the Simpson integral of ``Lambda dOmega/dLambda``
    over ``ln Lambda``; ``endpoint_change`` is ``Omega(end) - Omega(start)``.
    """

    k: float
    samples: tuple
    integrated_change: float
    endpoint_change: float

    @property
    def relative_error(self):
        scale = abs(self.endpoint_change)
        diff = abs(self.integrated_change - self.endpoint_change)
        if scale == 0:
            return diff
        return diff / scale

    def __iter__(self):
        return iter(self.samples)

    def __len__(self):
        return len(self.samples)

    def to_csv(self):
        buf = io.StringIO()
        buf.write("lambda,omega,dOmega_dlogLambda,ricci_proxy\n")
        for s in self.samples:
            buf.write(f"{s.lam:.17g},{s.omega:.17g},{s.domega_dlog_lambda:.17g},{s.ricci_proxy:.17g}\n")
        return buf.getvalue()


def flow_trajectory(k, params, lambda_start, lambda_end, steps):
    """Trace Omega(k, Lambda) for ``steps`` log-spaced cutoffs.

    The Ricci proxy column is :func:`ricci_flow_eval` (NaN at k = 0, where the
    expression is undefined for beta < 1/2).
    """
    if not (lambda_start > 0 and lambda_end > 0):
        raise DomainError("lambda_start and lambda_end must be > 0")
    if steps < 2:
        raise UsageError("steps must be >= 2")
    if k < 0:
        raise DomainError("k must be >= 0")
    lams = np.geomspace(lambda_start, lambda_end, steps)
    samples = []
    rates = np.empty(steps)
    for i, lam in enumerate(lams):
        p = params.with_lambda(float(lam))
        rates[i] = domega_dlambda_analytic(k, p)
        ricci = ricci_flow_eval(k, p) if k > 0 else math.nan
        samples.append(FlowSample(float(lam), float(omega_eval(k, p)), float(rates[i]), ricci))
    if lambda_start == lambda_end:
        integrated = 0.0
    else:
        integrated = float(integrate.simpson(rates, x=np.log(lams)))
    endpoint = samples[-1].omega - samples[0].omega
    return FlowTrajectory(float(k), tuple(samples), integrated, endpoint)


def log_partition_integrand(k, params):
    """``ln(2 pi) - ln(1 - Omega(k))``, using a cancellation-free complement."""
    k = np.asarray(k, dtype=float)
    om = np.asarray(omega_eval(k, params))
    comp = np.asarray(omega_complement(k, params))
    with np.errstate(divide="ignore", invalid="ignore"):
        # log1p(-Omega) is accurate where Omega is small; the complement where it is not
        log_comp = np.where(np.abs(om) < 0.5, np.log1p(-om), np.log(comp))
    return _scalar_or_array(LN_2PI - log_comp)


@dataclass(frozen=True)
class PartitionResult:
    """ln Z of the regulated Gaussian action up to a finite UV cutoff.

    ``ln_z_density`` is ``1/2 int_{|k|<=cutoff} [ln 2pi - ln(1 - Omega)] d^dk``.
    Its ``ln 2pi`` part is the free Gaussian volume term and grows with the
    cutoff for every regulator; ``ln_z_relative`` drops it, i.e. it is
    ``ln(Z / Z_free) = -1/2 int ln(1 - Omega) d^dk``, the piece whose
    cutoff independence reflects the UV suppression.
    """

    ln_z_density: float
    uv_cutoff: float
    integrand_min_argument: float
    ln_z_relative: float
    abs_error_estimate: float


def _min_complement(params, uv_cutoff, points=4001):
    grid = np.concatenate(([0.0], np.geomspace(1e-8 * uv_cutoff, uv_cutoff, points)))
    comp = np.asarray(omega_complement(grid, params))
    i = int(np.argmin(comp))
    return float(grid[i]), float(comp[i])


def log_partition(params, uv_cutoff, tol=DEFAULT_TOL):
    """Radial reduction of the ln Z integral over ``|k| <= uv_cutoff``.

    Raises
    ------
    IllDefinedGaussianMode
        If ``1 - Omega <= 0`` anywhere on the range (for eta = 0 this
        happens at k = 0, where Omega = 1).
    """
    if not uv_cutoff > 0:
        raise DomainError("uv_cutoff must be > 0")
    if not tol > 0:
        raise UsageError("tol must be > 0")
    k_min, c_min = _min_complement(params, uv_cutoff)
    if not c_min > 0:
        raise IllDefinedGaussianMode(k_min, c_min)

    def excess(k):  # -1/2 ln(1 - Omega)
        return 0.5 * (float(log_partition_integrand(k, params)) - LN_2PI)

    pts = [p for p in (params.lam, params.k_c) if p < uv_cutoff]
    res = integrate_radial_finite(excess, params.dim, uv_cutoff, tol, rtol=1e-12, points=pts)
    free = 0.5 * LN_2PI * _ball_volume(params.dim, uv_cutoff)
    return PartitionResult(
        ln_z_density=free + res.value,
        uv_cutoff=float(uv_cutoff),
        integrand_min_argument=c_min,
        ln_z_relative=res.value,
        abs_error_estimate=float(res.abs_error_estimate),
    )


def _ball_volume(dim, radius):
    """Volume of the d-ball of the given radius."""
    return math.pi ** (dim / 2.0) / math.gamma(dim / 2.0 + 1.0) * radius**dim
