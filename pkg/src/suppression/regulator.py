"""The scale-dependent suppression function Omega(k, Lambda).

    Omega(k, L) = 1 / (1 + (k^2/L^2)^beta) - eta * exp(-k^2/L^2) / eps(k^2)
    eps(k^2)    = 1 / (1 + (k^2/k_c^2)^alpha)

Everything here is a pure function of its inputs and accepts scalars or
numpy arrays for the momentum argument.  Values outside (0, 1] are never
clamped, so admissibility violations stay visible.

Besides :class:`RegulatorParams` the module provides two analytic test
weights (:class:`GaussianWeight`, :class:`UnitWeight`).  All three share the
small duck-typed surface the other modules rely on: ``omega(k)``, ``dim``,
``scale``, ``power_decay``, ``exponential_decay`` and ``decay_label``.
"""
from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UsageError

__all__ = [
    "RegulatorParams",
    "GaussianWeight",
    "UnitWeight",
    "AdmissibilityReport",
    "Regime",
    "epsilon_eval",
    "omega_eval",
    "omega_complement",
    "omega_uv_asymptote",
    "admissibility_margin",
    "check_admissibility",
    "default_grid",
    "classify_regime",
]


@dataclass(frozen=True)
class RegulatorParams:
    """Parameter set of one suppression function instance.

    Parameters
    ----------
    beta : float
        Power-law exponent, > 0.
    eta : float
        Weight of the subtracted exponential term, >= 0.
    alpha_eps : float
        Transition exponent of eps, > 0.
    k_c : float
        Transition scale of eps (momentum units), > 0.
    lam : float
        Cutoff scale Lambda (momentum units), > 0.
    dim : int
        Dimension of momentum space, >= 1.
    """

    beta: float = 1.0
    eta: float = 0.0
    alpha_eps: float = 1.0
    k_c: float = 1.0
    lam: float = 1.0
    dim: int = 1

    def __post_init__(self):
        for name in ("beta", "alpha_eps", "k_c", "lam"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be a positive finite number, got {value!r}")
        if not (math.isfinite(self.eta) and self.eta >= 0):
            raise DomainError(f"eta must be >= 0, got {self.eta!r}")
        if int(self.dim) != self.dim or self.dim < 1:
            raise DomainError(f"dim must be a positive integer, got {self.dim!r}")
        object.__setattr__(self, "dim", int(self.dim))

    # shared weight surface
    @property
    def scale(self):
        return self.lam

    @property
    def power_decay(self):
        """Exponent p in Omega ~ k^-p at large k."""
        return 2.0 * self.beta

    @property
    def exponential_decay(self):
        return self.eta > 0

    @property
    def decay_label(self):
        return "2β"

    @property
    def uv_damped(self):
        """True when 2 beta > d/2, the power-law damping condition."""
        return 2.0 * self.beta > self.dim / 2.0

    def omega(self, k):
        return omega_eval(k, self)

    def with_lambda(self, lam):
        return dataclasses.replace(self, lam=lam)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class GaussianWeight:
    """Test weight ``amplitude * exp(-gamma k^2)``."""

    gamma: float = 1.0
    amplitude: float = 1.0
    dim: int = 1

    def __post_init__(self):
        if not self.gamma > 0:
            raise DomainError(f"gamma must be > 0, got {self.gamma!r}")
        if int(self.dim) != self.dim or self.dim < 1:
            raise DomainError(f"dim must be a positive integer, got {self.dim!r}")

    @property
    def scale(self):
        return 1.0 / math.sqrt(self.gamma)

    power_decay = math.inf
    exponential_decay = True
    decay_label = "γ"

    @property
    def eta(self):
        # Margin reported by the convergence classifier for exponential decay.
        return self.gamma

    def omega(self, k):
        k = np.asarray(k, dtype=float)
        return self.amplitude * np.exp(-self.gamma * k * k)


@dataclass(frozen=True)
class UnitWeight:
    """Test weight Omega = 1 (plain Lebesgue measure)."""

    dim: int = 1

    scale = 1.0
    power_decay = 0.0
    exponential_decay = False
    eta = 0.0
    decay_label = "0"

    def omega(self, k):
        return np.ones_like(np.asarray(k, dtype=float))


def _scalar_or_array(x):
    return float(x) if np.ndim(x) == 0 else x


def _check_nonnegative(x, name):
    if np.any(np.asarray(x) < 0) or np.any(np.isnan(x)):
        raise DomainError(f"{name} must be >= 0")


def epsilon_eval(k2, params):
    """Transition profile eps(k^2) = 1 / (1 + (k^2/k_c^2)^alpha)."""
    _check_nonnegative(k2, "k2")
    k2 = np.asarray(k2, dtype=float)
    t = (k2 / params.k_c**2) ** params.alpha_eps
    return _scalar_or_array(1.0 / (1.0 + t))


def _power_term(k, params):
    # 1/(1+u) with u = (k/L)^(2 beta); written as u/(1+u) complement elsewhere
    with np.errstate(over="ignore"):
        return (k / params.lam) ** (2.0 * params.beta)


def _exp_term(k, params):
    """eta * exp(-k^2/L^2) / eps(k^2), safe against inf * 0 at large k."""
    if params.eta == 0:
        return np.zeros_like(k)
    with np.errstate(divide="ignore", over="ignore"):
        x = (k / params.lam) ** 2
        log_t = 2.0 * params.alpha_eps * np.log(k / params.k_c)
    # log(1/eps) = log(1 + t) = logaddexp(0, log t)
    return params.eta * np.exp(-x + np.logaddexp(0.0, log_t))


def omega_eval(k, params):
    """Evaluate Omega(k, Lambda) for momentum magnitude(s) ``k >= 0``."""
    _check_nonnegative(k, "k")
    k = np.asarray(k, dtype=float)
    u = _power_term(k, params)
    return _scalar_or_array(1.0 / (1.0 + u) - _exp_term(k, params))


def omega_complement(k, params):
    """``1 - Omega(k)`` computed without cancellation near k = 0."""
    _check_nonnegative(k, "k")
    k = np.asarray(k, dtype=float)
    u = _power_term(k, params)
    with np.errstate(invalid="ignore"):
        first = np.where(np.isinf(u), 1.0, u / (1.0 + u))
    return _scalar_or_array(first + _exp_term(k, params))


def omega_uv_asymptote(k, params):
    """Large-momentum form (Lambda^2/k^2)^beta; undefined at k = 0."""
    k = np.asarray(k, dtype=float)
    if np.any(k <= 0):
        raise DomainError("the UV asymptote is only defined for k > 0")
    return _scalar_or_array((params.lam / k) ** (2.0 * params.beta))


@dataclass(frozen=True)
class AdmissibilityReport:
    """Outcome of a grid check of the positivity hypothesis.

    ``margin`` is the minimum over the grid of
    ``eps(k^2)/(1+(k^2/L^2)^beta) - eta*exp(-k^2/L^2)``; ``holds`` iff it is
    non-negative.  ``monotone`` records whether Omega was non-increasing on
    the same grid (only guaranteed for eta = 0).
    """

    holds: bool
    worst_k: float
    margin: float
    monotone: bool


def admissibility_margin(k, params):
    """Pointwise slack of eta e^{-k^2/L^2} <= eps(k^2)/(1+(k^2/L^2)^beta)."""
    k = np.asarray(k, dtype=float)
    eps = epsilon_eval(k * k, params)
    u = _power_term(k, params)
    x = (k / params.lam) ** 2
    return _scalar_or_array(eps / (1.0 + u) - params.eta * np.exp(-x))


def default_grid(params, points=1000, lo=1e-6, hi=1e6):
    """Zero plus ``points`` log-spaced momenta spanning [lo*L, hi*L]."""
    return np.concatenate(([0.0], np.geomspace(lo * params.lam, hi * params.lam, points)))


def check_admissibility(params, grid=None):
    """Grid check of the positivity/boundedness hypothesis for ``params``.

    With ``grid=None`` the default log grid over [1e-6, 1e6] * Lambda
    (plus k = 0) is used.
    """
    if grid is None:
        grid = default_grid(params)
    grid = np.sort(np.asarray(grid, dtype=float).ravel())
    if grid.size == 0:
        raise UsageError("check_admissibility needs a nonempty grid")
    _check_nonnegative(grid, "grid")
    margins = admissibility_margin(grid, params)
    i = int(np.argmin(margins))
    omega = omega_eval(grid, params)
    monotone = bool(np.all(np.diff(omega) <= 0))
    return AdmissibilityReport(
        holds=bool(margins[i] >= 0),
        worst_k=float(grid[i]),
        margin=float(margins[i]),
        monotone=monotone,
    )


class Regime(str, enum.Enum):
    IR = "IR"
    TRANSITION = "transition"
    UV = "UV"


def classify_regime(k, params):
    # reporting convention only: a decade either side of Lambda
    if k < 0:
        raise DomainError("k must be >= 0")
    if k < params.lam / 10:
        return Regime.IR
    if k > 10 * params.lam:
        return Regime.UV
    return Regime.TRANSITION
