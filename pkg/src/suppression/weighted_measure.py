"""Weighted measure d mu_Omega = Omega dk and the norms it induces.

Functions enter as :class:`SampledFunction`, either a closed-form handle or
node/value samples.  Samples are interpolated with a monotone cubic (PCHIP)
and continued past the last node by an explicitly declared power law; with
no declared tail exponent the function is taken to vanish beyond the last
node.  The large-k behaviour is what decides every integral here, so it is
declared rather than guessed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import ConvergenceFailure, DivergentIntegral, UsageError
from .quadrature import (
    DEFAULT_TOL,
    classify_convergence,
    integrate_radial,
    regulated_loop_integral,
)
from .regulator import UnitWeight

__all__ = [
    "SampledFunction",
    "EmbeddingDiagnostics",
    "total_mass",
    "weighted_lp_norm",
    "weighted_inner_product",
    "weighted_distance",
    "embedding_diagnostics",
    "gaussian_bump",
    "compact_bump",
]


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """A real function of the momentum magnitude.

    Build one with :meth:`from_callable` or :meth:`from_samples`.

    ``growth`` is the declared large-k power of ``|f|`` (``|f| ~ k^growth``);
    ``None`` means faster than any power (or compact support), in which case
    no symbolic divergence check applies.  ``support`` is an upper bound on
    the support when known.
    """

    func: Callable[[float], float]
    growth: Optional[float] = None
    description: str = ""
    nodes: Optional[np.ndarray] = field(default=None, repr=False)
    values: Optional[np.ndarray] = field(default=None, repr=False)
    support: float = math.inf

    @classmethod
    def from_callable(cls, func, growth=None, description="", support=math.inf):
        return cls(func=func, growth=growth, description=description, support=support)

    @classmethod
    def from_samples(cls, nodes, values, tail_exponent=None, description=""):
        nodes = np.asarray(nodes, dtype=float)
        values = np.asarray(values, dtype=float)
        if nodes.ndim != 1 or nodes.shape != values.shape or nodes.size < 2:
            raise UsageError("nodes and values must be 1-D arrays of equal length >= 2")
        if np.any(nodes < 0) or np.any(np.diff(nodes) <= 0):
            raise UsageError("nodes must be non-negative and strictly increasing")
        if not np.all(np.isfinite(values)):
            raise UsageError("values must be finite at every node")
        interp = PchipInterpolator(nodes, values, extrapolate=False)
        k_last, f_last = float(nodes[-1]), float(values[-1])
        k_first, f_first = float(nodes[0]), float(values[0])

        def func(k):
            if k > k_last:
                if tail_exponent is None:
                    return 0.0
                return f_last * (k / k_last) ** tail_exponent
            if k < k_first:
                return f_first
            return float(interp(k))

        support = math.inf if tail_exponent is not None else k_last
        return cls(func=func, growth=tail_exponent, description=description,
                   nodes=nodes, values=values, support=support)

    def __call__(self, k):
        return self.func(k)

    def __mul__(self, c):
        c = float(c)
        return SampledFunction(lambda k: c * self.func(k), self.growth,
                               f"{c:g}*({self.description})", support=self.support)

    __rmul__ = __mul__

    def __sub__(self, other):
        growth = _combine_growth(self.growth, other.growth, max)
        return SampledFunction(lambda k: self.func(k) - other.func(k), growth,
                               f"({self.description}) - ({other.description})",
                               support=max(self.support, other.support))

    def __add__(self, other):
        growth = _combine_growth(self.growth, other.growth, max)
        return SampledFunction(lambda k: self.func(k) + other.func(k), growth,
                               f"({self.description}) + ({other.description})",
                               support=max(self.support, other.support))


def _combine_growth(a, b, op):
    if a is None:
        return b
    if b is None:
        return a
    return op(a, b)


def gaussian_bump(width=1.0, amplitude=1.0, center=0.0):
    """``amplitude * exp(-(k - center)^2 / (2 width^2))``."""
    def f(k):
        z = (k - center) / width
        return amplitude * math.exp(-0.5 * z * z)
    return SampledFunction.from_callable(
        f, description=f"gaussian(width={width:g}, amplitude={amplitude:g}, center={center:g})")


def compact_bump(radius=1.0, amplitude=1.0):
    """Smooth bump supported on ``[0, radius)``."""
    def f(k):
        z = k / radius
        if z >= 1.0:
            return 0.0
        return amplitude * math.exp(1.0 - 1.0 / (1.0 - z * z))
    return SampledFunction.from_callable(
        f, description=f"bump(radius={radius:g}, amplitude={amplitude:g})", support=radius)


@dataclass(frozen=True)
class EmbeddingDiagnostics:
    """Norm comparison and tail masses of one function.

    ``tail_mass`` maps each cutoff K to the unweighted mass
    ``int_{|k|>K} |f|^2 dk``.  ``l2_divergent`` is set when the unweighted
    norm does not exist; ``norm_l2`` is then ``inf`` and ``ratio`` is 0.
    """

    norm_l2: float
    norm_weighted: float
    ratio: float
    tail_mass: dict
    l2_divergent: bool = False


def total_mass(params, tol=DEFAULT_TOL):
    """mu_Omega(R^d) = int Omega d^dk; raises DivergentIntegral when infinite."""
    return regulated_loop_integral(0.0, params, tol)


def _weighted_integral(integrand, growth, params, tol, operation, rtol=1e-10, split=None):
    if growth is not None:
        verdict = classify_convergence(params.dim, growth, params)
        if not verdict.convergent:
            raise DivergentIntegral(verdict, operation)
    if split is None:
        split = params.scale

    def f(k):
        return integrand(k) * float(params.omega(k))

    result = integrate_radial(f, params.dim, tol, rtol=rtol, split=split)
    if not result.converged:
        raise ConvergenceFailure(
            f"{operation}: quadrature did not converge "
            f"(value {result.value:.6g} +/- {result.abs_error_estimate:.3g}) {result.message}")
    return result


def _split_for(params, *functions):
    ends = [fn.nodes[-1] for fn in functions if fn.nodes is not None]
    ends += [fn.support for fn in functions if math.isfinite(fn.support)]
    return max([params.scale, *ends])


def weighted_lp_norm(f, p, params, tol=DEFAULT_TOL):
    """``(int |f|^p Omega d^dk)^(1/p)``.

    Raises
    ------
    UsageError
        For p < 1.
    DivergentIntegral
        When the declared growth of f makes the integral infinite.
    """
    if not p >= 1:
        raise UsageError(f"p must be >= 1, got {p!r}")
    growth = None if f.growth is None else p * f.growth
    res = _weighted_integral(lambda k: abs(f(k)) ** p, growth, params, tol,
                             "weighted_lp_norm", split=_split_for(params, f))
    return max(res.value, 0.0) ** (1.0 / p)


def weighted_inner_product(f, g, params, tol=DEFAULT_TOL):
    """``<f, g>_Omega = int f g Omega d^dk``."""
    if f.growth is None or g.growth is None:
        growth = None
    else:
        growth = f.growth + g.growth
    res = _weighted_integral(lambda k: f(k) * g(k), growth, params, tol,
                             "weighted_inner_product", split=_split_for(params, f, g))
    return res.value


def weighted_distance(f, g, params, tol=DEFAULT_TOL):
    """``d_Omega(f, g)``, the weighted L2 norm of ``f - g``."""
    if f is g:
        return 0.0
    return weighted_lp_norm(f - g, 2.0, params, tol)


def embedding_diagnostics(f, params, cutoffs, tol=DEFAULT_TOL):
    """Unweighted vs weighted L2 norms of f and its unweighted tail masses.

    Makes no claim about compactness of either embedding; it only reports
    the measurable quantities.
    """
    cutoffs = [float(c) for c in cutoffs]
    if not cutoffs or any(c <= 0 for c in cutoffs) or any(
            b <= a for a, b in zip(cutoffs, cutoffs[1:])):
        raise UsageError("cutoffs must be nonempty, positive and increasing")

    norm_w = weighted_lp_norm(f, 2.0, params, tol)
    flat = UnitWeight(dim=params.dim)
    try:
        norm_l2 = weighted_lp_norm(f, 2.0, flat, tol)
        divergent = False
    except DivergentIntegral:
        norm_l2, divergent = math.inf, True

    tails = {}
    for K in cutoffs:
        if divergent:
            tails[K] = math.inf
        elif K >= f.support:
            tails[K] = 0.0
        else:
            # relative accuracy matters here: tail masses span many decades
            res = integrate_radial(lambda k: f(k) ** 2, params.dim, 1e-300, rtol=1e-9,
                                   lower=K, split=max(2.0 * K, _split_for(flat, f)))
            tails[K] = max(res.value, 0.0)
    ratio = norm_w / norm_l2 if norm_l2 > 0 else 0.0
    return EmbeddingDiagnostics(norm_l2, norm_w, ratio, tails, divergent)
