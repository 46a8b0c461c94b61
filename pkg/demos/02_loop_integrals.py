"""
Regulated momentum integrals
============================

Integrals of Omega(k) k^alpha over R^d are classified before anything is
integrated: a power-law weight handles growth alpha only when
2 beta > d + alpha.  Divergent requests are refused with the deciding
inequality instead of returning a meaningless number.
"""

# %%
import math

import numpy as np

from suppression.errors import DivergentIntegral
from suppression.quadrature import (
    classify_convergence,
    gamma_moment_oracle,
    integrate_radial,
    partial_integrals,
    regulated_loop_integral,
    sphere_area,
)
from suppression.regulator import RegulatorParams

# %%
# Gaussian moments check the radial reduction in several dimensions.
for d in (1, 2, 3, 4):
    r = integrate_radial(lambda k: math.exp(-k * k), d)
    exact = gamma_moment_oracle(d, 1.0) * sphere_area(d)
    print(f"d={d}  quadrature={r.value:.15f}  closed form={exact:.15f}  err est={r.abs_error_estimate:.1e}")

# %%
# The mass of a beta=2 weight on the line is pi/sqrt(2); both tail maps agree.
p = RegulatorParams(beta=2.0)
for tail in ("rational", "inverse-square"):
    print(tail, regulated_loop_integral(0.0, p, tail=tail).value, math.pi / math.sqrt(2))

# %%
# Refusal: in d=4 a k^2 integrand needs 2 beta > 6.
try:
    regulated_loop_integral(2.0, RegulatorParams(beta=2.0, dim=4))
except DivergentIntegral as exc:
    print("refused:", exc)

# %%
# What the classifier predicts is visible in the partial integrals.
cutoffs = np.geomspace(1.0, 1e6, 7)
for beta in (1.0, 3.5):
    p = RegulatorParams(beta=beta, dim=4)
    v = classify_convergence(4, 2.0, p)
    print(f"beta={beta}: {v.status.value:18s}", np.array2string(partial_integrals(2.0, p, cutoffs), precision=4))
