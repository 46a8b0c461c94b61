"""
A weakly singular kernel operator
=================================

K(k, k') = Omega(k) Omega(k') |k - k'|^(-alpha) on the momentum line.
Its Hilbert-Schmidt norm is finite for 2 alpha < 1 and enough decay; the
Nystrom matrix reproduces it, and its eigenvalues give the spectrum.
"""

# %%
import math

import numpy as np
from scipy import special

from suppression.operators import (
    KernelSpec,
    eigen_spectrum,
    hs_norm_direct,
    modified_laplacian_spectrum,
    nystrom_discretize,
    spectral_gap,
)
from suppression.regulator import GaussianWeight, RegulatorParams

# %%
# Gaussian test weight: the squared norm has a closed form.
kern = KernelSpec(0.25, GaussianWeight(gamma=1.0))
exact = math.sqrt(math.pi / 2) * 2**-0.5 * special.gamma(0.25)
print("direct:", hs_norm_direct(kern).value, " closed form:", exact)

# %%
# Frobenius norms of the Nystrom matrix close in on it.
for n in (32, 64, 128, 256):
    opr = nystrom_discretize(kern, n)
    print(f"n={n:4d}  ||M||_F^2 = {opr.frobenius_norm**2:.8f}  gap = {abs(opr.frobenius_norm**2 - exact):.2e}")

# %%
# Leading eigenvalues, and the sum of their magnitudes.  The kernel is
# positive definite with an infinite trace, so that sum keeps growing as
# the grid is refined.
for n in (64, 128, 256):
    rep = eigen_spectrum(nystrom_discretize(kern, n))
    print(f"n={n:4d}  top: {np.array2string(rep.eigenvalues[:4], precision=5)}  "
          f"sum|lambda| = {rep.trace_norm_estimate:.4f}")

# %%
# A power-law regulator works the same way.
power = KernelSpec(0.25, RegulatorParams(beta=1.0))
print("power-law weight, HS^2 =", hs_norm_direct(power).value)

# %%
# Modified Laplacian k^2 exp(-gamma k^2): a single turning point.
k, lam = modified_laplacian_spectrum(GaussianWeight(gamma=4.0), np.linspace(0, 2, 9))
print(np.column_stack([k, lam]))
print("k*, lambda_max =", spectral_gap(4.0))
