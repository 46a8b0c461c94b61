"""
Norms under the weighted measure
================================

With dmu = Omega dk and Omega <= 1 the weighted L2 norm never exceeds the
plain one.  Tail masses show how much of a function lives beyond a cutoff.
"""

# %%
import numpy as np

from suppression.regulator import RegulatorParams, UnitWeight
from suppression.weighted_measure import (
    SampledFunction,
    compact_bump,
    embedding_diagnostics,
    gaussian_bump,
    total_mass,
    weighted_distance,
    weighted_inner_product,
    weighted_lp_norm,
)

params = RegulatorParams(beta=1.0, eta=0.05)

# %%
print("total mass:", total_mass(params).value)

# %%
f = gaussian_bump(width=1.0)
print("||f||_L2    =", weighted_lp_norm(f, 2, UnitWeight()))
print("||f||_Omega =", weighted_lp_norm(f, 2, params))
diag = embedding_diagnostics(f, params, [2, 4, 8])
for K, m in diag.tail_mass.items():
    print(f"  mass beyond K={K:g}: {m:.3e}")

# %%
# Sampled data with a declared tail: here |f| ~ k^-2 beyond the last node.
nodes = np.linspace(0, 5, 26)
g = SampledFunction.from_samples(nodes, 1 / (1 + nodes**2), tail_exponent=-2.0, description="lorentzian")
print("<f, g>_Omega =", weighted_inner_product(f, g, params))
print("d_Omega(f, g) =", weighted_distance(f, g, params))

# %%
# Compact support: no mass beyond the support radius.
print(embedding_diagnostics(compact_bump(1.5), params, [1.0, 1.5, 3.0]).tail_mass)

# %%
# Raising Lambda raises Omega pointwise, so norms grow with the cutoff.
for lam in (0.25, 1.0, 4.0):
    print(f"Lambda={lam:4}:  ||f||_Omega = {weighted_lp_norm(f, 2, RegulatorParams(beta=1.0, lam=lam)):.6f}")
