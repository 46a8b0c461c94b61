"""
The Gaussian log-partition integral
===================================

ln Z = 1/2 int [ln 2pi - ln(1 - Omega)] d^dk needs 1 - Omega > 0.  With
eta = 0 the weight equals 1 at the origin and the mode is ill defined;
eta > 0 lifts that.  The part beyond the free ln 2pi volume term settles
once the cutoff is well into the UV.
"""

# %%
import math

from suppression.errors import IllDefinedGaussianMode
from suppression.regulator import RegulatorParams
from suppression.rg_flow import LN_2PI, log_partition, log_partition_integrand

# %%
try:
    log_partition(RegulatorParams(beta=3.0), 10.0)
except IllDefinedGaussianMode as exc:
    print("refused:", exc)

# %%
p = RegulatorParams(beta=3.0, eta=0.1)
print("integrand at k=0:", log_partition_integrand(0.0, p), " expected:", LN_2PI - math.log(0.1))

# %%
for cutoff in (10, 20, 50, 100, 200):
    r = log_partition(p, cutoff)
    print(f"cutoff={cutoff:4d}  ln Z={r.ln_z_density:12.6f}  ln(Z/Z_free)={r.ln_z_relative:.12f}")
