"""
Running the cutoff
==================

At fixed k, Omega grows as Lambda increases.  The exact derivative
Lambda dOmega/dLambda is compared with finite differences and with a
commonly quoted closed form that gets the sign wrong.
"""

# %%
import numpy as np

from suppression.regulator import RegulatorParams
from suppression.rg_flow import (
    derivative_discrepancy,
    domega_dlambda_analytic,
    domega_dlog_lambda_fd,
    flow_trajectory,
    ricci_flow_eval,
)

p = RegulatorParams(beta=1.0, eta=0.0)

# %%
for k in (0.5, 1.0, 2.0):
    print(f"k={k}: exact {domega_dlambda_analytic(k, p):+.10f}   finite difference {domega_dlog_lambda_fd(k, p):+.10f}")

# %%
print(derivative_discrepancy(1.0, p))

# %%
# A trajectory in Lambda; integrating the derivative recovers the change in Omega.
tr = flow_trajectory(1.0, RegulatorParams(beta=2.0, eta=0.1), 0.1, 10.0, 1000)
print("integrated:", tr.integrated_change, " endpoints:", tr.endpoint_change, " rel err:", tr.relative_error)
print(tr.to_csv().splitlines()[:4])

# %%
# The curvature expression is negative and scales like Lambda^-3.
lams = np.geomspace(0.5, 8, 5)
print([ricci_flow_eval(1.0, p.with_lambda(L)) for L in lams])
