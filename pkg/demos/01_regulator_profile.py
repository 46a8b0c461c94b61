"""
The suppression weight and its admissibility
============================================

Omega(k, Lambda) is close to 1 below the cutoff and falls off like
(Lambda/k)^(2 beta) above it.  A positive eta subtracts an exponential
bump near the origin, which is only safe while the pointwise margin
stays non-negative.
"""

# %%
import numpy as np

from suppression.regulator import (
    RegulatorParams,
    check_admissibility,
    classify_regime,
    omega_eval,
    omega_uv_asymptote,
)

# %%
# A pure power-law weight.  Omega(Lambda) = 1/2 for every beta.
p = RegulatorParams(beta=1.5, lam=2.0)
for k in (0.0, 0.2, 2.0, 20.0, 200.0):
    print(f"k={k:7.1f}  Omega={omega_eval(k, p):.6e}  regime={classify_regime(k, p).value}")

# %%
# Far above the cutoff the closed-form asymptote takes over.
for k in (20.0, 200.0, 2000.0):
    ratio = omega_eval(k, p) / omega_uv_asymptote(k, p)
    print(f"k/Lambda={k / p.lam:6.0f}  Omega / asymptote - 1 = {ratio - 1:+.2e}")

# %%
# Turning on eta.  Small values keep the weight inside (0, 1]; steep power
# laws combined with eta can push it below zero in the transition region.
for beta, eta in ((1.0, 0.1), (3.0, 0.1), (6.0, 0.1), (1.0, 1.5)):
    rep = check_admissibility(RegulatorParams(beta=beta, eta=eta))
    print(f"beta={beta:3.1f} eta={eta:3.1f}  holds={rep.holds!s:5}  "
          f"margin={rep.margin:+.3e} at k={rep.worst_k:.3g}  monotone={rep.monotone}")

# %%
# The profile on a log grid, ready for plotting elsewhere.
k = np.geomspace(1e-2, 1e2, 9)
print(np.column_stack([k, omega_eval(k, RegulatorParams(beta=2.0, eta=0.1))]))
