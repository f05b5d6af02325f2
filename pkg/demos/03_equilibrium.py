"""
Mean field equilibrium and the effect of competition
====================================================

Benchmark market: 100 inventory levels, 200 days, two groups of sellers
holding 20-24 and 50-54 units.  Each equilibrium is found by alternating a
backward value solve and a forward distribution solve.
"""
import warnings

import numpy as np

from faregame import ModelParams, bimodal_distribution, solve_equilibrium, time_grid
from faregame.model import delta_v

warnings.simplefilter("ignore")  # epsilon above the proven uniqueness range is expected here
M = bimodal_distribution(100)
sols = {}
for eps in (0.0, 0.1, 0.4):
    sol = solve_equilibrium(ModelParams(epsilon=eps), M)
    sols[eps] = sol
    errs = ", ".join(f"{e:.1e}" for e in sol.trace.errors)
    print(f"epsilon={eps}: {sol.trace.iterations} iterations  L = [{errs}]")

t = time_grid(ModelParams())
print("\n   t    p_bar(0)  p_bar(0.4)   eta(0)  eta(0.4)")
for s in (0, 50, 100, 150, 190, 199):
    i = int(round(s / 0.2))
    print(f"{s:4d}  {sols[0.0].p_bar[i]:9.5f}  {sols[0.4].p_bar[i]:9.5f}  {sols[0.0].eta[i]:7.4f}  {sols[0.4].eta[i]:7.4f}")

# competition lowers prices and keeps more sellers in the market
print(f"\np_bar falls with competition on (0, T): {np.all(sols[0.4].p_bar[1:-1] <= sols[0.0].p_bar[1:-1])}")
print(f"eta rises with competition:             {np.all(sols[0.4].eta >= sols[0.0].eta - 1e-12)}")

# diminishing returns to extra inventory
dv0 = delta_v(sols[0.4].V)[:, 0]
print(f"marginal value at t=0 decreasing in k:   {np.all(np.diff(dv0) <= 0)}")
