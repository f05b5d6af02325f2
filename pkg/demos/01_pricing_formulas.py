"""
Pricing formulas of the linear demand model
===========================================

A seller facing mean market price p_bar, with a fraction eta of sellers still
active and interaction strength epsilon, sells at rate (a - p + c p_bar)^+.
"""
import numpy as np

from faregame import demand_coefficients, equilibrium_mean_price, intensity, mean_price, optimal_price

# a shrinks and c grows as more competitors are active
for eta in (0.0, 0.5, 1.0):
    a, c = demand_coefficients(eta, 0.4)
    print(f"eta={eta:.1f}  a={a:.6f}  c={c:.6f}  a+c={a + c:.1f}")

# the best price trades a sale now against the marginal value of keeping the unit
dv, p_bar, eta, eps = 0.3, 0.6, 1.0, 0.4
p_star = optimal_price(dv, p_bar, eta, eps)
print(f"\noptimal price {p_star:.7f}, sale rate there {intensity(p_star, p_bar, eta, eps):.7f}")

# brute-force check on a price grid
prices = np.linspace(0, 2, 20001)
revenue = intensity(prices, p_bar, eta, eps) * (prices - dv)
print(f"grid argmax      {prices[np.argmax(revenue)]:.7f}")

# when every seller quotes its best price, the average has a closed form
m = np.array([0.2, 0.3, 0.5])          # sold out, one unit, two units
dvs = np.array([0.45, 0.25])
pb = equilibrium_mean_price(m, dvs, eps)
quotes = optimal_price(dvs, pb, m[1:].sum(), eps)
print(f"\nclosed-form mean price {pb:.12f}")
print(f"average of the quotes  {mean_price(m, quotes):.12f}")
