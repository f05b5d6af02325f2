"""
Independent sellers (epsilon = 0)
=================================

Without interaction every seller is a monopolist.  The value of the last
unit has a closed form; the full ladder is solved level by level and the
population flow by quadrature.  These serve as reference solutions.
"""
import numpy as np

from faregame import (
    ModelParams,
    bimodal_distribution,
    check_proposition1,
    delta_v1_closed_form,
    monopoly_constants,
    solve_hjb,
    solve_kolmogorov,
    solve_monopoly_distribution,
    solve_monopoly_value,
    time_grid,
)
from faregame.model import delta_v
from faregame.monopoly import monopoly_intensities

params = ModelParams(epsilon=0.0)
t = time_grid(params)
c = monopoly_constants(params.r)
print(f"r={params.r}: rho={c.rho:.7f}  A1={c.A1:.7f}  B1={c.B1:.7f}")

V = solve_monopoly_value(params)
print("\nmarginal value of the last unit")
for s in (0.0, 100.0, 190.0, 199.0, 200.0):
    i = int(round(s / params.dt))
    print(f"  t={s:5.1f}  solver {V[0, i]:.10f}  closed form {delta_v1_closed_form(s, params):.10f}")

# the general equilibrium solver must reproduce this when epsilon = 0
M = bimodal_distribution(params.K)
V_hjb = solve_hjb(params, np.full(t.size, 0.5), np.repeat(M[:, None], t.size, axis=1))
print(f"\nsup |coupled solver - monopoly| = {np.abs(V_hjb - V).max():.2e}")

lam = monopoly_intensities(V)
m_quad = solve_monopoly_distribution(params, M, lam)
m_ode = solve_kolmogorov(params, lam, M)
print(f"sup |quadrature flow - ODE flow| = {np.abs(m_quad - m_ode).max():.2e}")

dv0 = delta_v(V)[:, 0]
print(f"\nmarginal values at t=0 for k=1,10,50,100: {dv0[[0, 9, 49, 99]].round(5)}")
print(f"sale rates stay in [{lam.min():.6f}, {lam.max():.6f}]")
report = check_proposition1(V, m_quad, params)
print(f"worst bound violation {report.worst():.1e}, all bounds hold: {report.ok()}")
