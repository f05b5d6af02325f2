"""
Theoretical interaction bounds and finite markets
=================================================
"""
import numpy as np

from faregame import demand_coefficients, finite_player_coefficients
from faregame.harness import inspect_bounds

print(inspect_bounds(100, 200.0, 0.04))
print()
print(inspect_bounds(2, 1.0, 1.0))
print()
print(inspect_bounds(1, 1.0, 1.0))

# with N sellers, n of them active, demand coefficients approach the continuum ones
eta, eps = 0.37, 0.4
a, c = demand_coefficients(eta, eps)
print(f"\ncontinuum: a={a:.8f}  b=1  c={c:.8f}")
for N in (10, 100, 10_000, 1_000_000):
    n = int(round(eta * N))
    a_n, b_n, c_n = finite_player_coefficients(n, N, eps)
    err = max(abs(a_n - a), abs(b_n - 1), abs(c_n - c))
    print(f"N={N:>9}: a={a_n:.8f}  b={b_n:.8f}  c={c_n:.8f}  gap {err:.1e}")
