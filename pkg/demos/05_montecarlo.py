"""
Simulated sellers versus the distribution equation
==================================================

Freeze the equilibrium policy and let a large population of independent
sellers trade by it.  The empirical inventory distribution should match the
forward equation up to sampling noise that shrinks like one over the square
root of the population.
"""
import warnings

from faregame import ModelParams, SimConfig, bimodal_distribution, empirical_vs_ode, simulate_population, solve_equilibrium

warnings.simplefilter("ignore")
params = ModelParams(epsilon=0.4)
M = bimodal_distribution(100)
sol = solve_equilibrium(params, M)

for method in ("thinning", "bernoulli"):
    print(f"\n{method}:")
    for n in (25_000, 100_000, 400_000):
        mc = simulate_population(params, sol.policy, sol.p_bar, M, SimConfig(n_firms=n, seed=0, method=method))
        print(f"  {n:7d} sellers: sup deviation {empirical_vs_ode(mc, sol.m):.2e}")
# the fixed-step scheme lets a seller sell at most once per step, which leaves a
# bias of a few 1e-3 that more sellers cannot remove
