"""Mean field equilibrium of dynamic ticket pricing under intensity control."""
from .model import (
    DegenerateMarketError,
    ModelParams,
    Policy,
    active_fraction,
    bimodal_distribution,
    demand_coefficients,
    equilibrium_mean_price,
    initial_distribution,
    intensity,
    mean_price,
    optimal_price,
    phi_eps,
    time_grid,
)
from .bounds import existence_bound, finite_player_coefficients, uniqueness_bound
from .hjb import extract_policy, solve_hjb
from .kolmogorov import solve_kolmogorov
from .monopoly import (
    check_proposition1,
    delta_v1_closed_form,
    monopoly_constants,
    solve_monopoly_distribution,
    solve_monopoly_value,
)
from .equilibrium import (
    EquilibriumSolution,
    IterationTrace,
    default_initial_guess,
    distance,
    random_initial_guess,
    solve_equilibrium,
)
from .montecarlo import SimConfig, empirical_vs_ode, simulate_population

__version__ = "0.1.0"
