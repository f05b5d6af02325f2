"""
Does the equilibrium depend on the starting guess?
==================================================

Start the iteration from random mean-price paths and random distribution
paths, then compare the limits through the largest coefficient of variation
across runs.  A smaller market keeps this quick; the acceptance suite runs
the full benchmark.
"""
import warnings

from faregame.harness import config_from_dict, stability_experiment

warnings.simplefilter("ignore")

M = [0.0] * 21
for k in (4, 5, 6, 12, 13, 14):
    M[k] = 1 / 6
base = {"model": {"K": 20, "T": 50.0, "n_steps": 250, "epsilon": 0.4}, "initial_distribution": M}

for tol in (1e-6, 1e-10, 1e-14):
    cfg = config_from_dict({**base, "stability": {"N_guesses": 5, "seed": 0, "tol": tol}})
    rep = stability_experiment(cfg)
    print(f"stop at L < {tol:g}: CV_V={rep.cv_V:.1e}  CV_p_bar={rep.cv_pbar:.1e}  CV_m={rep.cv_m:.1e}"
          f"  iterations {rep.iterations}")
# the spread across guesses tracks the stopping tolerance, not a second equilibrium
