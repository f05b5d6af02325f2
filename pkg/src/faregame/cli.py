"""Command line entry point: ``faregame {solve,sweep,stability,montecarlo,bounds}``.

Every subcommand reads ``--config`` (YAML) when given; flags override the
file and are named after the config keys.  Exit status is 0 on success,
2 when an equilibrium fails to converge and 1 on invalid input.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

import yaml

from .harness import (
    ConfigError,
    NonConvergenceError,
    config_from_dict,
    inspect_bounds,
    run_experiment,
    run_montecarlo,
    run_stability,
)

EXIT_OK, EXIT_INVALID, EXIT_NONCONVERGED = 0, 1, 2

MODEL_FLAGS = {"K": int, "T": float, "r": float, "epsilon": float, "n_steps": int, "tol": float, "max_iters": int}


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML experiment config")
    common.add_argument("--seed", type=int, help="master seed (stability guesses, Monte Carlo)")
    common.add_argument("--out", dest="output_dir", help="output directory")
    common.add_argument("--workers", type=int, help="parallel worker processes")
    common.add_argument("--initial-distribution", dest="initial_distribution",
                        help="'bimodal' or comma-separated K+1 masses")
    common.add_argument("-v", "--verbose", action="store_true")
    for name, kind in MODEL_FLAGS.items():
        common.add_argument(f"--{name.replace('_', '-')}", dest=name, type=kind)

    p = argparse.ArgumentParser(prog="faregame", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="single equilibrium at model.epsilon")
    sweep = sub.add_parser("sweep", parents=[common], help="equilibria over epsilon_sweep")
    sweep.add_argument("--epsilon-sweep", dest="epsilon_sweep",
                       type=lambda s: [float(x) for x in s.split(",") if x.strip()],
                       help="comma-separated epsilons")
    stab = sub.add_parser("stability", parents=[common], help="CV across random initial guesses")
    stab.add_argument("--N-guesses", dest="N_guesses", type=int)
    stab.add_argument("--stability-tol", dest="stability_tol", type=float)
    mc = sub.add_parser("montecarlo", parents=[common], help="simulated population vs Kolmogorov flow")
    mc.add_argument("--n-firms", dest="n_firms", type=int)
    mc.add_argument("--dt-sim", dest="dt_sim", type=float)
    mc.add_argument("--method", choices=["thinning", "bernoulli"])
    sub.add_parser("bounds", parents=[common], help="print C1, C2 and rho")
    return p


def _merged_config(args) -> dict:
    raw = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            raw = yaml.safe_load(fh) or {}
    model = dict(raw.get("model") or {})
    for name in MODEL_FLAGS:
        if getattr(args, name) is not None:
            model[name] = getattr(args, name)
    raw["model"] = model
    if args.output_dir is not None:
        raw["output_dir"] = args.output_dir
    if args.workers is not None:
        raw["workers"] = args.workers
    if args.initial_distribution is not None:
        spec = args.initial_distribution
        raw["initial_distribution"] = spec if spec == "bimodal" else [float(x) for x in spec.split(",")]

    if args.command == "sweep" and args.epsilon_sweep is not None:
        raw["epsilon_sweep"] = args.epsilon_sweep
    if args.command == "stability":
        st = dict(raw.get("stability") or {})
        for key, val in (("N_guesses", args.N_guesses), ("seed", args.seed), ("tol", args.stability_tol)):
            if val is not None:
                st[key] = val
        raw["stability"] = st
    if args.command == "montecarlo":
        mc = dict(raw.get("montecarlo") or {})
        for key, val in (("n_firms", args.n_firms), ("seed", args.seed), ("dt_sim", args.dt_sim),
                         ("method", args.method)):
            if val is not None:
                mc[key] = val
        raw["montecarlo"] = mc
    return raw


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = config_from_dict(_merged_config(args), check_initial=args.command != "bounds")
        if args.command == "bounds":
            m = cfg.model
            print(inspect_bounds(m.K, m.T, m.r))
            return EXIT_OK
        if args.command == "solve":
            cfg = replace(cfg, epsilon_sweep=[cfg.model.epsilon])
            manifest = run_experiment(cfg, command="solve")
        elif args.command == "sweep":
            manifest = run_experiment(cfg, command="sweep")
        elif args.command == "stability":
            report = run_stability(cfg)
            print(f"CV_V = {report.cv_V:.3e}  CV_p_bar = {report.cv_pbar:.3e}  CV_m = {report.cv_m:.3e}  (N = {report.N})")
            return EXIT_OK
        else:
            manifest = run_montecarlo(cfg)
            print(f"sup |m_empirical - m_ode| = {manifest['sup_deviation']:.3e}")
    except (ConfigError, ValueError, OSError, yaml.YAMLError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NonConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED

    for run in manifest.get("runs", []):
        status = "converged" if run["converged"] else "NOT converged"
        print(f"epsilon={run['epsilon']:g}: {status} after {run['iterations']} iterations -> {run['directory']}")
    return EXIT_OK if manifest["converged"] else EXIT_NONCONVERGED


if __name__ == "__main__":
    sys.exit(main())
