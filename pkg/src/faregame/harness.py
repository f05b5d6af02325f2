"""Config-driven experiments, stability diagnostics and CSV/manifest output.

Config files are YAML with the sections shown in ``configs/benchmark.yaml``::

    model: {K: 100, T: 200, r: 0.04, epsilon: 0.4, n_steps: 1000, tol: 1.0e-6, max_iters: 100}
    initial_distribution: bimodal          # or an explicit list of K+1 masses
    epsilon_sweep: [0.0, 0.4]
    stability: {N_guesses: 10, seed: 0}    # optional; may carry its own tol
    montecarlo: {n_firms: 100000, seed: 0} # optional
    output_dir: out
    workers: 1

CSV files are written in long format, one row per (t, k) cell, every float
printed with 17 significant digits so that reading them back is exact.
"""
from __future__ import annotations

import json
import platform
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .bounds import existence_bound, log10_existence_bound, uniqueness_bound
from .equilibrium import EquilibriumSolution, random_initial_guess, solve_equilibrium
from .model import ModelParams, bimodal_distribution, delta_v, initial_distribution, time_grid
from .monopoly import monopoly_constants
from .montecarlo import SimConfig, empirical_vs_ode, simulate_population

CSV_FORMAT = "%.17g"
CV_MEAN_FLOOR = 1e-10


class ConfigError(ValueError):
    pass


class NonConvergenceError(RuntimeError):
    pass


@dataclass
class StabilityConfig:
    N_guesses: int = 10
    seed: int = 0
    tol: float | None = None  # Picard tolerance for these runs; defaults to model.tol


@dataclass
class ExperimentConfig:
    model: ModelParams = field(default_factory=ModelParams)
    initial_distribution: str | list = "bimodal"
    epsilon_sweep: list = field(default_factory=list)
    stability: StabilityConfig | None = None
    montecarlo: SimConfig | None = None
    output_dir: str = "out"
    workers: int = 1
    relaxation: float = 1.0

    def initial(self) -> np.ndarray:
        spec = self.initial_distribution
        try:
            if isinstance(spec, str):
                if spec != "bimodal":
                    raise ValueError(f"unknown preset {spec!r}")
                return bimodal_distribution(self.model.K)
            return initial_distribution(spec, self.model.K)
        except ValueError as exc:
            raise ConfigError(f"initial_distribution: {exc}") from None


def _build(cls, section, name):
    if section is None:
        return None
    if not isinstance(section, dict):
        raise ConfigError(f"{name}: expected a mapping")
    known = {f.name for f in fields(cls)}
    unknown = set(section) - known
    if unknown:
        raise ConfigError(f"{name}: unknown key(s) {sorted(unknown)}")
    try:
        return cls(**section)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name}: {exc}") from None


def config_from_dict(raw: dict, check_initial: bool = True) -> ExperimentConfig:
    raw = dict(raw or {})
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown top-level key(s) {sorted(unknown)}")
    cfg = ExperimentConfig(
        model=_build(ModelParams, raw.get("model", {}), "model"),
        initial_distribution=raw.get("initial_distribution", "bimodal"),
        epsilon_sweep=list(raw.get("epsilon_sweep") or []),
        stability=_build(StabilityConfig, raw.get("stability"), "stability"),
        montecarlo=_build(SimConfig, raw.get("montecarlo"), "montecarlo"),
        output_dir=str(raw.get("output_dir", "out")),
        workers=int(raw.get("workers", 1)),
        relaxation=float(raw.get("relaxation", 1.0)),
    )
    if any(e < 0 for e in cfg.epsilon_sweep):
        raise ConfigError("epsilon_sweep: values must be >= 0")
    if cfg.workers < 1:
        raise ConfigError("workers: must be >= 1")
    if check_initial:
        cfg.initial()
    return cfg


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return config_from_dict(yaml.safe_load(fh))


# --- CSV output -------------------------------------------------------------


def _write_csv(path: Path, header, columns):
    data = np.column_stack([np.asarray(c, dtype=float).ravel() for c in columns])
    np.savetxt(path, data, fmt=CSV_FORMAT, delimiter=",", header=",".join(header), comments="", encoding="utf-8")


def read_csv(path) -> dict:
    """Columns of a CSV written by this module, keyed by header name."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
    return {name: data[:, i] for i, name in enumerate(header)}


def _long(grid, rows, first_level):
    """(t, k) index columns for a (levels, time) array in level-major order."""
    n_levels = rows.shape[0]
    k = np.repeat(np.arange(first_level, first_level + n_levels), len(grid))
    t = np.tile(grid, n_levels)
    return t, k


def write_solution(sol: EquilibriumSolution, params: ModelParams, out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    grid = time_grid(params)
    t, k = _long(grid, sol.V, 1)
    _write_csv(out / "value.csv", ["t", "k", "V", "delta_V"], [t, k, sol.V, delta_v(sol.V)])
    t, k = _long(grid, sol.m, 0)
    _write_csv(out / "distribution.csv", ["t", "k", "m", "cdf"], [t, k, sol.m, np.cumsum(sol.m, axis=0)])
    t, k = _long(grid, sol.policy.prices, 1)
    _write_csv(out / "policy.csv", ["t", "k", "p_star", "lambda_star"],
               [t, k, sol.policy.prices, sol.policy.intensities])
    _write_csv(out / "market.csv", ["t", "p_bar", "eta"], [grid, sol.p_bar, sol.eta])
    errs = np.asarray(sol.trace.errors)
    _write_csv(out / "trace.csv", ["iter", "L_error"], [np.arange(1, errs.size + 1), errs])


def _bounds_entry(params: ModelParams) -> dict:
    c1, c2 = existence_bound(params.K, params.T, params.r), uniqueness_bound(params.K)
    return {
        "C1": c1,
        "log10_C1": log10_existence_bound(params.K, params.T, params.r),
        "C2": None if np.isinf(c2) else c2,
        "epsilon_below_C1": bool(params.epsilon < c1),
        "epsilon_below_C2": bool(params.epsilon < c2),
    }


def _manifest_base(cfg: ExperimentConfig, command: str) -> dict:
    return {
        "command": command,
        "version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "config": {
            "model": asdict(cfg.model),
            "initial_distribution": cfg.initial_distribution,
            "epsilon_sweep": cfg.epsilon_sweep,
            "stability": None if cfg.stability is None else asdict(cfg.stability),
            "montecarlo": None if cfg.montecarlo is None else asdict(cfg.montecarlo),
            "workers": cfg.workers,
            "relaxation": cfg.relaxation,
        },
    }


def _write_manifest(out: Path, manifest: dict) -> None:
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "manifest.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _solve_one(args):
    params, M, relaxation = args
    return solve_equilibrium(params, M, relaxation=relaxation)


def _map(func, jobs, workers):
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(func, jobs))
    return [func(job) for job in jobs]


def run_experiment(cfg: ExperimentConfig, command: str = "sweep") -> dict:
    """Solve the equilibrium for every epsilon in the sweep and write results.

    Each epsilon gets a subdirectory ``eps_<value>`` with the solution CSVs;
    ``manifest.json`` at the top records parameters, traces, bounds and
    wall time.  Returns the manifest.
    """
    start = time.perf_counter()
    out = Path(cfg.output_dir)
    M = cfg.initial()
    params = [replace(cfg.model, epsilon=float(e)) for e in cfg.epsilon_sweep]
    sols = _map(_solve_one, [(p, M, cfg.relaxation) for p in params], cfg.workers)

    manifest = _manifest_base(cfg, command)
    runs = []
    for p, sol in zip(params, sols):
        sub = out / f"eps_{p.epsilon:g}"
        write_solution(sol, p, sub)
        runs.append({
            "epsilon": p.epsilon,
            "directory": sub.name,
            "converged": sol.trace.converged,
            "iterations": sol.trace.iterations,
            "errors": sol.trace.errors,
            "bounds": _bounds_entry(p),
        })
    manifest["runs"] = runs
    manifest["converged"] = all(r["converged"] for r in runs)
    manifest["wall_time_s"] = time.perf_counter() - start
    _write_manifest(out, manifest)
    return manifest


# --- stability --------------------------------------------------------------


@dataclass
class StabilityReport:
    cv_V: float
    cv_pbar: float
    cv_m: float
    N: int
    iterations: list = field(default_factory=list)


def coefficient_of_variation(samples, mean_floor: float = CV_MEAN_FLOOR) -> float:
    """Largest ratio of standard deviation (1/N normalisation) to mean across samples.

    ``samples`` stacks N runs along axis 0; cells whose mean magnitude is
    below ``mean_floor`` are skipped.  Returns 0 when no cell qualifies.
    """
    q = np.asarray(samples, dtype=float)
    mean = q.mean(axis=0)
    std = q.std(axis=0)
    keep = np.abs(mean) >= mean_floor
    if not np.any(keep):
        return 0.0
    return float(np.max(std[keep] / np.abs(mean[keep])))


def _stability_one(args):
    params, M, seed, relaxation = args
    sol = solve_equilibrium(params, M, random_initial_guess(params, M, seed), relaxation=relaxation)
    return seed, sol


def stability_experiment(cfg: ExperimentConfig) -> StabilityReport:
    """CV of V, p_bar and m across equilibria started from random guesses.

    Run i uses the guess seeded by ``(stability.seed, i)``.  Raises
    :class:`NonConvergenceError` naming the seed if any run fails to converge.
    """
    if cfg.stability is None:
        raise ConfigError("stability: section missing")
    st = cfg.stability
    params = cfg.model if st.tol is None else replace(cfg.model, tol=st.tol)
    M = cfg.initial()
    jobs = [(params, M, (st.seed, i), cfg.relaxation) for i in range(st.N_guesses)]
    results = _map(_stability_one, jobs, cfg.workers)
    for seed, sol in results:
        if not sol.trace.converged:
            raise NonConvergenceError(f"stability run with seed {seed} did not converge")
    sols = [sol for _, sol in results]
    return StabilityReport(
        cv_V=coefficient_of_variation([s.V for s in sols]),
        cv_pbar=coefficient_of_variation([s.p_bar for s in sols]),
        cv_m=coefficient_of_variation([s.m[1:] for s in sols]),
        N=len(sols),
        iterations=[s.trace.iterations for s in sols],
    )


def run_stability(cfg: ExperimentConfig) -> StabilityReport:
    start = time.perf_counter()
    out = Path(cfg.output_dir)
    report = stability_experiment(cfg)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "stability.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("quantity,cv\n")
        for name in ("V", "p_bar", "m"):
            value = {"V": report.cv_V, "p_bar": report.cv_pbar, "m": report.cv_m}[name]
            fh.write(f"{name},{CSV_FORMAT % value}\n")
    manifest = _manifest_base(cfg, "stability")
    manifest["stability"] = asdict(report)
    manifest["cv_mean_floor"] = CV_MEAN_FLOOR
    manifest["converged"] = True
    manifest["wall_time_s"] = time.perf_counter() - start
    _write_manifest(out, manifest)
    return report


# --- Monte Carlo ------------------------------------------------------------


def run_montecarlo(cfg: ExperimentConfig) -> dict:
    """Equilibrium at ``model.epsilon`` versus a simulated population."""
    start = time.perf_counter()
    out = Path(cfg.output_dir)
    sim = cfg.montecarlo or SimConfig()
    M = cfg.initial()
    sol = solve_equilibrium(cfg.model, M, relaxation=cfg.relaxation)
    mc = simulate_population(cfg.model, sol.policy, sol.p_bar, M, sim)
    grid = time_grid(cfg.model)
    t, k = _long(grid, sol.m, 0)
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "montecarlo.csv", ["t", "k", "m_ode", "m_empirical", "abs_dev"],
               [t, k, sol.m, mc, np.abs(mc - sol.m)])
    manifest = _manifest_base(cfg, "montecarlo")
    manifest["converged"] = sol.trace.converged
    manifest["iterations"] = sol.trace.iterations
    manifest["sup_deviation"] = empirical_vs_ode(mc, sol.m)
    manifest["bounds"] = _bounds_entry(cfg.model)
    manifest["wall_time_s"] = time.perf_counter() - start
    _write_manifest(out, manifest)
    return manifest


# --- bounds -----------------------------------------------------------------


def inspect_bounds(K: int, T: float, r: float) -> str:
    """Human-readable summary of the interaction-strength constants."""
    if K < 1 or not T > 0 or not r > 0:
        raise ValueError("need K >= 1, T > 0, r > 0")
    c2 = uniqueness_bound(K)
    lines = [
        f"K = {K}, T = {T:g}, r = {r:g}",
        f"C1 (existence)  = {existence_bound(K, T, r):.6e}  (log10 C1 = {log10_existence_bound(K, T, r):.4f})",
        "C2 (uniqueness) = unbounded" if np.isinf(c2) else f"C2 (uniqueness) = {c2:.6f}",
        f"rho             = {monopoly_constants(r).rho:.6f}",
    ]
    return "\n".join(lines)
