"""Experiment harness: synthetic instances, noise, parameter sweeps, reports.

Protocols follow the benchmark conventions used throughout: standard normal
matrices with a k-sparse standard normal ground truth, relative-error
stopping at 1e-6 with a 200000-iteration budget, and per-trial RNG streams
derived from a master seed so that every report is reproducible byte for
byte. All CSV output uses a header row, LF line endings, and floats with 17
significant digits.
"""

from __future__ import annotations

import csv
import json
import os
import time
import zlib
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bregman import StepMode
from .diagnostics import density, smallest_nonzero_singular_value
from .errors import ConfigError, InvalidSparsityError, ZeroRowError
from .linsys import LinearSystem, normalize_rows
from .matrixmarket import read_matrix_market
from .solvers import IterationTrace, RunStatus, SolverSpec, StoppingRule, run

# grid and candidate values for the standard sweep protocols
LAMBDA_CANDIDATES = (0.01, 0.1, 1.0, 5.0, 10.0)
DEFAULT_M_GRID = tuple(range(140, 301, 20))
DEFAULT_K_GRID = tuple(range(5, 31, 5))
BETA_CANDIDATE_FRACTIONS = ("1", "m/4", "m/2", "m")

_METHOD_IDS = {"rk": 0, "srk": 1, "sskm": 2}
_MODE_IDS = {"inexact": 0, "exact": 1}


@dataclass(frozen=True)
class ExperimentConfig:
    """Knobs for one experiment; mirrored one-to-one by the JSON config file."""

    m: int = 300
    n: int = 200
    k: int = 5
    lam: float = 1.0
    beta: int | str = "m/2"
    step_mode: str = "both"  # "exact", "inexact", or "both"
    methods: tuple[str, ...] = ("srk", "sskm")
    noise_level: float = 0.0
    trials: int = 100
    master_seed: int = 0
    mse_target: float | None = 1e-6
    max_iters: int = 200_000
    epsilon: float | None = None
    out_dir: str = "out"
    m_grid: tuple[int, ...] | None = None
    k_grid: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.k > self.n or self.k < 1:
            raise ConfigError(f"sparsity k={self.k} outside [1, n={self.n}]")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.noise_level < 0:
            raise ConfigError("noise_level must be nonnegative")
        if self.step_mode not in ("exact", "inexact", "both"):
            raise ConfigError(f"step_mode must be exact/inexact/both, got {self.step_mode!r}")
        for name in self.methods:
            if name not in _METHOD_IDS:
                raise ConfigError(f"unknown method {name!r}")

    def grid(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return (
            tuple(self.m_grid) if self.m_grid else DEFAULT_M_GRID,
            tuple(self.k_grid) if self.k_grid else DEFAULT_K_GRID,
        )


_CONFIG_KEYS = {
    "m": "m",
    "n": "n",
    "k": "k",
    "lambda": "lam",
    "beta": "beta",
    "step_mode": "step_mode",
    "methods": "methods",
    "noise_level": "noise_level",
    "trials": "trials",
    "master_seed": "master_seed",
    "mse_target": "mse_target",
    "max_iters": "max_iters",
    "epsilon": "epsilon",
    "out_dir": "out_dir",
    "m_grid": "m_grid",
    "k_grid": "k_grid",
}


def load_config(path) -> ExperimentConfig:
    """Read a flat JSON config file; unknown keys are errors."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    kwargs = {}
    for key, value in raw.items():
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        name = _CONFIG_KEYS[key]
        if name in ("methods", "m_grid", "k_grid") and value is not None:
            value = tuple(value)
        kwargs[name] = value
    try:
        return ExperimentConfig(**kwargs)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def resolve_beta(beta: int | str, m: int) -> int:
    """Turn a beta spec (int, or one of '1', 'm', 'm/2', 'm/4') into a count."""
    if isinstance(beta, str):
        spec = beta.strip().lower().replace(" ", "")
        if spec == "m":
            value = m
        elif spec in ("m/2", "m/4"):
            value = m // int(spec[2:])
        else:
            try:
                value = int(spec)
            except ValueError:
                raise ConfigError(f"bad beta spec {beta!r}") from None
    else:
        value = int(beta)
    if not 1 <= value <= m:
        raise ConfigError(f"beta={value} outside [1, m={m}]")
    return value


def child_seed(master_seed: int, *parts: int) -> int:
    """Deterministic 64-bit seed derived from the master seed and context ids."""
    ss = np.random.SeedSequence([int(master_seed), *(int(p) for p in parts)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def child_rng(master_seed: int, *parts: int) -> np.random.Generator:
    return np.random.default_rng(child_seed(master_seed, *parts))


def gaussian_instance(
    m: int, n: int, k: int, rng: np.random.Generator
) -> tuple[LinearSystem, np.ndarray, np.ndarray]:
    """Standard normal matrix, k-sparse standard normal truth, consistent rhs.

    Returns the row-normalized system, the ground truth, and the raw
    (pre-normalization) right-hand side.
    """
    if not 1 <= k <= n:
        raise InvalidSparsityError(f"k={k} outside [1, n={n}]")
    a_raw = rng.standard_normal((m, n))
    support = rng.choice(n, size=k, replace=False)
    x_hat = np.zeros(n)
    x_hat[support] = rng.standard_normal(k)
    b_raw = a_raw @ x_hat
    return normalize_rows(a_raw, b_raw), x_hat, b_raw


def add_noise(b, level: float, rng: np.random.Generator) -> tuple[np.ndarray, float, float]:
    """Add a Gaussian-direction perturbation with exact relative 2-norm ``level``.

    Returns (noisy rhs, ||e||_2, ||e||_inf); the 2-norm equals
    level * ||b||_2 by construction, so the noise magnitude is known exactly.
    """
    b = np.asarray(b, dtype=float)
    if level == 0.0:
        return b.copy(), 0.0, 0.0
    e = rng.standard_normal(b.shape[0])
    e *= level * np.linalg.norm(b) / np.linalg.norm(e)
    return b + e, float(np.linalg.norm(e)), float(np.abs(e).max())


@dataclass(frozen=True)
class TrialResult:
    trial: int
    seed: int
    final_mse: float
    iterations: int
    wall_time: float
    converged: bool
    trace: IterationTrace


def _solver_spec(
    method: str,
    mode: str,
    lam: float,
    beta: int,
    seed: int,
    stop: StoppingRule,
) -> SolverSpec:
    if method == "rk":
        return SolverSpec.rk(seed=seed, stop=stop)
    step = StepMode.EXACT if mode == "exact" else StepMode.INEXACT
    if method == "srk":
        return SolverSpec.srk(lam=lam, step_mode=step, seed=seed, stop=stop)
    return SolverSpec.sskm(lam=lam, beta=beta, step_mode=step, seed=seed, stop=stop)


def run_trial(
    system: LinearSystem,
    x_hat: np.ndarray,
    spec: SolverSpec,
    trial: int,
) -> TrialResult:
    """One timed solve; the clock covers the iteration loop only."""
    start = time.perf_counter()
    _, trace = run(system, spec, ground_truth=x_hat)
    elapsed = time.perf_counter() - start
    return TrialResult(
        trial=trial,
        seed=spec.sampler.seed,
        final_mse=trace.final_mse,
        iterations=trace.iterations,
        wall_time=elapsed,
        converged=trace.status is RunStatus.CONVERGED,
        trace=trace,
    )


def _variants(config: ExperimentConfig) -> list[tuple[str, str]]:
    modes = ("exact", "inexact") if config.step_mode == "both" else (config.step_mode,)
    out = []
    for method in config.methods:
        if method == "rk":
            out.append(("rk", "inexact"))
        else:
            out.extend((method, mode) for mode in modes)
    return out


# ---------------------------------------------------------------------------
# CSV output
# ---------------------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_csv(path, header: Sequence[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


TRACE_HEADER = ("experiment_id", "trial", "k_iter", "mse", "residual2", "bregman", "i_k", "t_k")


def trace_rows(experiment_id: str, trial: int, trace: IterationTrace):
    mse_col = trace.mse if trace.mse is not None else np.full(trace.iterations, np.nan)
    breg_col = (
        trace.bregman_to_truth
        if trace.bregman_to_truth is not None
        else np.full(trace.iterations, np.nan)
    )
    for k in range(trace.iterations):
        yield (
            experiment_id,
            trial,
            k,
            float(mse_col[k]),
            float(trace.residual_norm2[k]),
            float(breg_col[k]),
            int(trace.chosen[k]),
            float(trace.step[k]),
        )


def _checkpoint_iterates(max_iters: int, limit: int = 2000) -> np.ndarray:
    """Deterministic 1-based iterate checkpoints, log-spaced once runs get long."""
    if max_iters <= limit:
        return np.arange(1, max_iters + 1)
    pts = np.unique(np.round(np.logspace(0, np.log10(max_iters), limit)).astype(int))
    return pts[pts >= 1]


def _mse_at(trace: IterationTrace, iterate: int) -> float:
    """MSE at iterate ``iterate`` (1-based), padding past the end of a run."""
    if trace.iterations == 0:
        return float("nan")
    idx = min(iterate, trace.iterations) - 1
    return float(trace.mse[idx])


# ---------------------------------------------------------------------------
# Experiment drivers
# ---------------------------------------------------------------------------


def _stopping(config: ExperimentConfig) -> StoppingRule:
    return StoppingRule(
        epsilon=config.epsilon,
        max_iters=config.max_iters,
        mse_target=config.mse_target,
    )


def sweep_lambda(config: ExperimentConfig) -> dict:
    """Best regularization weight per (m, k) grid cell, by mean final MSE."""
    m_grid, k_grid = config.grid()
    stop = _stopping(config)
    rows = []
    for m in m_grid:
        beta = resolve_beta(config.beta, m)
        for k in k_grid:
            means = []
            for lam_idx, lam in enumerate(LAMBDA_CANDIDATES):
                finals = []
                for trial in range(config.trials):
                    rng = child_rng(config.master_seed, m, k, trial, 0)
                    system, x_hat, _ = gaussian_instance(m, config.n, k, rng)
                    seed = child_seed(config.master_seed, m, k, trial, 2, lam_idx)
                    mode = config.step_mode if config.step_mode != "both" else "exact"
                    spec = _solver_spec("sskm", mode, lam, beta, seed, stop)
                    finals.append(run_trial(system, x_hat, spec, trial).final_mse)
                mean_mse = float(np.mean(finals))
                means.append(mean_mse)
                rows.append((m, k, f"mean_mse[lambda={lam:g}]", mean_mse))
            best = LAMBDA_CANDIDATES[int(np.argmin(means))]
            rows.append((m, k, "best_lambda", float(best)))
    os.makedirs(config.out_dir, exist_ok=True)
    path = os.path.join(config.out_dir, "lambda_sweep.csv")
    write_csv(path, ("m", "k", "stat", "value"), rows)
    return {"rows": rows, "path": path}


def sweep_beta(config: ExperimentConfig) -> dict:
    """Mean and spread of the final MSE across subset sizes, both step modes."""
    m, n, k = config.m, config.n, config.k
    stop = _stopping(config)
    betas = [resolve_beta(spec, m) for spec in BETA_CANDIDATE_FRACTIONS]
    rows = []
    for mode_idx, mode in enumerate(("inexact", "exact")):
        if config.step_mode != "both" and mode != config.step_mode:
            continue
        for beta_idx, beta in enumerate(betas):
            finals = []
            for trial in range(config.trials):
                rng = child_rng(config.master_seed, m, k, trial, 0)
                system, x_hat, _ = gaussian_instance(m, n, k, rng)
                seed = child_seed(config.master_seed, m, k, trial, 2, mode_idx, beta_idx)
                spec = _solver_spec("sskm", mode, config.lam, beta, seed, stop)
                finals.append(run_trial(system, x_hat, spec, trial).final_mse)
            rows.append((mode, beta, "mean_mse", float(np.mean(finals))))
            rows.append((mode, beta, "std_mse", float(np.std(finals, ddof=1)) if len(finals) > 1 else 0.0))
    os.makedirs(config.out_dir, exist_ok=True)
    path = os.path.join(config.out_dir, "beta_sweep.csv")
    write_csv(path, ("step", "beta", "stat", "value"), rows)
    return {"rows": rows, "path": path}


def compare_methods(config: ExperimentConfig) -> dict:
    """MSE grids (noiseless, and noisy when configured) plus convergence curves.

    Grid cells cover the configured (m, k) grid; instances are paired across
    method variants within each trial. Convergence curves (median and
    quartile bands across trials, at deterministic checkpoints) are recorded
    for the primary cell (config.m, config.k) on noiseless data.
    """
    m_grid, k_grid = config.grid()
    stop = _stopping(config)
    variants = _variants(config)
    grid_rows = []
    noisy_rows = []
    curve_rows = []
    checkpoints = _checkpoint_iterates(config.max_iters)
    breg_ok = True

    for m in m_grid:
        beta = resolve_beta(config.beta, m)
        for k in k_grid:
            finals = {v: [] for v in variants}
            finals_noisy = {v: [] for v in variants}
            iters = {v: [] for v in variants}
            curves = {v: [] for v in variants}
            for trial in range(config.trials):
                rng = child_rng(config.master_seed, m, k, trial, 0)
                system, x_hat, _ = gaussian_instance(m, config.n, k, rng)
                if config.noise_level > 0:
                    noise_rng = child_rng(config.master_seed, m, k, trial, 1)
                    b_noisy, _, _ = add_noise(system.rhs, config.noise_level, noise_rng)
                    noisy_system = system.with_rhs(b_noisy)
                for method, mode in variants:
                    seed = child_seed(
                        config.master_seed, m, k, trial, 2, _METHOD_IDS[method], _MODE_IDS[mode]
                    )
                    lam = 0.0 if method == "rk" else config.lam
                    spec = _solver_spec(method, mode, lam, beta, seed, stop)
                    result = run_trial(system, x_hat, spec, trial)
                    finals[(method, mode)].append(result.final_mse)
                    iters[(method, mode)].append(result.iterations)
                    if (m, k) == (config.m, config.k):
                        curves[(method, mode)].append(
                            [_mse_at(result.trace, int(c)) for c in checkpoints]
                        )
                        breg = result.trace.bregman_to_truth
                        if breg is not None and np.any(np.diff(breg) > 1e-10):
                            breg_ok = False
                    if config.noise_level > 0:
                        noisy_result = run_trial(noisy_system, x_hat, spec, trial)
                        finals_noisy[(method, mode)].append(noisy_result.final_mse)
            for (method, mode), values in finals.items():
                arr = np.asarray(values)
                grid_rows.append((m, k, method, mode, "mean_mse", float(arr.mean())))
                grid_rows.append((m, k, method, mode, "median_mse", float(np.median(arr))))
                grid_rows.append((m, k, method, mode, "mean_iters", float(np.mean(iters[(method, mode)]))))
            for (method, mode), values in finals_noisy.items():
                if values:
                    arr = np.asarray(values)
                    noisy_rows.append((m, k, method, mode, "mean_mse", float(arr.mean())))
                    noisy_rows.append((m, k, method, mode, "median_mse", float(np.median(arr))))
            if (m, k) == (config.m, config.k):
                for (method, mode), per_trial in curves.items():
                    mat = np.asarray(per_trial)
                    for col, iterate in enumerate(checkpoints):
                        vals = mat[:, col]
                        curve_rows.append(
                            (
                                method,
                                mode,
                                int(iterate),
                                float(np.median(vals)),
                                float(np.quantile(vals, 0.25)),
                                float(np.quantile(vals, 0.75)),
                                float(vals.min()),
                                float(vals.max()),
                            )
                        )

    os.makedirs(config.out_dir, exist_ok=True)
    paths = {}
    grid_header = ("m", "k", "method", "step", "stat", "value")
    paths["grid"] = os.path.join(config.out_dir, "mse_grid_noiseless.csv")
    write_csv(paths["grid"], grid_header, grid_rows)
    if noisy_rows:
        paths["grid_noisy"] = os.path.join(config.out_dir, "mse_grid_noisy.csv")
        write_csv(paths["grid_noisy"], grid_header, noisy_rows)
    paths["curves"] = os.path.join(config.out_dir, "convergence_curves.csv")
    write_csv(
        paths["curves"],
        ("method", "step", "k_iter", "median_mse", "q25_mse", "q75_mse", "min_mse", "max_mse"),
        curve_rows,
    )
    return {
        "grid_rows": grid_rows,
        "noisy_rows": noisy_rows,
        "curve_rows": curve_rows,
        "paths": paths,
        "bregman_monotone": breg_ok,
    }


def real_matrix_bench(paths: Sequence[str], config: ExperimentConfig) -> dict:
    """Iteration and CPU cost of each method on externally supplied matrices.

    Rows with numerically zero norm are dropped (and counted) before
    normalization. Ground truths are synthetic k-sparse vectors, one per
    trial; means are over converged trials and '--' marks methods for which
    no trial converged within the budget.
    """
    stop = _stopping(config)
    rows = []
    errors = {}
    for path in paths:
        name = os.path.splitext(os.path.basename(path))[0]
        name_id = zlib.crc32(name.encode("utf-8"))
        try:
            raw = read_matrix_market(path)
        except Exception as exc:  # report per file, keep going
            errors[path] = exc
            continue
        norms = np.linalg.norm(raw, axis=1)
        keep = norms >= 1e-14
        dropped = int(np.count_nonzero(~keep))
        kept = raw[keep]
        m, n = kept.shape
        k = min(config.k, n)
        sv = smallest_nonzero_singular_value(raw)
        rows.append((name, m, n, "density", density(raw)))
        rows.append((name, m, n, "cond", sv.cond))
        rows.append((name, m, n, "sigma_min_tilde", sv.smallest_nonzero))
        rows.append((name, m, n, "dropped_zero_rows", dropped))
        beta = resolve_beta(config.beta, m)
        for method, mode in _variants(config):
            its, cpus = [], []
            for trial in range(config.trials):
                rng = child_rng(config.master_seed, name_id, trial, 0)
                support = rng.choice(n, size=k, replace=False)
                x_hat = np.zeros(n)
                x_hat[support] = rng.standard_normal(k)
                b_raw = kept @ x_hat
                try:
                    system = normalize_rows(kept, b_raw)
                except ZeroRowError:
                    break
                seed = child_seed(
                    config.master_seed,
                    name_id,
                    trial,
                    2,
                    _METHOD_IDS[method],
                    _MODE_IDS[mode],
                )
                lam = 0.0 if method == "rk" else config.lam
                spec = _solver_spec(method, mode, lam, beta, seed, stop)
                result = run_trial(system, x_hat, spec, trial)
                if result.converged:
                    its.append(result.iterations)
                    cpus.append(result.wall_time)
            label = f"{method}-{mode}"
            if its:
                rows.append((name, m, n, f"mean_iters[{label}]", float(np.mean(its))))
                rows.append((name, m, n, f"mean_cpu[{label}]", float(np.mean(cpus))))
                rows.append((name, m, n, f"converged[{label}]", len(its)))
            else:
                rows.append((name, m, n, f"mean_iters[{label}]", "--"))
                rows.append((name, m, n, f"mean_cpu[{label}]", "--"))
                rows.append((name, m, n, f"converged[{label}]", 0))
    os.makedirs(config.out_dir, exist_ok=True)
    out_path = os.path.join(config.out_dir, "real_bench.csv")
    write_csv(out_path, ("matrix", "m", "n", "stat", "value"), rows)
    return {"rows": rows, "path": out_path, "errors": errors}


def solve_single(config: ExperimentConfig, method: str | None = None) -> dict:
    """One seeded run of one method; writes the full iteration trace."""
    method = method or config.methods[0]
    mode = config.step_mode if config.step_mode != "both" else "exact"
    rng = child_rng(config.master_seed, config.m, config.k, 0, 0)
    system, x_hat, _ = gaussian_instance(config.m, config.n, config.k, rng)
    delta_inf = 0.0
    if config.noise_level > 0:
        noise_rng = child_rng(config.master_seed, config.m, config.k, 0, 1)
        b_noisy, _, delta_inf = add_noise(system.rhs, config.noise_level, noise_rng)
        system = system.with_rhs(b_noisy)
    seed = child_seed(
        config.master_seed, config.m, config.k, 0, 2, _METHOD_IDS[method], _MODE_IDS[mode]
    )
    lam = 0.0 if method == "rk" else config.lam
    beta = resolve_beta(config.beta, config.m)
    spec = _solver_spec(method, mode, lam, beta, seed, _stopping(config))
    result = run_trial(system, x_hat, spec, 0)
    os.makedirs(config.out_dir, exist_ok=True)
    experiment_id = f"solve-{method}-{mode}-m{config.m}-n{config.n}-k{config.k}"
    path = os.path.join(config.out_dir, "trace.csv")
    write_csv(path, TRACE_HEADER, trace_rows(experiment_id, 0, result.trace))
    return {
        "result": result,
        "path": path,
        "experiment_id": experiment_id,
        "delta_inf": delta_inf,
    }
