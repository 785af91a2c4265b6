"""Iteration drivers for the RK, SRK, and SSKM methods.

All three methods share one loop: select a row, move the dual iterate along
that row, soft-threshold back to the primal. RK is the lam=0 / uniform-row /
inexact special case (a plain orthogonal projection per step), SRK adds the
threshold with uniform rows, and SSKM drives the same update with greedy
subset sampling. Runs are deterministic given the sampler seed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .bregman import DualPair, StepMode, exact_step, inexact_step, objective_value, soft_threshold
from .errors import NonFiniteIterateError
from .linsys import LinearSystem
from .sampling import SamplerConfig, Selection, SelectionRule, sample_subset


class Method(enum.Enum):
    RK = "rk"
    SRK = "srk"
    SSKM = "sskm"


class RunStatus(enum.Enum):
    CONVERGED = "converged"
    MAX_ITERS = "max-iters"


@dataclass(frozen=True)
class StoppingRule:
    """Stop on residual norm, on relative error to a known truth, or on budget.

    When a ground truth is supplied to :func:`run` and ``mse_target`` is set,
    the relative-error test replaces the residual test. ``residual_check_every``
    trades stopping granularity for speed: the full residual (an O(mn)
    product) is evaluated on every J-th iteration only; skipped iterations
    record NaN for the residual norm.
    """

    epsilon: float | None = None
    max_iters: int = 200_000
    mse_target: float | None = None
    residual_check_every: int = 1

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.epsilon is not None and self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        if self.residual_check_every < 1:
            raise ValueError("residual_check_every must be >= 1")


@dataclass(frozen=True)
class SolverSpec:
    """Method, regularization weight, step mode, sampler, and stopping rule."""

    method: Method
    lam: float
    step_mode: StepMode
    sampler: SamplerConfig
    stop: StoppingRule

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("lam must be nonnegative")
        if self.method is Method.RK and self.lam != 0.0:
            raise ValueError("RK requires lam = 0")
        if self.method is Method.SSKM and self.sampler.rule is not SelectionRule.SKM_GREEDY:
            raise ValueError("SSKM requires the greedy subset rule")

    @classmethod
    def rk(cls, seed: int = 0, stop: StoppingRule | None = None) -> "SolverSpec":
        return cls(
            method=Method.RK,
            lam=0.0,
            step_mode=StepMode.INEXACT,
            sampler=SamplerConfig(rule=SelectionRule.UNIFORM_RANDOM, seed=seed),
            stop=stop or StoppingRule(),
        )

    @classmethod
    def srk(
        cls,
        lam: float,
        step_mode: StepMode = StepMode.EXACT,
        seed: int = 0,
        stop: StoppingRule | None = None,
    ) -> "SolverSpec":
        return cls(
            method=Method.SRK,
            lam=lam,
            step_mode=step_mode,
            sampler=SamplerConfig(rule=SelectionRule.UNIFORM_RANDOM, seed=seed),
            stop=stop or StoppingRule(),
        )

    @classmethod
    def sskm(
        cls,
        lam: float,
        beta,
        step_mode: StepMode = StepMode.EXACT,
        seed: int = 0,
        stop: StoppingRule | None = None,
    ) -> "SolverSpec":
        return cls(
            method=Method.SSKM,
            lam=lam,
            step_mode=step_mode,
            sampler=SamplerConfig(rule=SelectionRule.SKM_GREEDY, beta=beta, seed=seed),
            stop=stop or StoppingRule(),
        )


@dataclass(eq=False)
class IterationTrace:
    """Per-iteration records of one solver run.

    Record k describes iteration k, which produced the iterate x_{k+1}:
    the chosen row, the step value, the residual norm squared at x_{k+1}
    (NaN where the residual check was skipped), and, when a ground truth was
    supplied, the relative squared error and the Bregman distance to it.
    """

    chosen: np.ndarray
    step: np.ndarray
    residual_norm2: np.ndarray
    mse: np.ndarray | None
    bregman_to_truth: np.ndarray | None
    status: RunStatus = RunStatus.MAX_ITERS
    iterations: int = 0

    @property
    def final_mse(self) -> float:
        if self.mse is None or self.iterations == 0:
            return float("nan")
        return float(self.mse[self.iterations - 1])


def init_state(n: int, lam: float) -> DualPair:
    """Zero primal and dual start; the thresholding link holds trivially."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return DualPair.from_dual(np.zeros(n), lam)


def step_once(
    state: DualPair,
    system: LinearSystem,
    selection: Selection,
    step_mode: StepMode,
) -> DualPair:
    """One dual update along the selected row, then the threshold map.

    With lam = 0 in inexact mode this is exactly the classical Kaczmarz
    orthogonal projection onto the selected hyperplane.
    """
    i = selection.chosen
    a = system.rows[i]
    b = float(system.rhs[i])
    return _apply_step(state, a, b, step_mode)


def _apply_step(state: DualPair, a: np.ndarray, b: float, step_mode: StepMode) -> DualPair:
    if step_mode is StepMode.INEXACT:
        t = inexact_step(state.primal, a, b)
    else:
        t = exact_step(state.dual, a, b, state.lam)
    return DualPair.from_dual(state.dual - t * a, state.lam)


def run(
    system: LinearSystem,
    spec: SolverSpec,
    ground_truth=None,
) -> tuple[DualPair, IterationTrace]:
    """Iterate until the stopping rule fires; returns the final pair and trace.

    The system should be consistent (b in the range of A) for the sparse
    methods to converge to a solution; inconsistent right-hand sides (e.g.
    noisy data) are allowed and simply run to the iteration budget. Raises
    :class:`NonFiniteIterateError` if an iterate stops being finite.
    """
    m, n = system.shape
    lam = spec.lam
    stop = spec.stop
    rng = np.random.default_rng(spec.sampler.seed)
    rule = spec.sampler.rule

    x_hat = None
    x_hat_norm2 = 0.0
    if ground_truth is not None:
        x_hat = np.asarray(ground_truth, dtype=float)
        x_hat_norm2 = float(np.dot(x_hat, x_hat))
        f_hat = objective_value(x_hat, lam)
    use_mse_stop = x_hat is not None and stop.mse_target is not None

    max_iters = stop.max_iters
    every = stop.residual_check_every
    chosen_rec = np.zeros(max_iters, dtype=np.int64)
    step_rec = np.zeros(max_iters)
    resid_rec = np.full(max_iters, np.nan)
    mse_rec = np.full(max_iters, np.nan) if x_hat is not None else None
    breg_rec = np.full(max_iters, np.nan) if x_hat is not None else None

    dual = np.zeros(n)
    x = np.zeros(n)
    rows, rhs = system.rows, system.rhs
    r = -rhs.copy()  # residual at x_0 = 0
    fy_buffer = np.arange(m) if rule is SelectionRule.SKM_GREEDY else None

    status = RunStatus.MAX_ITERS
    k = 0
    for k in range(max_iters):
        # --- selection at x_k ---
        if rule is SelectionRule.CYCLIC:
            i = k % m
        elif rule is SelectionRule.UNIFORM_RANDOM:
            i = int(rng.integers(m))
        else:
            subset = sample_subset(m, spec.sampler.beta_at(k), rng, _buffer=fy_buffer)
            if r is not None:
                i = int(subset[int(np.argmax(r[subset] ** 2))])
            else:
                sub_res = rows[subset] @ x - rhs[subset]
                i = int(subset[int(np.argmax(sub_res**2))])
        a = rows[i]
        b = float(rhs[i])

        # --- dual step and threshold ---
        if spec.step_mode is StepMode.INEXACT:
            t = inexact_step(x, a, b)
        else:
            t = exact_step(dual, a, b, lam)
        if not np.isfinite(t):
            raise NonFiniteIterateError(f"step value became non-finite at iteration {k}")
        dual = dual - t * a
        x = soft_threshold(dual, lam)
        if not np.isfinite(x).all():
            raise NonFiniteIterateError(f"iterate became non-finite at iteration {k}")

        chosen_rec[k] = i
        step_rec[k] = t

        # --- records and stopping at x_{k+1} ---
        check_residual = every == 1 or (k + 1) % every == 0 or k + 1 == max_iters
        if check_residual:
            r = rows @ x - rhs
            resid2 = float(np.dot(r, r))
            resid_rec[k] = resid2
        else:
            r = None

        if x_hat is not None:
            diff = x - x_hat
            mse_val = float(np.dot(diff, diff)) / x_hat_norm2
            mse_rec[k] = mse_val
            breg_rec[k] = f_hat - objective_value(x, lam) - float(np.dot(dual, x_hat - x))

        if use_mse_stop:
            if mse_val <= stop.mse_target:
                status = RunStatus.CONVERGED
                k += 1
                break
        elif stop.epsilon is not None and check_residual:
            if resid2 <= stop.epsilon**2:
                status = RunStatus.CONVERGED
                k += 1
                break
    else:
        k = max_iters

    trace = IterationTrace(
        chosen=chosen_rec[:k],
        step=step_rec[:k],
        residual_norm2=resid_rec[:k],
        mse=mse_rec[:k] if mse_rec is not None else None,
        bregman_to_truth=breg_rec[:k] if breg_rec is not None else None,
        status=status,
        iterations=k,
    )
    return DualPair(primal=x, dual=dual, lam=lam), trace
