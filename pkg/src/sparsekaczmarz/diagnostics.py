"""Theoretical quantities for checking solver convergence behavior at runtime.

Everything here is pure computation on systems, iterates, and traces: the
smallest nonzero singular value, the residual-concentration ratio gamma (a
value in [1, beta] that modulates the per-step contraction factor), the
contraction factor itself, the error bound relating Bregman distance to the
residual, and the expected-error envelopes for noiseless and noisy data.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import NamedTuple

import numpy as np

from .bregman import DualPair, StepMode, bregman_distance
from .errors import (
    AllZeroError,
    InvalidGammaError,
    ZeroMatrixError,
    ZeroResidualError,
    ZeroTruthError,
)
from .linsys import LinearSystem, residual

NONZERO_ENTRY_TOL = 1e-12
SINGULAR_VALUE_CUTOFF = 1e-10
MAX_ENUMERATED_SUBSETS = 100_000
MC_SUBSET_SAMPLES = 10_000


def mse(x, x_hat) -> float:
    """Relative squared error ||x - x_hat||^2 / ||x_hat||^2."""
    x = np.asarray(x, dtype=float)
    x_hat = np.asarray(x_hat, dtype=float)
    denom = float(np.dot(x_hat, x_hat))
    if denom == 0.0:
        raise ZeroTruthError("ground truth is zero; relative error undefined")
    diff = x - x_hat
    return float(np.dot(diff, diff)) / denom


class SingularValues(NamedTuple):
    smallest_nonzero: float
    smallest: float
    largest: float

    @property
    def cond(self) -> float:
        return self.largest / self.smallest if self.smallest > 0 else float("inf")


def smallest_nonzero_singular_value(system: LinearSystem | np.ndarray) -> SingularValues:
    """Singular value summary via a dense SVD.

    ``smallest_nonzero`` excludes values below 1e-10 times the largest;
    ``smallest`` may be zero for rank-deficient matrices.
    """
    a = system.rows if isinstance(system, LinearSystem) else np.asarray(system, dtype=float)
    svals = np.linalg.svd(a, compute_uv=False)
    largest = float(svals[0]) if svals.size else 0.0
    if largest == 0.0:
        raise ZeroMatrixError("matrix is identically zero")
    nonzero = svals[svals > SINGULAR_VALUE_CUTOFF * largest]
    return SingularValues(
        smallest_nonzero=float(nonzero[-1]),
        smallest=float(svals[-1]),
        largest=largest,
    )


def min_abs_nonzero(x_hat) -> float:
    """Smallest absolute value among entries larger than 1e-12 in magnitude."""
    x_hat = np.asarray(x_hat, dtype=float)
    mags = np.abs(x_hat)
    mags = mags[mags > NONZERO_ENTRY_TOL]
    if mags.size == 0:
        raise AllZeroError("vector has no entry above 1e-12")
    return float(mags.min())


class GammaEstimate(NamedTuple):
    value: float
    standard_error: float
    exact: bool


@lru_cache(maxsize=32)
def _subset_index_matrix(m: int, beta: int) -> np.ndarray:
    combos = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(m), beta)),
        dtype=np.int64,
        count=comb(m, beta) * beta,
    )
    out = combos.reshape(-1, beta)
    out.setflags(write=False)
    return out


def gamma_from_residuals(residuals, beta: int, rng: np.random.Generator | None = None) -> GammaEstimate:
    """Ratio of subset-summed squared 2-norms to squared max-norms of residual subvectors.

    Exact enumeration over all C(m, beta) subsets when that count is at most
    100000; otherwise a Monte Carlo estimate over 10000 uniform subsets, with
    the numerator evaluated in closed form (each entry lies in the same
    number of subsets) and a delta-method standard error on the denominator.
    """
    r = np.asarray(residuals, dtype=float)
    m = r.shape[0]
    if beta < 1 or beta > m:
        raise InvalidGammaError(f"beta={beta} outside [1, m={m}]")
    sq = r**2
    if not np.any(sq > 0.0):
        raise ZeroResidualError("gamma is undefined at a solution")
    if comb(m, beta) <= MAX_ENUMERATED_SUBSETS:
        idx = _subset_index_matrix(m, beta)
        sub = sq[idx]
        num = float(np.sum(sub.sum(axis=1)))
        den = float(np.sum(sub.max(axis=1)))
        return GammaEstimate(value=num / den, standard_error=0.0, exact=True)
    if rng is None:
        rng = np.random.default_rng(0)
    # E[||r_tau||^2] = (beta/m) * ||r||^2 exactly; sample only the max term
    num_mean = (beta / m) * float(sq.sum())
    maxes = np.empty(MC_SUBSET_SAMPLES)
    for s in range(MC_SUBSET_SAMPLES):
        subset = rng.choice(m, size=beta, replace=False)
        maxes[s] = sq[subset].max()
    den_mean = float(maxes.mean())
    gamma = num_mean / den_mean
    den_se = float(maxes.std(ddof=1)) / np.sqrt(MC_SUBSET_SAMPLES)
    return GammaEstimate(value=gamma, standard_error=gamma * den_se / den_mean, exact=False)


def gamma_k(system: LinearSystem, x, beta: int, rng: np.random.Generator | None = None) -> GammaEstimate:
    """``gamma_from_residuals`` evaluated at the residual of ``x``."""
    return gamma_from_residuals(residual(system, x), beta, rng=rng)


class ContractionFactor(NamedTuple):
    value: float
    in_unit_interval: bool


def contraction_factor(
    sigma_min: float,
    lam: float,
    x_min_abs: float,
    beta: int,
    gamma: float,
    m: int,
) -> ContractionFactor:
    """Per-step expected contraction factor of the Bregman distance.

    For lam > 0: 1 - (beta * sigma_min^2) / (2 * gamma * m) * x_min_abs / (x_min_abs + 2*lam).
    For lam = 0: 1 - beta * sigma_min^2 / (gamma * m); pass the smallest
    (possibly zero) singular value in that case, the smallest nonzero one
    otherwise. Values outside (0, 1) are reported with the flag cleared.
    """
    if not (1.0 - 1e-9 <= gamma <= beta + 1e-9):
        raise InvalidGammaError(f"gamma={gamma} outside [1, beta={beta}]")
    if m < beta or beta < 1:
        raise InvalidGammaError(f"need 1 <= beta <= m, got beta={beta}, m={m}")
    if lam > 0:
        q = 1.0 - (beta * sigma_min**2) / (2.0 * gamma * m) * (x_min_abs / (x_min_abs + 2.0 * lam))
    else:
        q = 1.0 - (beta * sigma_min**2) / (gamma * m)
    return ContractionFactor(value=q, in_unit_interval=0.0 < q < 1.0)


def error_bound_margin(
    pair: DualPair,
    system: LinearSystem,
    x_hat,
    lam: float,
    sigma_min: float,
) -> float:
    """Slack in the bound relating Bregman distance to the squared residual.

    Returns RHS - LHS where LHS is the Bregman distance from the pair to
    ``x_hat`` and RHS is the residual-based bound; nonnegative when the bound
    holds. For lam > 0 the pair's dual must lie in the row space (true for
    any solver run started at zero); for lam = 0 the matrix must have full
    column rank.
    """
    r = residual(system, pair.primal)
    res2 = float(np.dot(r, r))
    if lam > 0:
        xmin = min_abs_nonzero(x_hat)
        rhs = res2 / sigma_min**2 * (xmin + 2.0 * lam) / xmin
    else:
        rhs = res2 / (2.0 * sigma_min**2)
    return rhs - bregman_distance(pair, np.asarray(x_hat, dtype=float), lam)


def one_two_norm(system: LinearSystem) -> float:
    """max_i ||a_i||_1 over the (normalized) rows."""
    return float(np.abs(system.rows).sum(axis=1).max())


def noisy_envelope(
    q_sequence,
    lam: float,
    x_hat,
    delta_inf: float,
    a_one_two_norm: float,
    mode: StepMode,
) -> np.ndarray:
    """Upper envelope for the expected error under noisy data.

    Element j bounds E[||x_{j+1} - x_hat||_2] using contraction factors
    q_0..q_j: the noiseless term sqrt(prod(q) * (2*lam*||x_hat||_1 +
    ||x_hat||_2^2)) plus a noise term sqrt(sum(q) * delta_inf^2 / 2), the
    latter inflated by (1 + 4*lam*||A||_{1,2}) in exact mode. With
    delta_inf = 0 this reduces to the noiseless envelope.
    """
    q = np.asarray(q_sequence, dtype=float)
    x_hat = np.asarray(x_hat, dtype=float)
    c0 = 2.0 * lam * np.abs(x_hat).sum() + float(np.dot(x_hat, x_hat))
    noiseless = np.sqrt(np.cumprod(q) * c0)
    noise_scale = delta_inf**2 / 2.0
    if mode is StepMode.EXACT:
        noise_scale *= 1.0 + 4.0 * lam * a_one_two_norm
    return noiseless + np.sqrt(np.cumsum(q) * noise_scale)


def density(matrix) -> float:
    """Fraction of structurally nonzero entries."""
    a = matrix.rows if isinstance(matrix, LinearSystem) else np.asarray(matrix, dtype=float)
    return float(np.count_nonzero(a)) / a.size


@dataclass(frozen=True, eq=False)
class TheoryReport:
    """Theory quantities evaluated along one run, at checkpoint iterations."""

    sigma_min_tilde: float
    sigma_min: float
    sigma_max: float
    x_min_abs: float
    checkpoints: np.ndarray
    gamma: np.ndarray
    q: np.ndarray
    bound_margins: np.ndarray
    a_one_two_norm: float
    delta: float = 0.0


def build_theory_report(
    system: LinearSystem,
    x_hat,
    trace,
    lam: float,
    beta: int,
    checkpoints=None,
    delta: float = 0.0,
) -> TheoryReport:
    """Evaluate the theory quantities along a finished solver trace.

    The iterates are replayed from the recorded steps and chosen rows (the
    trace stores only scalars). Default checkpoints are every iteration on
    tiny systems and every 100th iteration otherwise, where the gamma
    evaluation is the dominant cost.
    """
    from .bregman import DualPair, soft_threshold  # local import to avoid a cycle

    x_hat = np.asarray(x_hat, dtype=float)
    sv = smallest_nonzero_singular_value(system)
    xmin = min_abs_nonzero(x_hat)
    iters = trace.iterations
    if checkpoints is None:
        stride = 1 if system.m <= 20 else 100
        checkpoints = np.arange(0, iters, stride)
    checkpoints = np.asarray(checkpoints, dtype=int)
    marks = set(checkpoints.tolist())

    gammas = np.full(checkpoints.shape[0], np.nan)
    qs = np.full(checkpoints.shape[0], np.nan)
    margins = np.full(checkpoints.shape[0], np.nan)
    dual = np.zeros(system.n)
    pos = 0
    for k in range(iters):
        if k in marks:
            x = soft_threshold(dual, lam)
            r = system.rows @ x - system.rhs
            if np.any(r != 0.0):
                est = gamma_from_residuals(r, beta)
                gammas[pos] = est.value
                qs[pos] = contraction_factor(
                    sv.smallest_nonzero, lam, xmin, beta, est.value, system.m
                ).value
            margins[pos] = error_bound_margin(
                DualPair.from_dual(dual, lam), system, x_hat, lam, sv.smallest_nonzero
            )
            pos += 1
        dual = dual - trace.step[k] * system.rows[trace.chosen[k]]
    return TheoryReport(
        sigma_min_tilde=sv.smallest_nonzero,
        sigma_min=sv.smallest,
        sigma_max=sv.largest,
        x_min_abs=xmin,
        checkpoints=checkpoints,
        gamma=gammas,
        q=qs,
        bound_margins=margins,
        a_one_two_norm=one_two_norm(system),
        delta=delta,
    )
