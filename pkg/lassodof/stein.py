"""Degrees of freedom by definition, Stein divergence and SURE.

Monte Carlo replications draw y ~ N(mu, sigma^2 I) from one counter-based
stream per replication, so results do not depend on the thread count.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Literal, Optional, Sequence, Tuple, TypeVar, Union

import numpy as np
import pandas as pd

from .dof import estimate_df
from .errors import HarnessError, InputError, LassoDofError
from .schemas import (
    GaussianModel,
    GenLassoProblem,
    LassoProblem,
    McConfig,
    McDfEstimate,
    RankTolerance,
    SetTolerance,
    SolverOptions,
    SurePath,
    ValidationSummary,
)
from .solver import solve

logger = logging.getLogger(__name__)

T = TypeVar("T")
FitMap = Callable[[np.ndarray], np.ndarray]
FitAndDf = Callable[[np.ndarray], Tuple[np.ndarray, float]]

MAX_DROP_FRACTION = 0.01
GATE_WIDTH = 3.0


def replication_streams(cfg: McConfig) -> List[np.random.Generator]:
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.replications)
    return [np.random.Generator(np.random.Philox(child)) for child in children]


def _map_replications(task: Callable[[np.random.Generator], T], cfg: McConfig) -> List[Optional[T]]:
    """Run task once per replication stream; failed replications come back as None."""
    streams = replication_streams(cfg)

    def guarded(r: int) -> Optional[T]:
        try:
            return task(streams[r])
        except (LassoDofError, np.linalg.LinAlgError, ValueError) as e:
            logger.warning("replication %d dropped: %s", r, e)
            return None

    if cfg.parallel_width == 1:
        results = [guarded(r) for r in range(cfg.replications)]
    else:
        with ThreadPoolExecutor(max_workers=cfg.parallel_width) as pool:
            results = list(pool.map(guarded, range(cfg.replications)))

    dropped = sum(result is None for result in results)
    if dropped > MAX_DROP_FRACTION * cfg.replications or cfg.replications - dropped < 2:
        raise HarnessError(f"{dropped} of {cfg.replications} replications failed")
    return results


def _draw(model: GaussianModel, rng: np.random.Generator) -> np.ndarray:
    return model.mu + model.sigma * rng.standard_normal(model.mu.size)


def _mean_and_error(values: np.ndarray) -> Tuple[float, float]:
    return float(values.mean()), float(values.std(ddof=1) / np.sqrt(values.size))


def mc_df_covariance(
    fit_map: FitMap,
    model: GaussianModel,
    cfg: McConfig,
    estimator: Literal["known_mean", "centered"] = "known_mean",
) -> McDfEstimate:
    """Monte Carlo estimate of sum_i Cov(g_i(y), y_i) / sigma^2.

    known_mean averages <g(y), y - mu> / sigma^2. centered replaces mu by
    the replication mean of g, i.e. the unbiased sample covariance.
    """

    def task(rng: np.random.Generator):
        y = _draw(model, rng)
        return y, np.asarray(fit_map(y), dtype=float)

    results = _map_replications(task, cfg)
    kept = [result for result in results if result is not None]
    ys = np.array([y for y, _ in kept])
    fits = np.array([g for _, g in kept])
    var = model.sigma**2

    if estimator == "known_mean":
        terms = np.einsum("ri,ri->r", fits, ys - model.mu) / var
    else:
        R = len(kept)
        terms = np.einsum("ri,ri->r", fits - fits.mean(axis=0), ys) / var * R / (R - 1)
    df_mean, df_std_error = _mean_and_error(terms)
    return McDfEstimate(
        df_mean=df_mean,
        df_std_error=df_std_error,
        replications_used=len(kept),
        replications_dropped=len(results) - len(kept),
        estimator=estimator,
    )


def stein_divergence_fd(fit_map: FitMap, y, h: Optional[float] = None, sigma: float = 1.0) -> float:
    """sum_i (g_i(y + h e_i) - g_i(y - h e_i)) / 2h, at 2n fit evaluations."""
    y = np.asarray(y, dtype=float)
    if h is None:
        h = 1e-4 * sigma * (1.0 + float(np.abs(y).max(initial=0.0)))
    if h <= 0:
        raise InputError(f"finite-difference step must be positive, got {h}")
    total = 0.0
    for i in range(y.size):
        step = np.zeros(y.size)
        step[i] = h
        total += (fit_map(y + step)[i] - fit_map(y - step)[i]) / (2 * h)
    return float(total)


def sure_risk(y, fit, df_hat: float, sigma: float) -> float:
    y = np.asarray(y, dtype=float)
    r = np.asarray(fit, dtype=float) - y
    return float(r @ r - y.size * sigma**2 + 2 * sigma**2 * df_hat)


def run_validation(fit_and_df: FitAndDf, model: GaussianModel, cfg: McConfig) -> ValidationSummary:
    """Compare the Monte Carlo df with the mean of an unbiased estimate over shared draws.

    The gate passes when the two means are within GATE_WIDTH combined
    standard errors.
    """
    var = model.sigma**2

    def task(rng: np.random.Generator):
        y = _draw(model, rng)
        fit, df_hat = fit_and_df(y)
        fit = np.asarray(fit, dtype=float)
        return (
            float(fit @ (y - model.mu)) / var,
            float(df_hat),
            sure_risk(y, fit, df_hat, model.sigma),
            float(np.sum((fit - model.mu) ** 2)),
        )

    results = _map_replications(task, cfg)
    records = pd.DataFrame(
        [(r, *result) for r, result in enumerate(results) if result is not None],
        columns=["replication", "df_term", "df_hat", "sure_value", "loss"],
    )
    df_mean, df_se = _mean_and_error(records["df_term"].to_numpy())
    est_mean, est_se = _mean_and_error(records["df_hat"].to_numpy())
    combined = float(np.hypot(df_se, est_se))
    gap = abs(est_mean - df_mean)
    passed = gap <= GATE_WIDTH * combined + 1e-12
    logger.info(
        "monte carlo df %.4f (se %.4f) vs estimator %.4f (se %.4f): gap %.4f, %s",
        df_mean, df_se, est_mean, est_se, gap, "pass" if passed else "FAIL",
    )
    return ValidationSummary(
        monte_carlo=McDfEstimate(
            df_mean=df_mean,
            df_std_error=df_se,
            replications_used=len(records),
            replications_dropped=len(results) - len(records),
        ),
        estimator_mean=est_mean,
        estimator_std_error=est_se,
        combined_std_error=combined,
        gap=gap,
        passed=passed,
        records=records,
    )


def select_lambda(
    prob: Union[LassoProblem, GenLassoProblem],
    grid: Sequence[float],
    sigma: float,
    opts: Optional[SolverOptions] = None,
    set_tol: Optional[SetTolerance] = None,
    rtol: Optional[RankTolerance] = None,
) -> SurePath:
    """SURE-minimizing lambda over an ascending grid; ties go to the larger lambda."""
    grid = [float(lam) for lam in grid]
    if not grid:
        raise InputError("the lambda grid is empty")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise InputError("the lambda grid must be sorted in ascending order")
    if sigma <= 0:
        raise InputError(f"sigma must be positive, got {sigma}")

    risks: List[Optional[float]] = []
    dfs: List[Optional[float]] = []
    failed: List[bool] = []
    last_error: Optional[LassoDofError] = None
    for lam in grid:
        at = prob.with_lambda(lam)
        try:
            sol = solve(at, opts)
            df_hat = estimate_df(at, sol, set_tol, rtol).df_value
        except LassoDofError as e:
            logger.warning("lambda %g skipped: %s", lam, e.detail)
            last_error = e
            risks.append(None)
            dfs.append(None)
            failed.append(True)
            continue
        risks.append(sure_risk(at.y, sol.fit, df_hat, sigma))
        dfs.append(df_hat)
        failed.append(False)

    scored = [i for i, risk in enumerate(risks) if risk is not None]
    if not scored:
        raise last_error
    best = scored[0]
    for i in scored[1:]:
        if risks[i] <= risks[best]:
            best = i
    return SurePath(
        lambdas=grid,
        risks=risks,
        dfs=dfs,
        failed=failed,
        best_lambda=grid[best],
        best_index=best,
    )
