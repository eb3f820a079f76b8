"""Execute one (algorithm, n, seed) cell and measure it against ground truth."""

import logging
import time
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterable, List, Tuple

import numpy as np
from joblib import Parallel, delayed
from tqdm import tqdm

from aggregate.adaptive import run_adaptive
from estimator.subroutine import run_subroutine
from evaluation.baseline import default_grid_side, passive_baseline
from evaluation.metrics import default_resolution, sup_error
from linesearch.search import LineOracle, run_line_search
from problem.instances import ProblemInstance
from problem.oracle import LabelOracle
from problem.risk import excess_risk_mc

from .config import Algorithm, ConfigError, RunConfig
from .seeding import POINTS_STREAM, RISK_STREAM, derive_seed

logger = logging.getLogger(__name__)


@dataclass
class Fitted:
    """What an algorithm hands to the evaluators."""

    result: Any
    g_hat: Callable[[np.ndarray], np.ndarray]
    classifier: Callable[[np.ndarray], np.ndarray]
    labels_used: int
    finest_grid: int
    meta: Dict[str, Any]


@dataclass
class RunOutcome:
    row: Dict[str, Any]
    meta: Dict[str, Any]
    fitted: Fitted


def _threshold_classifier(g_hat):
    def classify(x):
        x = np.asarray(x, dtype=float)
        return (x[..., -1] >= g_hat(x[..., :-1])).astype(int)
    return classify


def fit(config: RunConfig, instance: ProblemInstance, n: int, seed: int) -> Fitted:
    algorithm = Algorithm(config.algorithm)
    master = config.master_seed

    if algorithm is Algorithm.ADAPTIVE:
        def oracle_factory(i, cap):
            return LabelOracle(instance, derive_seed(master, seed, i), cap)

        result = run_adaptive(oracle_factory, n, config.delta, config.lam)
        grids = [r.interpolant.M for r in result.state.regions if not r.vacuous]
        return Fitted(result, result.g_hat, result.classify, result.labels_used,
                      max(grids, default=0), result.meta())

    oracle = LabelOracle(instance, derive_seed(master, seed, 0), n)

    if algorithm is Algorithm.SUBROUTINE:
        regions = run_subroutine(oracle, n, config.delta, config.lam, config.alpha_guess)
        finest = 0 if regions.vacuous else regions.interpolant.M
        meta = {**regions.meta(), "alpha": config.alpha_guess, "depths": list(regions.depths)}
        return Fitted(regions, regions.g_hat, _threshold_classifier(regions.g_hat),
                      oracle.used, finest, meta)

    if algorithm is Algorithm.LINESEARCH:
        anchor = np.asarray(config.anchor, dtype=float)
        estimate = run_line_search(LineOracle(oracle, anchor), config.epsilon, config.delta)

        def g_hat(x_tilde):
            return np.full(np.asarray(x_tilde).shape[:-1], estimate.T)

        meta = {
            **estimate.as_dict(),
            "anchor": list(config.anchor),
            "threshold_error": abs(estimate.T - float(instance.boundary(anchor[None, :])[0])),
        }
        return Fitted(estimate, g_hat, _threshold_classifier(g_hat), oracle.used, 0, meta)

    side = config.grid_side or default_grid_side(n, instance.dims)
    if n < side ** instance.dims:
        raise ConfigError("grid_side", f"{side}^{instance.dims} cells need more than n={n} labels")
    histogram = passive_baseline(oracle, n, side, seed=derive_seed(master, seed, POINTS_STREAM))
    return Fitted(histogram, histogram.g_hat, histogram, oracle.used, side,
                  {"grid_side": side, "empty_cells": int((histogram.counts == 0).sum())})


def run_cell(config: RunConfig, n: int, seed: int) -> RunOutcome:
    instance = config.build_instance()
    t0 = time.time()
    fitted = fit(config, instance, n, seed)
    wall_time_ms = int((time.time() - t0) * 1000)

    resolution = config.audit_resolution or default_resolution(fitted.finest_grid)
    risk = excess_risk_mc(instance, fitted.classifier, config.risk_samples,
                          derive_seed(config.master_seed, seed, RISK_STREAM))
    row = {
        "n": n,
        "seed": seed,
        "sup_error": sup_error(fitted.g_hat, instance, resolution),
        "excess_risk": risk.estimate,
        "labels_used": fitted.labels_used,
        "wall_time_ms": wall_time_ms if config.timing else 0,
    }
    meta = {
        "n": n,
        "seed": seed,
        "audit_resolution": resolution,
        "excess_risk_half_width": risk.half_width,
        "algorithm": fitted.meta,
    }
    logger.info("%s n=%d seed=%d sup_error=%.4g labels=%d",
                config.algorithm, n, seed, row["sup_error"], row["labels_used"])
    return RunOutcome(row, meta, fitted)


def _run_cell_summary(config: RunConfig, n: int, seed: int) -> Tuple[Dict[str, Any], Dict[str, Any]]:
    outcome = run_cell(config, n, seed)
    return outcome.row, outcome.meta


def run_cells(config: RunConfig, cells: Iterable[Tuple[int, int]], workers: int,
              progress: bool = False) -> Tuple[List[Dict[str, Any]], List[Dict[str, Any]]]:
    """Run (n, seed) cells, possibly in parallel; results come back sorted by (n, seed)."""
    cells = sorted(cells)
    jobs = (delayed(_run_cell_summary)(config, n, seed) for n, seed in cells)
    if progress:
        jobs = tqdm(jobs, total=len(cells), desc=config.algorithm, leave=False)
    results = Parallel(n_jobs=workers, backend="loky")(jobs)
    rows = [row for row, _ in results]
    metas = [meta for _, meta in results]
    return rows, metas
