"""
Correctness audits on a grid of the cube.

A run is checked column by column: the audit grid fixes the columns x~ and
the heights x_d, and the labeled sets {x_d <= lower} and {x_d >= upper} are
compared with the true boundary height g*(x~).

  crossing   some audited point of S1 lies on or below g*, or some point of
             S0 lies on or above g*
  uncovered  some audited point farther than Delta from g* is unlabeled

The strong check (estimator runs) flags both; the weak check (adaptive
runs) flags only uncovered points. Runs that labeled nothing are never
violations. Estimator runs also report whether the abstention band is wider
than the guaranteed Delta_n.
"""

import logging
import math
from typing import Any, Dict, Iterable, List

import numpy as np
from joblib import Parallel, delayed
from tqdm import tqdm

from estimator.theory import theoretical_margin
from evaluation.metrics import audit_grid, default_resolution
from problem.instances import ProblemInstance

from .config import Algorithm, ConfigError, RunConfig
from .runner import fit

logger = logging.getLogger(__name__)

AUDITABLE = (Algorithm.SUBROUTINE.value, Algorithm.ADAPTIVE.value)


def column_violations(heights: np.ndarray, truth: np.ndarray, lower: np.ndarray,
                      upper: np.ndarray, margin: float) -> Dict[str, bool]:
    """Crossing and coverage checks for labeled sets restricted to the height grid."""
    top = len(heights)

    # lowest audited height inside S1, highest inside S0
    first_one = np.searchsorted(heights, upper, side="left")
    last_zero = np.searchsorted(heights, lower, side="right") - 1
    has_one = first_one < top
    has_zero = last_zero >= 0
    crossing = (
        np.any(has_one & (heights[np.minimum(first_one, top - 1)] <= truth))
        or np.any(has_zero & (heights[np.maximum(last_zero, 0)] >= truth))
    )

    # lowest height strictly above g* + margin must already be in S1
    above = np.searchsorted(heights, truth + margin, side="right")
    below = np.searchsorted(heights, truth - margin, side="left") - 1
    uncovered = (
        np.any((above < top) & (heights[np.minimum(above, top - 1)] < upper))
        or np.any((below >= 0) & (heights[np.maximum(below, 0)] > lower))
    )
    return {"crossing": bool(crossing), "uncovered": bool(uncovered)}


def guaranteed_margin(config: RunConfig, instance: ProblemInstance, n: int, fitted) -> float:
    """Delta_n the run is entitled to; inf when no guarantee applies."""
    kappa, c, d = instance.noise.kappa, instance.noise.c, instance.dims
    if config.algorithm == Algorithm.SUBROUTINE.value:
        return theoretical_margin(config.alpha_guess, kappa, c, config.lam, d, n, config.delta)

    result = fitted.result
    # largest smoothness guess not exceeding the true alpha
    guesses = [a for a in result.alphas if a <= instance.smoothness.alpha]
    if not guesses:
        return math.inf
    return theoretical_margin(max(guesses), kappa, c, config.lam, d, result.n0, result.delta0)


def audit_run(config: RunConfig, n: int, seed: int) -> Dict[str, Any]:
    instance = config.build_instance()
    fitted = fit(config, instance, n, seed)
    strong = config.algorithm == Algorithm.SUBROUTINE.value
    if strong:
        vacuous = fitted.result.vacuous
        source = fitted.result
    else:
        vacuous = all(r.vacuous for r in fitted.result.state.regions)
        source = fitted.result.state

    delta_n = guaranteed_margin(config, instance, n, fitted)
    margin = min(1.0, delta_n)
    resolution = config.audit_resolution or default_resolution(fitted.finest_grid)
    columns = audit_grid(instance.dims - 1, resolution)
    heights = np.linspace(0.0, 1.0, resolution)
    truth = instance.boundary(columns)
    lower, upper = source.lower(columns), source.upper(columns)

    checks = column_violations(heights, truth, lower, upper, margin)
    violated = not vacuous and (checks["uncovered"] or (strong and checks["crossing"]))
    record = {
        "seed": seed,
        "n": n,
        "vacuous": vacuous,
        "margin": margin,
        "delta_n": delta_n,
        "labels_used": fitted.labels_used,
        "violation": violated,
        **checks,
    }
    if strong and not vacuous:
        center = source.center(columns)
        record["l_star"] = source.l_star
        record["band_half_width"] = float(source.margin + np.max(np.abs(center - truth)))
        record["band_exceeds_delta_n"] = record["band_half_width"] > delta_n
    return record


def summarize(config: RunConfig, records: List[Dict[str, Any]]) -> Dict[str, Any]:
    runs = len(records)
    violations = sum(r["violation"] for r in records)
    frequency = violations / runs if runs else 0.0
    threshold = 2 * config.delta
    return {
        "algorithm": config.algorithm,
        "check": "strong" if config.algorithm == Algorithm.SUBROUTINE.value else "weak",
        "runs": runs,
        "vacuous_runs": sum(r["vacuous"] for r in records),
        "violations": violations,
        "frequency": frequency,
        "threshold": threshold,
        "within_threshold": frequency <= threshold,
        "wide_bands": sum(r.get("band_exceeds_delta_n", False) for r in records),
        "records": records,
    }


def run_audit(config: RunConfig, seeds: Iterable[int], workers: int, progress: bool = False) -> Dict[str, Any]:
    if config.algorithm not in AUDITABLE:
        raise ConfigError("algorithm", f"audits need labeled regions; use one of {list(AUDITABLE)}")
    seeds = sorted(seeds)
    jobs = (delayed(audit_run)(config, config.n, seed) for seed in seeds)
    if progress:
        jobs = tqdm(jobs, total=len(seeds), desc="audit", leave=False)
    records = Parallel(n_jobs=workers, backend="loky")(jobs)
    report = summarize(config, records)
    logger.info("audit %s: %d/%d violations (threshold %.3g)",
                config.algorithm, report["violations"], report["runs"], report["threshold"])
    return report
