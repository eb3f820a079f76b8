"""
Smoothness-adaptive aggregation.

The estimator is run once per smoothness guess alpha_i = i / floor(ln n),
i = 1..floor(ln n)^2, each time on a fresh oracle with an equal share of the
budget. Labeled regions are merged without ever relabeling a point, so the
label-1 set only grows downward and the label-0 set only grows upward.
"""

import json
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterator, List, Tuple

import numpy as np

from estimator.subroutine import LabeledRegions, lowest_label_one, run_subroutine

logger = logging.getLogger(__name__)
trace = logging.getLogger("boundary.trace")

OracleFactory = Callable[[int, int], Any]


@dataclass(frozen=True)
class AggregationState:
    """
    Envelopes L_i (label 0 below) and U_i (label 1 above) after i merges.

    The state keeps the merged regions themselves and folds them on demand,
    so envelopes can be evaluated at any set of points.
    """

    i: int = 0
    regions: Tuple[LabeledRegions, ...] = field(default_factory=tuple)

    def iter_envelopes(self, x_tilde) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
        """(L_j, U_j) for j = 1..i at the given points."""
        x = np.asarray(x_tilde, dtype=float)
        lower = np.full(x.shape[:-1], -np.inf)
        upper = np.full(x.shape[:-1], np.inf)
        for region in self.regions:
            lower, upper = _merge_envelopes(lower, upper, region.lower(x), region.upper(x))
            yield lower, upper

    def envelopes(self, x_tilde) -> Tuple[np.ndarray, np.ndarray]:
        x = np.asarray(x_tilde, dtype=float)
        lower = np.full(x.shape[:-1], -np.inf)
        upper = np.full(x.shape[:-1], np.inf)
        for lower, upper in self.iter_envelopes(x):
            pass
        return lower, upper

    def lower(self, x_tilde) -> np.ndarray:
        return self.envelopes(x_tilde)[0]

    def upper(self, x_tilde) -> np.ndarray:
        return self.envelopes(x_tilde)[1]


def _merge_envelopes(lower, upper, new_lower, new_upper):
    # the new label-1 set may not reach into the old label-0 set, and vice versa
    merged_upper = np.minimum(upper, np.maximum(new_upper, np.nextafter(lower, np.inf)))
    merged_lower = np.maximum(lower, np.minimum(new_lower, np.nextafter(upper, -np.inf)))
    return merged_lower, merged_upper


def merge_regions(state: AggregationState, new: LabeledRegions) -> AggregationState:
    return AggregationState(state.i + 1, state.regions + (new,))


@dataclass(frozen=True)
class AdaptiveResult:
    state: AggregationState
    n: int
    delta: float
    lam: float
    log_n: int
    n0: int
    delta0: float
    iterations: Tuple[Dict[str, Any], ...]

    @property
    def labels_used(self) -> int:
        return sum(it["labels_used"] for it in self.iterations)

    @property
    def alphas(self) -> List[float]:
        return [it["alpha_i"] for it in self.iterations]

    def g_hat(self, x_tilde) -> np.ndarray:
        return lowest_label_one(self.state.upper(x_tilde))

    def classify(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return (x[..., -1] >= self.g_hat(x[..., :-1])).astype(int)

    def label(self, x) -> np.ndarray:
        """1 on S1, 0 on S0, -1 where no iteration assigned a label."""
        x = np.asarray(x, dtype=float)
        lower, upper = self.state.envelopes(x[..., :-1])
        height = x[..., -1]
        out = np.full(height.shape, -1, dtype=int)
        out[height <= lower] = 0
        out[height >= upper] = 1
        return out

    def meta(self) -> Dict[str, Any]:
        return {
            "log_base": "e",
            "log_n": self.log_n,
            "iterations_run": len(self.iterations),
            "n0": self.n0,
            "delta0": self.delta0,
            "labels_used": self.labels_used,
            "iterations": list(self.iterations),
        }


def g_hat(result: AdaptiveResult, x_tilde) -> np.ndarray:
    return result.g_hat(x_tilde)


def classify(result: AdaptiveResult, x) -> np.ndarray:
    return result.classify(x)


def schedule(n: int, delta: float) -> Tuple[int, int, float]:
    """(floor(ln n), n0, delta0) for a total budget n."""
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    log_n = int(math.floor(math.log(n)))
    rounds = log_n ** 2
    return log_n, n // rounds, delta / rounds


def run_adaptive(oracle_factory: OracleFactory, n: int, delta: float, lam: float) -> AdaptiveResult:
    """
    `oracle_factory(i, cap)` must return an independent oracle for iteration i
    allowing `cap` labels.
    """
    log_n, n0, delta0 = schedule(n, delta)
    tracing = trace.isEnabledFor(logging.DEBUG)
    state = AggregationState()
    iterations = []

    for i in range(1, log_n ** 2 + 1):
        alpha_i = i / log_n
        oracle = oracle_factory(i, n0)
        regions = run_subroutine(oracle, n0, delta0, lam, alpha_i)
        state = merge_regions(state, regions)
        record = {
            "i": i,
            "alpha_i": alpha_i,
            "n0": n0,
            "delta0": delta0,
            "l_star": regions.l_star,
            "labels_used": regions.labels_used,
        }
        iterations.append(record)
        if tracing:
            trace.debug(json.dumps({"event": "iteration", **record}))

    logger.debug(
        "adaptive run: %d iterations of %d labels, %d labeled",
        len(iterations), n0, sum(r.l_star > 0 for r in state.regions),
    )
    return AdaptiveResult(state, n, delta, lam, log_n, n0, delta0, tuple(iterations))
