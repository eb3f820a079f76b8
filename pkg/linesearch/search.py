"""
Noise-adaptive stochastic bisection along one vertical line.

Each epoch keeps pulling labels at the three quartiles U < M < V of the active
segment until one of them is certified by a Hoeffding-style confidence
radius, then halves the segment. No knowledge of the noise exponent is needed:
epochs simply last longer when eta is flat near the threshold.
"""

import json
import logging
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from problem.exceptions import BudgetExhausted
from problem.oracle import LabelOracle

logger = logging.getLogger(__name__)
trace = logging.getLogger("boundary.trace")


class LineOracle:
    """Restriction of a label oracle to the segment {(anchor, z): z in [0, 1]}."""

    def __init__(self, base: LabelOracle, anchor: Sequence[float]):
        self.base = base
        self.anchor = tuple(float(a) for a in anchor)

    @property
    def used(self) -> int:
        return self.base.used

    @property
    def remaining(self) -> int:
        return self.base.remaining

    def query(self, z: float) -> int:
        return self.base.query(self.anchor + (float(z),))

    def query_rounds(self, zs: Sequence[float], rounds: int) -> np.ndarray:
        """Labels for `rounds` passes over the heights `zs`, one row per pass."""
        points = np.array([self.anchor + (float(z),) for z in zs])
        labels = self.base.query_many(np.tile(points, (rounds, 1)))
        return labels.reshape(rounds, len(zs))


@dataclass(frozen=True)
class ThresholdEstimate:
    T: float
    L: float
    R: float
    N: int
    completed: bool

    def as_dict(self):
        return {"T": self.T, "L": self.L, "R": self.R, "N": self.N, "completed": self.completed}


@dataclass
class EpochState:
    k: int
    lower: float
    upper: float
    pulls: int = 0
    sum_u: int = 0
    sum_m: int = 0
    sum_v: int = 0

    @property
    def quartiles(self) -> Tuple[float, float, float]:
        quarter = (self.upper - self.lower) / 4
        middle = (self.lower + self.upper) / 2
        return self.lower + quarter, middle, middle + quarter

    def means(self) -> Tuple[float, float, float]:
        t = self.pulls
        return self.sum_u / t, self.sum_m / t, self.sum_v / t


def confidence_radius(t: int, delta_k: float) -> float:
    """2 * sqrt(log(t / delta_k) / (2 t))."""
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    if not 0 < delta_k < 1:
        raise ValueError(f"delta_k must lie in (0, 1), got {delta_k}")
    return 2.0 * math.sqrt(math.log(t / delta_k) / (2.0 * t))


def epoch_count(epsilon: float) -> int:
    """K = ceil(log2(1 / (2 epsilon))), floored at 0."""
    # tolerance keeps exact dyadic precisions from rounding up an epoch
    return max(0, math.ceil(math.log2(1.0 / (2.0 * epsilon)) - 1e-12))


def line_search_sample_bound(kappa: float, c: float, epsilon: float, delta: float) -> float:
    """Worst-case label count of a successful line-search at precision epsilon."""
    logs = math.log(1 / delta) + math.log(1 / epsilon)
    if kappa == 1:
        return 64 * logs * math.log(1 / c) / c ** 2 * math.log(1 / epsilon)
    return (
        200 * logs * kappa * math.log(1 / c) * 8 ** (2 * (kappa - 1))
        / ((kappa - 1) * c ** 2)
        * (epsilon ** (-2 * (kappa - 1)) - 1)
    )


def safe_rounds(state: EpochState, delta_k: float) -> int:
    """
    Rounds of pulls that cannot certify any quartile whatever their labels.
    Each round moves a count away from t / 2 by at most 1 / 2, and
    t * confidence_radius(t) grows with t.
    """
    t = state.pulls
    if t == 0:
        return 0
    half = t / 2
    deviation = max(abs(state.sum_u - half), abs(state.sum_m - half), abs(state.sum_v - half))
    slack = t * confidence_radius(t, delta_k) - deviation
    return max(0, int(2 * slack) - 1)


def _run_epoch(line: LineOracle, state: EpochState, delta_k: float) -> Tuple[float, float, str]:
    u, m, v = state.quartiles
    while True:
        rounds = min(safe_rounds(state, delta_k), line.remaining // 3)
        if rounds > 0:
            labels = line.query_rounds((m, u, v), rounds)
            state.pulls += rounds
            state.sum_m += int(labels[:, 0].sum())
            state.sum_u += int(labels[:, 1].sum())
            state.sum_v += int(labels[:, 2].sum())
            continue

        state.pulls += 1
        state.sum_m += line.query(m)
        state.sum_u += line.query(u)
        state.sum_v += line.query(v)
        eta_u, eta_m, eta_v = state.means()
        radius = confidence_radius(state.pulls, delta_k)

        if abs(eta_m - 0.5) >= radius:
            if eta_m > 0.5:
                return state.lower, m, "lower-half"
            return m, state.upper, "upper-half"
        # V certified as label 1 and U certified as label 0
        if eta_v - 0.5 >= radius and 0.5 - eta_u >= radius:
            return u, v, "middle-half"


def run_line_search(line: LineOracle, epsilon: float, delta: float) -> ThresholdEstimate:
    """
    Localize the crossing height on `line` to within epsilon with probability
    at least 1 - delta. Budget exhaustion yields completed=False; callers
    discard such estimates.
    """
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")

    K = epoch_count(epsilon)
    start = line.used
    lower, upper = 0.0, 1.0
    tracing = trace.isEnabledFor(logging.DEBUG)

    for k in range(1, K + 1):
        state = EpochState(k, lower, upper)
        delta_k = delta / (K * 2 ** k)
        try:
            lower, upper, decision = _run_epoch(line, state, delta_k)
        except BudgetExhausted:
            logger.debug("line-search at %s stopped in epoch %d: budget exhausted", line.anchor, k)
            return ThresholdEstimate((lower + upper) / 2, lower, upper, line.used - start, False)
        if tracing:
            trace.debug(json.dumps({
                "event": "epoch", "anchor": list(line.anchor), "k": k,
                "L": state.lower, "R": state.upper, "t_k": state.pulls,
                "decision": decision,
            }))

    return ThresholdEstimate((lower + upper) / 2, lower, upper, line.used - start, True)
