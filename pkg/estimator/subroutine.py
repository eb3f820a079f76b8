"""
Hierarchical boundary estimation with abstention.

Depth l places (M_l + 1)^(d-1) vertical lines on a dyadic grid and
line-searches each one to precision eps_l. The deepest depth whose grid
completed within the budget is interpolated, and everything farther than
4b from the interpolant is labeled; the band in between is left unlabeled.
"""

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np

from linesearch.search import LineOracle, ThresholdEstimate, epoch_count, run_line_search
from problem.boundaries import holder_floor
from problem.oracle import BudgetSlice

from .interpolation import PiecewiseInterpolant, fit_interpolant, grid_nodes

logger = logging.getLogger(__name__)
trace = logging.getLogger("boundary.trace")


@dataclass(frozen=True)
class DepthConfig:
    l: int
    M: int
    eps: float
    delta: float

    @classmethod
    def for_depth(cls, l: int, alpha: float, lam: float, delta: float, d: int) -> "DepthConfig":
        if l < 1:
            raise ValueError(f"depth must be >= 1, got {l}")
        base = max(1, holder_floor(alpha))
        return cls(
            l=l,
            M=base * 2 ** l,
            eps=lam * 2.0 ** (-l * alpha),
            delta=delta / (base * 2.0 ** (l * (d + 1))),
        )

    @property
    def epochs(self) -> int:
        return epoch_count(self.eps)

    def lines(self, d: int) -> int:
        return (self.M + 1) ** (d - 1)

    def min_cost(self, d: int) -> int:
        """Fewest labels a full grid can consume: one pull at three points per line."""
        return 3 * self.lines(d) if self.epochs else 0

    def as_dict(self) -> Dict[str, Any]:
        return {"l": self.l, "M_l": self.M, "eps_l": self.eps, "delta_l": self.delta}


@dataclass(frozen=True)
class ThresholdGrid:
    """Complete grid of line-search results at one depth, indexed by a in {0..M}^(d-1)."""

    config: DepthConfig
    T: np.ndarray
    L: np.ndarray
    R: np.ndarray
    N: np.ndarray

    @classmethod
    def unqueried(cls, config: DepthConfig, k: int) -> "ThresholdGrid":
        """Grid for a depth whose precision needs no labels: every line returns [0, 1]."""
        shape = (config.M + 1,) * k
        return cls(config, np.full(shape, 0.5), np.zeros(shape), np.ones(shape),
                   np.zeros(shape, dtype=int))

    def __getitem__(self, index) -> ThresholdEstimate:
        index = tuple(index)
        return ThresholdEstimate(
            float(self.T[index]), float(self.L[index]), float(self.R[index]),
            int(self.N[index]), True,
        )

    @property
    def labels_used(self) -> int:
        return int(self.N.sum())


def lowest_label_one(upper) -> np.ndarray:
    """
    min{x_d in [0, 1] : x_d >= upper} per column: 0 when the envelope lies
    below the cube, +inf when the column's label-1 set misses the cube.
    """
    upper = np.asarray(upper, dtype=float)
    return np.where(upper > 1, np.inf, np.maximum(upper, 0.0))


@dataclass(frozen=True)
class LabeledRegions:
    """
    S0 = {x in cube: x_d <= lower(x~)} and S1 = {x in cube: x_d >= upper(x~)}.

    With no completed depth both sets are empty (lower = -inf, upper = +inf).
    """

    interpolant: Optional[PiecewiseInterpolant]
    l_star: int
    labels_used: int
    depths: Tuple[Dict[str, Any], ...] = field(default_factory=tuple)

    @property
    def vacuous(self) -> bool:
        return self.interpolant is None

    @property
    def bias(self) -> float:
        return float("inf") if self.vacuous else self.interpolant.bias

    @property
    def margin(self) -> float:
        return 4 * self.bias

    def center(self, x_tilde) -> np.ndarray:
        x = np.asarray(x_tilde, dtype=float)
        if self.vacuous:
            return np.full(x.shape[:-1], np.nan)
        return self.interpolant(x)

    def lower(self, x_tilde) -> np.ndarray:
        x = np.asarray(x_tilde, dtype=float)
        if self.vacuous:
            return np.full(x.shape[:-1], -np.inf)
        return self.interpolant(x) - self.margin

    def upper(self, x_tilde) -> np.ndarray:
        x = np.asarray(x_tilde, dtype=float)
        if self.vacuous:
            return np.full(x.shape[:-1], np.inf)
        return self.interpolant(x) + self.margin

    def g_hat(self, x_tilde) -> np.ndarray:
        return lowest_label_one(self.upper(x_tilde))

    def label(self, x) -> np.ndarray:
        """1 on S1, 0 on S0, -1 on the abstention band."""
        x = np.asarray(x, dtype=float)
        height = x[..., -1]
        out = np.full(height.shape, -1, dtype=int)
        out[height <= self.lower(x[..., :-1])] = 0
        out[height >= self.upper(x[..., :-1])] = 1
        return out

    def meta(self) -> Dict[str, Any]:
        return {"l_star": self.l_star, "labels_used": self.labels_used, "bias": self.bias}


def _search_depth(budget: BudgetSlice, config: DepthConfig, k: int) -> Optional[ThresholdGrid]:
    """Line-search every grid line in lexicographic order; None if any line fails."""
    shape = (config.M + 1,) * k
    T, L, R = np.empty(shape), np.empty(shape), np.empty(shape)
    N = np.zeros(shape, dtype=int)
    for index, anchor in zip(np.ndindex(*shape), grid_nodes(config.M, k)):
        estimate = run_line_search(LineOracle(budget, anchor), config.eps, config.delta)
        if not estimate.completed:
            return None
        T[index], L[index], R[index], N[index] = estimate.T, estimate.L, estimate.R, estimate.N
    return ThresholdGrid(config, T, L, R, N)


def run_subroutine(oracle, n: int, delta: float, lam: float, alpha: float) -> LabeledRegions:
    """
    Refine depths l = 1, 2, ... until the budget interrupts one, then label
    around the interpolant of the last complete depth.

    At most n labels are drawn from `oracle`. Depths that could not complete
    even at one pull per line are not started, and depths with more lines than
    the whole budget end the refinement.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if alpha <= 0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    if lam < 1:
        raise ValueError(f"lambda must be >= 1, got {lam}")

    budget = BudgetSlice(oracle, n)
    d = oracle.instance.dims
    k = d - 1
    tracing = trace.isEnabledFor(logging.DEBUG)
    records = []
    best: Optional[ThresholdGrid] = None

    l = 0
    while True:
        l += 1
        config = DepthConfig.for_depth(l, alpha, lam, delta, d)
        if config.lines(d) > budget.cap or config.min_cost(d) > budget.remaining:
            break
        start = budget.used
        if config.epochs == 0:
            grid = ThresholdGrid.unqueried(config, k)
        else:
            grid = _search_depth(budget, config, k)

        record = {**config.as_dict(), "N_l": budget.used - start, "completed": grid is not None}
        records.append(record)
        if tracing:
            trace.debug(json.dumps({"event": "depth", "alpha": alpha, **record}))
        if grid is None:
            break
        best = grid

    if best is None:
        logger.debug("no depth completed within %d labels (alpha=%s)", n, alpha)
        return LabeledRegions(None, 0, budget.used, tuple(records))

    interpolant = fit_interpolant(best, alpha, lam)
    return LabeledRegions(interpolant, best.config.l, budget.used, tuple(records))
