import logging
from typing import Sequence

import numpy as np

from .exceptions import BudgetExhausted
from .instances import ProblemInstance

logger = logging.getLogger(__name__)

GENERATOR_NAME = "PCG64"


class LabelOracle:
    """
    Budgeted membership-query oracle: Bernoulli(eta(x)) labels, one uniform
    draw per request, so identical (seed, query sequence) replays identically.

    Single-owner mutable state; never share one oracle between workers.
    """

    def __init__(self, instance: ProblemInstance, seed: int, cap: int):
        if cap < 0:
            raise ValueError(f"cap must be >= 0, got {cap}")
        self.instance = instance
        self.seed = int(seed)
        self.cap = int(cap)
        self._used = 0
        self._rng = np.random.Generator(np.random.PCG64(self.seed))
        # boundary height of the last queried anchor; line-searches hit one anchor repeatedly
        self._anchor = None
        self._height = 0.0

    @property
    def used(self) -> int:
        return self._used

    @property
    def remaining(self) -> int:
        return self.cap - self._used

    def _height_at(self, anchor: tuple) -> float:
        if anchor != self._anchor:
            self._anchor = anchor
            self._height = float(self.instance.boundary(np.asarray(anchor, dtype=float)))
        return self._height

    def query(self, x: Sequence[float]) -> int:
        if self._used >= self.cap:
            logger.debug("oracle seed=%s exhausted its cap of %s labels", self.seed, self.cap)
            raise BudgetExhausted(self.cap)
        x = tuple(float(v) for v in x)
        p = self.instance.eta_scalar(x[-1] - self._height_at(x[:-1]))
        self._used += 1
        return int(self._rng.random() < p)

    def query_many(self, points: np.ndarray) -> np.ndarray:
        """Vectorized labels for a batch; all-or-nothing against the cap."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if len(points) > self.remaining:
            raise BudgetExhausted(self.cap)
        p = self.instance.eta(points)
        self._used += len(points)
        return (self._rng.random(len(points)) < p).astype(int)

    def __repr__(self):
        return f"LabelOracle(seed={self.seed}, used={self._used}, cap={self.cap})"


def query(oracle: LabelOracle, x: Sequence[float]) -> int:
    return oracle.query(x)


class BudgetSlice:
    """
    At most `n` further labels drawn from `base`. Exposes the oracle
    interface so algorithms can be handed a budget smaller than the
    oracle's own cap.
    """

    def __init__(self, base, n: int):
        if n < 0:
            raise ValueError(f"n must be >= 0, got {n}")
        self.base = base
        self.instance = base.instance
        self.cap = min(int(n), base.remaining)
        self._start = base.used

    @property
    def used(self) -> int:
        return self.base.used - self._start

    @property
    def remaining(self) -> int:
        return self.cap - self.used

    def query(self, x: Sequence[float]) -> int:
        if self.used >= self.cap:
            raise BudgetExhausted(self.cap)
        return self.base.query(x)

    def query_many(self, points: np.ndarray) -> np.ndarray:
        if len(np.atleast_2d(points)) > self.remaining:
            raise BudgetExhausted(self.cap)
        return self.base.query_many(points)
