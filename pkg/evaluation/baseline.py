"""
Passive reference learner: n labels at i.i.d. uniform points, then a
histogram plug-in classifier on a regular grid of [0,1]^d.
"""

import logging
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)


def default_grid_side(n: int, d: int) -> int:
    """About 64 labels per cell, at least two cells per axis."""
    return max(2, int((n / 64) ** (1.0 / d)))


@dataclass(frozen=True)
class HistogramClassifier:
    grid_side: int
    labels: np.ndarray  # majority label per cell, shape (grid_side,) * d
    counts: np.ndarray

    @property
    def dims(self) -> int:
        return self.labels.ndim

    def cell_of(self, x: np.ndarray) -> np.ndarray:
        return np.clip(np.floor(x * self.grid_side).astype(int), 0, self.grid_side - 1)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        cells = self.cell_of(x)
        return self.labels[tuple(np.moveaxis(cells, -1, 0))]

    def g_hat(self, x_tilde) -> np.ndarray:
        """Lower edge of the lowest label-1 cell in each column; inf if the column has none."""
        x = np.asarray(x_tilde, dtype=float)
        columns = self.labels[tuple(np.moveaxis(self.cell_of(x), -1, 0))]
        has_one = columns.any(axis=-1)
        first = np.argmax(columns, axis=-1)
        return np.where(has_one, first / self.grid_side, np.inf)


def passive_baseline(oracle, n: int, grid_side: int, seed: int = 0) -> HistogramClassifier:
    d = oracle.instance.dims
    if grid_side < 1:
        raise ValueError(f"grid_side must be >= 1, got {grid_side}")
    if n < grid_side ** d:
        raise ValueError(f"n={n} is smaller than the {grid_side ** d} histogram cells")

    points = np.random.default_rng(seed).random((n, d))
    observed = oracle.query_many(points)

    shape = (grid_side,) * d
    cells = np.clip(np.floor(points * grid_side).astype(int), 0, grid_side - 1)
    flat = np.ravel_multi_index(tuple(cells.T), shape)
    counts = np.bincount(flat, minlength=grid_side ** d)
    ones = np.bincount(flat, weights=observed, minlength=grid_side ** d)
    # ties and empty cells get label 0
    labels = (2 * ones > counts).astype(int).reshape(shape)
    logger.debug("passive baseline: %d labels over %d cells, %d empty",
                 n, grid_side ** d, int((counts == 0).sum()))
    return HistogramClassifier(grid_side, labels, counts.reshape(shape))
