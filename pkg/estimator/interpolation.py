"""
Piecewise tensor-product Lagrange interpolation of threshold grids.

For alpha > 1 the grid {a / M : a in {0..M}^(d-1)} is cut into cells of
side floor(alpha) / M, and each cell carries the degree-floor(alpha)
tensor-product interpolant of its (floor(alpha)+1)^(d-1) nodal thresholds.
For alpha <= 1 every cell of side 1 / M is a constant equal to the
threshold at its lower corner.

Points on a face shared by two cells belong to the lexicographically
smaller cell; x = 0 belongs to the first cell.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from problem.boundaries import holder_floor


def cardinal_matrix(nodes, x) -> np.ndarray:
    """
    Lagrange cardinal polynomials of `nodes`, evaluated at `x`.

    Returns a (len(x), len(nodes)) matrix whose product with nodal values
    gives the interpolated values at x (barycentric weights, product form).
    """
    nodes = np.asarray(nodes, dtype=float)
    x = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
    nd = len(nodes)

    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    weights = np.prod(1.0 / diff, axis=1)

    offsets = x[:, None] - nodes[None, :]
    out = np.empty((len(x), nd))
    for j in range(nd):
        temp = offsets.copy()
        temp[:, j] = 1.0
        out[:, j] = weights[j] * np.prod(temp, axis=1)
    return out


def _local_nodes(degree: int) -> np.ndarray:
    return np.arange(degree + 1, dtype=float)


def lagrange_basis(q, a, x, M: int, alpha: float):
    """
    Tensor-product cardinal polynomial of node a / M in cell q, at x.

    Cell q spans [q_i p / M, (q_i + 1) p / M] in coordinate i with p = floor(alpha);
    its nodes are the grid points a with q_i p <= a_i <= q_i p + p.
    """
    if alpha <= 1:
        raise ValueError(f"lagrange_basis needs alpha > 1, got {alpha}")
    p = holder_floor(alpha)
    if M % p:
        raise ValueError(f"M={M} is not a multiple of floor(alpha)={p}")
    q = np.asarray(q, dtype=int)
    a = np.asarray(a, dtype=int)
    local = a - q * p
    if q.shape != a.shape or np.any(local < 0) or np.any(local > p):
        raise ValueError(f"node {tuple(a)} is not in cell {tuple(q)}")

    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 1
    x = np.atleast_2d(x)
    s = x * M - q * p
    value = np.ones(len(x))
    nodes = _local_nodes(p)
    for i in range(len(q)):
        value *= cardinal_matrix(nodes, s[:, i])[:, local[i]]
    return float(value[0]) if scalar else value


@dataclass(frozen=True)
class PiecewiseInterpolant:
    alpha: float
    lam: float
    M: int
    values: np.ndarray  # nodal thresholds, shape (M + 1,) * (d - 1)

    @property
    def dims(self) -> int:
        return self.values.ndim + 1

    @property
    def degree(self) -> int:
        return holder_floor(self.alpha)

    @property
    def cell_side(self) -> int:
        """Cell side length in grid steps."""
        return max(1, self.degree)

    @property
    def cells_per_axis(self) -> int:
        return self.M // self.cell_side

    @property
    def bias(self) -> float:
        """b = lambda * ceil(alpha)^(d * ceil(alpha)) * M^-alpha."""
        up = math.ceil(self.alpha)
        return self.lam * up ** (self.dims * up) * self.M ** -self.alpha

    def owning_cell(self, x: np.ndarray) -> np.ndarray:
        cells = self.cells_per_axis
        return np.clip(np.ceil(x * cells).astype(int) - 1, 0, cells - 1)

    def __call__(self, x_tilde) -> np.ndarray:
        return eval_interpolant(self, x_tilde)


def fit_interpolant(grid, alpha: float, lam: float) -> PiecewiseInterpolant:
    """Interpolant of a complete ThresholdGrid at its depth."""
    values = np.asarray(grid.T, dtype=float)
    M = grid.config.M
    if values.shape != (M + 1,) * values.ndim:
        raise ValueError(f"grid of shape {values.shape} does not match M={M}")
    if alpha > 1 and M % holder_floor(alpha):
        raise ValueError(f"M={M} is not a multiple of floor(alpha)={holder_floor(alpha)}")
    return PiecewiseInterpolant(alpha=alpha, lam=lam, M=M, values=values)


def eval_interpolant(interp: PiecewiseInterpolant, x_tilde) -> np.ndarray:
    """Value of the owning cell's polynomial at points of shape (..., d-1)."""
    x = np.asarray(x_tilde, dtype=float)
    k = interp.dims - 1
    if x.shape[-1:] != (k,):
        raise ValueError(f"expected points with trailing axis {k}, got shape {x.shape}")
    lead = x.shape[:-1]
    points = x.reshape(-1, k)
    q = interp.owning_cell(points)

    if interp.degree == 0:
        return interp.values[tuple(q.T)].reshape(lead)

    p = interp.degree
    s = points * interp.M - q * p
    nodes = _local_nodes(p)
    basis = [cardinal_matrix(nodes, s[:, i]) for i in range(k)]
    out = np.zeros(len(points))
    for local in itertools.product(range(p + 1), repeat=k):
        weight = np.ones(len(points))
        for i, j in enumerate(local):
            weight *= basis[i][:, j]
        index = q * p + np.asarray(local)
        out += weight * interp.values[tuple(index.T)]
    return out.reshape(lead)


def grid_nodes(M: int, k: int) -> np.ndarray:
    """All grid anchors a / M in lexicographic order of a, shape ((M+1)^k, k)."""
    axes: Sequence[np.ndarray] = [np.arange(M + 1)] * k
    index = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, k)
    return index / M
