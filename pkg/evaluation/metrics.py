from typing import Callable

import numpy as np

from problem.instances import ProblemInstance

MIN_RESOLUTION = 17


def audit_grid(k: int, resolution: int) -> np.ndarray:
    """Uniform grid of [0,1]^k with `resolution` points per axis, shape (resolution^k, k)."""
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    axis = np.linspace(0.0, 1.0, resolution)
    return np.stack(np.meshgrid(*[axis] * k, indexing="ij"), axis=-1).reshape(-1, k)


def default_resolution(M: int) -> int:
    """Four audit points per step of the finest grid reached."""
    return max(MIN_RESOLUTION, 4 * M + 1)


def sup_error(g_hat: Callable[[np.ndarray], np.ndarray], instance: ProblemInstance, resolution: int) -> float:
    """
    max |g_hat - g*| over the audit grid of [0,1]^(d-1); inf when g_hat is
    infinite anywhere (no label-1 region above some column).
    """
    points = audit_grid(instance.dims - 1, resolution)
    estimate = np.asarray(g_hat(points), dtype=float)
    if not np.all(np.isfinite(estimate)):
        return float("inf")
    return float(np.max(np.abs(estimate - instance.boundary(points))))
