"""
Ground-truth decision boundaries g*: [0,1]^{d-1} -> [0,1].

Every constructor scales its coefficients so that the realized function is a
member of the Hölder class Sigma(lambda, alpha); `holder_audit` checks that
claim on random pairs using analytic Taylor polynomials.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np

from .exceptions import InvalidInstance


def holder_floor(alpha: float) -> int:
    """Largest integer strictly smaller than alpha (so holder_floor(1) == 0)."""
    return int(math.ceil(alpha)) - 1


class BoundaryFamily(str, Enum):
    AFFINE = "affine"
    SINUSOID = "sinusoid"
    BUMP_SUM = "bumpsum"


@dataclass(frozen=True)
class SmoothnessParams:
    alpha: float
    lam: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise InvalidInstance(f"alpha must be > 0, got {self.alpha}")
        if not self.lam >= 1:
            raise InvalidInstance(f"lambda must be >= 1, got {self.lam}")

    @property
    def degree(self) -> int:
        return holder_floor(self.alpha)


def _as_points(x_tilde) -> np.ndarray:
    return np.atleast_1d(np.asarray(x_tilde, dtype=float))


class BoundaryFn:
    """Callable boundary; accepts arrays of shape (..., d-1)."""

    family: BoundaryFamily
    dims: int
    smoothness: SmoothnessParams

    def __call__(self, x_tilde) -> np.ndarray:
        raise NotImplementedError

    def taylor(self, x_tilde, y_tilde, degree: int) -> np.ndarray:
        """Degree-`degree` Taylor polynomial of g expanded at y, evaluated at x."""
        raise NotImplementedError

    def coefficients(self) -> Dict[str, Any]:
        raise NotImplementedError

    def describe(self) -> Dict[str, Any]:
        return {
            "family": self.family.value,
            "d": self.dims,
            "alpha": self.smoothness.alpha,
            "lambda": self.smoothness.lam,
            **self.coefficients(),
        }


@dataclass(frozen=True)
class AffineBoundary(BoundaryFn):
    """g(x) = offset + sum_i slope_i (x_i - 1/2)."""

    dims: int
    smoothness: SmoothnessParams
    offset: float
    slopes: tuple

    family = BoundaryFamily.AFFINE

    def __post_init__(self):
        total = sum(abs(s) for s in self.slopes)
        if len(self.slopes) != self.dims - 1:
            raise InvalidInstance(
                f"affine boundary needs {self.dims - 1} slopes, got {len(self.slopes)}"
            )
        # the beta <= 1 level of the Hölder condition needs the l1 slope <= lambda
        if total > self.smoothness.lam:
            raise InvalidInstance(
                f"affine slopes sum to {total:.4g} > lambda={self.smoothness.lam}"
            )
        if self.offset - total / 2 < 0 or self.offset + total / 2 > 1:
            raise InvalidInstance(
                f"affine boundary leaves [0,1]: offset={self.offset}, |slopes|={total:.4g}"
            )

    def __call__(self, x_tilde) -> np.ndarray:
        x = _as_points(x_tilde)
        return self.offset + (x - 0.5) @ np.asarray(self.slopes, dtype=float)

    def taylor(self, x_tilde, y_tilde, degree: int) -> np.ndarray:
        if degree >= 1:
            return self(x_tilde)
        return self(y_tilde)

    def coefficients(self) -> Dict[str, Any]:
        return {"offset": self.offset, "slopes": list(self.slopes)}


@dataclass(frozen=True)
class SinusoidBoundary(BoundaryFn):
    """g(x) = center + amplitude / (d-1) * sum_i sin(2 pi freq x_i + phase_i)."""

    dims: int
    smoothness: SmoothnessParams
    amplitude: float
    frequency: float
    phases: tuple
    center: float = 0.5

    family = BoundaryFamily.SINUSOID

    @staticmethod
    def max_amplitude(smoothness: SmoothnessParams, frequency: float) -> float:
        """Largest amplitude for which every Taylor level k <= floor(alpha) holds.

        The separable sum has no mixed derivatives, so the order-(k+1)
        remainder is bounded by A (2 pi f)^{k+1} / (k+1)! * ||x - y||^{k+1}.
        """
        omega = 2 * math.pi * frequency
        return min(
            smoothness.lam * math.factorial(k + 1) / omega ** (k + 1)
            for k in range(smoothness.degree + 1)
        )

    def __post_init__(self):
        if self.frequency <= 0:
            raise InvalidInstance(f"frequency must be > 0, got {self.frequency}")
        if len(self.phases) != self.dims - 1:
            raise InvalidInstance(
                f"sinusoid boundary needs {self.dims - 1} phases, got {len(self.phases)}"
            )
        limit = self.max_amplitude(self.smoothness, self.frequency)
        if self.amplitude < 0 or self.amplitude > limit * (1 + 1e-12):
            raise InvalidInstance(
                f"amplitude {self.amplitude:.4g} exceeds the Hölder limit {limit:.4g} "
                f"for lambda={self.smoothness.lam}, alpha={self.smoothness.alpha}, "
                f"frequency={self.frequency}"
            )
        if self.center - self.amplitude < 0 or self.center + self.amplitude > 1:
            raise InvalidInstance(
                f"sinusoid boundary leaves [0,1]: center={self.center}, amplitude={self.amplitude}"
            )

    def _angles(self, x: np.ndarray) -> np.ndarray:
        return 2 * math.pi * self.frequency * x + np.asarray(self.phases, dtype=float)

    def __call__(self, x_tilde) -> np.ndarray:
        x = _as_points(x_tilde)
        scale = self.amplitude / (self.dims - 1)
        return self.center + scale * np.sin(self._angles(x)).sum(axis=-1)

    def taylor(self, x_tilde, y_tilde, degree: int) -> np.ndarray:
        x = _as_points(x_tilde)
        y = _as_points(y_tilde)
        omega = 2 * math.pi * self.frequency
        theta = self._angles(y)
        step = x - y
        terms = np.zeros_like(step)
        for k in range(degree + 1):
            # k-th derivative of sin is sin shifted by k * pi / 2
            terms += np.sin(theta + k * math.pi / 2) * (omega * step) ** k / math.factorial(k)
        return self.center + self.amplitude / (self.dims - 1) * terms.sum(axis=-1)

    def coefficients(self) -> Dict[str, Any]:
        return {
            "amplitude": self.amplitude,
            "frequency": self.frequency,
            "phases": list(self.phases),
            "center": self.center,
        }


@dataclass(frozen=True)
class BumpSumBoundary(BoundaryFn):
    """
    1/2 plus signed bumps on a regular grid of [0,1]^{d-1}.

    Each cell of half-width h = 1 / (2 * bumps_per_axis) carries a flat-topped
    bump of height C h^alpha / 2 that vanishes on the cell faces. Only
    alpha <= 1 is certified: the bump profile is Hölder with constant
    2^alpha * C, so C = lambda * 2^-alpha suffices.
    """

    dims: int
    smoothness: SmoothnessParams
    bumps_per_axis: int
    signs: tuple
    scale: float = field(default=0.0)

    family = BoundaryFamily.BUMP_SUM

    def __post_init__(self):
        alpha = self.smoothness.alpha
        if alpha > 1:
            raise InvalidInstance(
                f"bump-sum boundaries are only certified for alpha <= 1, got {alpha}"
            )
        if self.bumps_per_axis < 1:
            raise InvalidInstance(f"bumps_per_axis must be >= 1, got {self.bumps_per_axis}")
        if len(self.signs) != self.bumps_per_axis ** (self.dims - 1):
            raise InvalidInstance("one sign per bump is required")
        h = self.half_width
        limit = min(self.smoothness.lam * 2 ** -alpha, h ** -alpha)
        if self.scale == 0.0:
            object.__setattr__(self, "scale", limit)
        elif self.scale < 0 or self.scale > limit * (1 + 1e-12):
            raise InvalidInstance(f"bump scale {self.scale:.4g} exceeds the limit {limit:.4g}")

    @property
    def half_width(self) -> float:
        return 1.0 / (2 * self.bumps_per_axis)

    def _profile(self, r: np.ndarray) -> np.ndarray:
        h = self.half_width
        alpha = self.smoothness.alpha
        c = self.scale
        k = 4.0 ** (alpha - 1)
        outer = c * k * np.clip(h - r, 0.0, None) ** alpha
        inner = c * (h ** alpha / 2 - k * np.clip(r - h / 2, 0.0, None) ** alpha)
        return np.where(r <= h / 2, c * h ** alpha / 2,
                        np.where(r >= h, 0.0, np.where(r > 0.75 * h, outer, inner)))

    def __call__(self, x_tilde) -> np.ndarray:
        x = _as_points(x_tilde)
        m = self.bumps_per_axis
        cell = np.clip(np.floor(x * m), 0, m - 1).astype(int)
        centers = (cell + 0.5) / m
        r = np.abs(x - centers).max(axis=-1)
        flat = np.ravel_multi_index(tuple(np.moveaxis(cell, -1, 0)), (m,) * (self.dims - 1))
        signs = np.asarray(self.signs, dtype=float)[flat]
        return 0.5 + signs * self._profile(r)

    def taylor(self, x_tilde, y_tilde, degree: int) -> np.ndarray:
        return self(y_tilde)

    def coefficients(self) -> Dict[str, Any]:
        return {
            "bumps_per_axis": self.bumps_per_axis,
            "signs": list(self.signs),
            "scale": self.scale,
        }


def make_boundary(
    family: BoundaryFamily,
    d: int,
    smoothness: SmoothnessParams,
    rng: np.random.Generator,
    *,
    slope=None,
    offset: float = 0.5,
    amplitude: Optional[float] = None,
    frequency: float = 1.0,
    bumps_per_axis: int = 2,
) -> BoundaryFn:
    """Build a certified boundary; unspecified coefficients are drawn from rng."""
    family = BoundaryFamily(family)
    if family is BoundaryFamily.AFFINE:
        if slope is None:
            raw = rng.uniform(-1.0, 1.0, size=d - 1)
            budget = min(smoothness.lam, 2 * min(offset, 1 - offset)) / 2
            slopes = raw / max(np.abs(raw).sum(), 1e-12) * budget
        else:
            slopes = np.broadcast_to(np.asarray(slope, dtype=float), (d - 1,))
        return AffineBoundary(d, smoothness, float(offset), tuple(float(s) for s in slopes))

    if family is BoundaryFamily.SINUSOID:
        phases = tuple(float(p) for p in rng.uniform(0.0, 2 * math.pi, size=d - 1))
        if amplitude is None:
            amplitude = min(SinusoidBoundary.max_amplitude(smoothness, frequency), 0.25)
        return SinusoidBoundary(d, smoothness, float(amplitude), float(frequency), phases)

    signs = tuple(int(s) for s in rng.choice([-1, 1], size=bumps_per_axis ** (d - 1)))
    return BumpSumBoundary(d, smoothness, int(bumps_per_axis), signs)


def holder_audit(boundary: BoundaryFn, n_pairs: int, rng: np.random.Generator) -> float:
    """
    Worst ratio |g(x) - TP_{y,m}(x)| / (lambda ||x - y||_inf^beta) over sampled pairs,
    for every Taylor level m = 0..floor(alpha) with beta = min(m + 1, alpha).

    Half the pairs are close (distances down to 1e-3) so small-step behaviour
    is covered. A value <= 1 means no violation was found.
    """
    k = boundary.dims - 1
    x = rng.random((n_pairs, k))
    far = rng.random((n_pairs, k))
    near = np.clip(x + rng.uniform(-1, 1, (n_pairs, k)) * 10 ** rng.uniform(-3, -1, (n_pairs, 1)), 0, 1)
    y = np.where(np.arange(n_pairs)[:, None] % 2 == 0, far, near)
    dist = np.abs(x - y).max(axis=-1)
    keep = dist > 0
    x, y, dist = x[keep], y[keep], dist[keep]

    alpha = boundary.smoothness.alpha
    lam = boundary.smoothness.lam
    worst = 0.0
    g_x = boundary(x)
    for m in range(holder_floor(alpha) + 1):
        beta = min(m + 1, alpha)
        remainder = np.abs(g_x - boundary.taylor(x, y, m))
        worst = max(worst, float((remainder / (lam * dist ** beta)).max()))
    return worst
