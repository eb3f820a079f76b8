"""
Synthetic boundary-fragment classification problems.

The regression function is the two-sided envelope form

    eta(x) = 1/2 + sign(x_d - g*(x~)) * c_eff * |x_d - g*(x~)|^(kappa - 1)

with c <= c_eff <= C <= 0.45, so eta stays inside [0.05, 0.95] without any
clamping and the geometric noise condition holds on the whole cube.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np

from .boundaries import BoundaryFamily, BoundaryFn, SmoothnessParams, make_boundary
from .exceptions import InvalidInstance

MAX_NOISE_CONSTANT = 0.45


@dataclass(frozen=True)
class NoiseParams:
    kappa: float
    c: float

    def __post_init__(self):
        if not self.kappa >= 1:
            raise InvalidInstance(f"kappa must be >= 1, got {self.kappa}")
        if not 0 < self.c <= MAX_NOISE_CONSTANT:
            raise InvalidInstance(
                f"c must lie in (0, {MAX_NOISE_CONSTANT}], got {self.c}"
            )


class MarginalKind(str, Enum):
    UNIFORM = "uniform"
    HARD_MARGIN = "hard"
    SOFT_MARGIN = "soft"


@dataclass(frozen=True)
class Marginal:
    """P_X used for risk evaluation only; the learner picks its own query points."""

    kind: MarginalKind = MarginalKind.UNIFORM
    delta0: Optional[float] = None
    kappa_prime: Optional[float] = None
    kappa0: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", MarginalKind(self.kind))
        if self.kind is MarginalKind.HARD_MARGIN:
            if self.delta0 is None or not 0 < self.delta0 < 0.5:
                raise InvalidInstance(f"hard margin needs 0 < delta0 < 0.5, got {self.delta0}")
        if self.kind is MarginalKind.SOFT_MARGIN:
            if self.kappa_prime is None or self.kappa0 is None:
                raise InvalidInstance("soft margin needs kappa_prime and kappa0")
            if self.kappa0 < 1 or self.kappa_prime < self.kappa0:
                raise InvalidInstance(
                    f"soft margin needs 1 <= kappa0 <= kappa_prime, "
                    f"got kappa0={self.kappa0}, kappa_prime={self.kappa_prime}"
                )

    def describe(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"kind": self.kind.value}
        if self.kind is MarginalKind.HARD_MARGIN:
            out["delta0"] = self.delta0
        elif self.kind is MarginalKind.SOFT_MARGIN:
            out.update(kappa_prime=self.kappa_prime, kappa0=self.kappa0)
        return out


@dataclass(frozen=True)
class ProblemInstance:
    boundary: BoundaryFn
    noise: NoiseParams
    marginal: Marginal = field(default_factory=Marginal)
    eta_upper_const: Optional[float] = None
    c_eff: Optional[float] = None
    noiseless: bool = False
    seed: int = 0

    def __post_init__(self):
        c = self.noise.c
        upper = c if self.eta_upper_const is None else self.eta_upper_const
        c_eff = c if self.c_eff is None else self.c_eff
        if not c <= upper <= MAX_NOISE_CONSTANT:
            raise InvalidInstance(
                f"eta upper constant C must satisfy c <= C <= {MAX_NOISE_CONSTANT}, got {upper}"
            )
        if not c <= c_eff <= upper:
            raise InvalidInstance(f"c_eff must lie in [c, C] = [{c}, {upper}], got {c_eff}")
        object.__setattr__(self, "eta_upper_const", upper)
        object.__setattr__(self, "c_eff", c_eff)

    @property
    def dims(self) -> int:
        return self.boundary.dims

    @property
    def smoothness(self) -> SmoothnessParams:
        return self.boundary.smoothness

    def signed_distance(self, x) -> np.ndarray:
        """x_d - g*(x~) for points of shape (..., d)."""
        x = np.asarray(x, dtype=float)
        return x[..., -1] - self.boundary(x[..., :-1])

    def eta_from_distance(self, dist):
        if self.noiseless:
            return np.where(np.asarray(dist) >= 0, 1.0, 0.0)
        dist = np.asarray(dist, dtype=float)
        return 0.5 + np.sign(dist) * self.c_eff * np.abs(dist) ** (self.noise.kappa - 1)

    def eta_scalar(self, dist: float) -> float:
        """Scalar fast path used by the oracle on every label request."""
        if self.noiseless:
            return 1.0 if dist >= 0 else 0.0
        if dist == 0:
            return 0.5
        return 0.5 + math.copysign(self.c_eff * abs(dist) ** (self.noise.kappa - 1), dist)

    def eta(self, x) -> np.ndarray:
        """Regression function E[Y | X = x]; total on [0,1]^d."""
        return self.eta_from_distance(self.signed_distance(x))

    def bayes_classifier(self, x) -> np.ndarray:
        return (self.signed_distance(x) >= 0).astype(int)

    def describe(self) -> Dict[str, Any]:
        return {
            "family": self.boundary.family.value,
            "d": self.dims,
            "alpha": self.smoothness.alpha,
            "lambda": self.smoothness.lam,
            "kappa": self.noise.kappa,
            "c": self.noise.c,
            "c_eff": self.c_eff,
            "eta_upper": self.eta_upper_const,
            "marginal": self.marginal.describe(),
            "noiseless": self.noiseless,
            "seed": self.seed,
            "boundary": self.boundary.coefficients(),
        }


def make_instance(
    family,
    d: int,
    smoothness: SmoothnessParams,
    noise: NoiseParams,
    marginal: Optional[Marginal] = None,
    seed: int = 0,
    *,
    c_eff: Optional[float] = None,
    eta_upper_const: Optional[float] = None,
    noiseless: bool = False,
    **coefficients,
) -> ProblemInstance:
    """
    Build a problem whose boundary is certified in Sigma(lambda, alpha).

    Family coefficients (slope, offset, amplitude, frequency, bumps_per_axis)
    may be passed explicitly; anything left unspecified is drawn from `seed`.
    """
    if d < 2:
        raise InvalidInstance(f"d must be >= 2, got {d}")
    rng = np.random.default_rng(seed)
    boundary = make_boundary(BoundaryFamily(family), d, smoothness, rng, **coefficients)
    return ProblemInstance(
        boundary=boundary,
        noise=noise,
        marginal=marginal or Marginal(),
        eta_upper_const=eta_upper_const,
        c_eff=c_eff,
        noiseless=noiseless,
        seed=seed,
    )


def eta(instance: ProblemInstance, x) -> np.ndarray:
    return instance.eta(x)
