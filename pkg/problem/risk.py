"""Monte-Carlo excess risk R(f) - R(f*) under the instance's marginal P_X."""

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.stats import norm

from .instances import MarginalKind, ProblemInstance

Classifier = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class RiskEstimate:
    estimate: float
    half_width: float
    n_mc: int

    def as_dict(self):
        return {"estimate": self.estimate, "half_width": self.half_width, "n_mc": self.n_mc}


def sample_marginal(instance: ProblemInstance, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draw `size` points of [0,1]^d from P_X (rejection sampling for margin marginals)."""
    marginal = instance.marginal
    d = instance.dims
    if marginal.kind is MarginalKind.UNIFORM:
        return rng.random((size, d))

    chunks = []
    have = 0
    while have < size:
        batch = rng.random((max(2 * (size - have), 64), d))
        dist = np.abs(instance.signed_distance(batch))
        if marginal.kind is MarginalKind.HARD_MARGIN:
            keep = dist > marginal.delta0
        else:
            # density proportional to dist^(kappa' - kappa0) <= 1
            keep = rng.random(len(batch)) < dist ** (marginal.kappa_prime - marginal.kappa0)
        chunks.append(batch[keep])
        have += int(keep.sum())
    return np.concatenate(chunks)[:size]


def excess_risk_mc(
    instance: ProblemInstance,
    classifier: Classifier,
    n_mc: int,
    seed: int,
    confidence: float = 0.95,
) -> RiskEstimate:
    """
    Estimate the integral of |1 - 2 eta| over {f != f*} with a normal-approximation
    half-width. The classifier receives an (n_mc, d) array and returns 0/1 labels.
    """
    if n_mc < 1:
        raise ValueError(f"n_mc must be >= 1, got {n_mc}")
    rng = np.random.default_rng(seed)
    points = sample_marginal(instance, n_mc, rng)
    predicted = np.asarray(classifier(points)).astype(int)
    bayes = instance.bayes_classifier(points)
    loss = np.where(predicted != bayes, np.abs(1.0 - 2.0 * instance.eta(points)), 0.0)
    z = norm.ppf(0.5 + confidence / 2)
    half_width = z * loss.std(ddof=1) / np.sqrt(n_mc) if n_mc > 1 else float("inf")
    return RiskEstimate(float(loss.mean()), float(half_width), n_mc)
