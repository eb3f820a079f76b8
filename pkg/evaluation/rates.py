"""Sweep tables and log-log rate fits of sup-norm error against the budget."""

from dataclasses import dataclass
from typing import Any, Dict, Iterable

import numpy as np
import pandas as pd
from scipy.stats import linregress

from estimator.theory import rate_exponent
from problem.exceptions import BoundaryError

COLUMNS = ["n", "seed", "sup_error", "excess_risk", "labels_used", "wall_time_ms"]
MIN_BUDGETS = 4
MIN_SEEDS = 20


class RateFitError(BoundaryError, ValueError):
    pass


class SweepResult:
    """Rows keyed by (n, seed), always kept sorted by that key."""

    def __init__(self, rows: Iterable[Dict[str, Any]]):
        frame = pd.DataFrame(list(rows), columns=COLUMNS)
        if frame.duplicated(["n", "seed"]).any():
            raise ValueError("sweep rows must be unique per (n, seed)")
        if (frame["sup_error"] < 0).any():
            raise ValueError("sup_error must be non-negative")
        if (frame["labels_used"] > frame["n"]).any():
            raise ValueError("a row used more labels than its budget")
        self.frame = frame.sort_values(["n", "seed"], kind="mergesort").reset_index(drop=True)

    def __len__(self):
        return len(self.frame)

    def budgets(self):
        return sorted(self.frame["n"].unique().tolist())

    def medians(self) -> pd.Series:
        return self.frame.groupby("n")["sup_error"].median()

    def to_csv(self, path) -> None:
        self.frame.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")

    @classmethod
    def from_csv(cls, path) -> "SweepResult":
        return cls(pd.read_csv(path).to_dict("records"))


@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    r2: float
    theoretical: float

    @property
    def deviation(self) -> float:
        return self.slope - self.theoretical

    def as_dict(self) -> Dict[str, float]:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "r2": self.r2,
            "theoretical": self.theoretical,
        }


def fit_rate(sweep: SweepResult, alpha: float, kappa: float, d: int,
             min_budgets: int = MIN_BUDGETS, min_seeds: int = MIN_SEEDS) -> RateFit:
    """Least-squares slope of log(median sup_error) against log n."""
    budgets = sweep.budgets()
    if len(budgets) < min_budgets:
        raise RateFitError(f"need at least {min_budgets} budgets, got {len(budgets)}")
    seeds_per_budget = sweep.frame.groupby("n")["seed"].nunique()
    if seeds_per_budget.min() < min_seeds:
        raise RateFitError(
            f"need at least {min_seeds} seeds per budget, got {int(seeds_per_budget.min())}"
        )
    medians = sweep.medians()
    if not np.all(np.isfinite(medians.to_numpy())):
        vacuous = medians[~np.isfinite(medians)].index.tolist()
        raise RateFitError(f"median sup_error is infinite at n={vacuous}")
    if (medians <= 0).any():
        raise RateFitError("median sup_error is zero; no rate can be fitted")

    fit = linregress(np.log(medians.index.to_numpy(dtype=float)), np.log(medians.to_numpy()))
    return RateFit(
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r2=float(fit.rvalue ** 2),
        theoretical=rate_exponent(alpha, kappa, d),
    )
