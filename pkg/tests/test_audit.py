import math
from types import SimpleNamespace

import numpy as np
import pytest

from experiments.audit import column_violations, guaranteed_margin, run_audit, summarize
from experiments.config import RunConfig
from experiments.runner import run_cell

HEIGHTS = np.linspace(0.0, 1.0, 5)


@pytest.mark.parametrize(
    "lower,upper,margin,expected",
    [
        (0.3, 0.7, 0.3, {"crossing": False, "uncovered": False}),
        (0.3, 0.45, 0.3, {"crossing": True, "uncovered": False}),
        (0.55, 0.7, 0.3, {"crossing": True, "uncovered": False}),
        (0.3, 0.9, 0.1, {"crossing": False, "uncovered": True}),
        (-np.inf, np.inf, 1.0, {"crossing": False, "uncovered": False}),
    ],
)
def test_column_violations(lower, upper, margin, expected):
    checks = column_violations(HEIGHTS, np.array([0.5]), np.array([lower]), np.array([upper]), margin)
    assert checks == expected


def test_summary_counts_violations_and_wide_bands():
    config = RunConfig.from_dict({"algorithm": "subroutine"})
    records = [
        {"violation": False, "vacuous": False, "band_exceeds_delta_n": True},
        {"violation": True, "vacuous": False, "band_exceeds_delta_n": False},
        {"violation": False, "vacuous": True},
    ]
    report = summarize(config, records)
    assert report["check"] == "strong"
    assert (report["runs"], report["violations"], report["vacuous_runs"]) == (3, 1, 1)
    assert report["wide_bands"] == 1
    assert report["frequency"] == pytest.approx(1 / 3)
    assert not report["within_threshold"]


def test_guaranteed_margin_without_a_usable_guess_is_infinite():
    config = RunConfig.from_dict({"algorithm": "adaptive"})
    fitted = SimpleNamespace(result=SimpleNamespace(alphas=[1.5, 2.0], n0=100, delta0=0.01))
    assert guaranteed_margin(config, config.build_instance(), 1000, fitted) == math.inf


def test_guaranteed_margin_needs_noise_curvature():
    config = RunConfig.from_dict({"algorithm": "subroutine", "kappa": 1.0})
    assert guaranteed_margin(config, config.build_instance(), 2 ** 16, None) == math.inf


@pytest.mark.slow
def test_noisy_subroutine_keeps_labeled_sets_on_the_right_side():
    # d = 2, alpha = 1, kappa = 1.5, c = 0.4 with a random affine boundary
    config = RunConfig.from_dict({"algorithm": "subroutine", "n": 2 ** 16, "seeds": list(range(30))})
    report = run_audit(config, config.seeds, workers=1)
    assert report["runs"] == 30
    assert report["vacuous_runs"] == 0
    assert report["frequency"] <= 2 * config.delta + 0.03
    assert report["wide_bands"] == 0
    for record in report["records"]:
        assert record["labels_used"] <= 2 ** 16
        assert record["l_star"] >= 1


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(3))
def test_hard_margin_beyond_the_band_gives_zero_risk(seed):
    # from depth 4 on, the band around g* = 0.5 stays inside the hidden strip
    config = RunConfig.from_dict({
        "algorithm": "subroutine", "noiseless": True, "slope": 0.0, "offset": 0.5,
        "marginal": "hard", "delta0": 0.25, "n": 2 ** 18, "risk_samples": 5000,
    })
    outcome = run_cell(config, config.n, seed)
    assert outcome.fitted.result.l_star >= 4
    assert outcome.row["labels_used"] <= 2 ** 18
    assert outcome.row["excess_risk"] == 0.0
