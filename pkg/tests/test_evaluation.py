import math

import numpy as np
import pandas as pd
import pytest

from evaluation.baseline import HistogramClassifier, default_grid_side, passive_baseline
from evaluation.metrics import audit_grid, default_resolution, sup_error
from evaluation.rates import RateFitError, SweepResult, fit_rate


def _row(n, seed, sup=0.1, labels_used=None):
    return {
        "n": n,
        "seed": seed,
        "sup_error": sup,
        "excess_risk": sup / 3,
        "labels_used": n if labels_used is None else labels_used,
        "wall_time_ms": 0,
    }


def _power_law_rows(budgets, seeds, exponent=-0.5, scale=3.0):
    # per-budget spread is symmetric, so the median sits exactly on the power law
    rows = []
    for n in budgets:
        for seed in range(seeds):
            jitter = 1.0 + 0.01 * (seed - (seeds - 1) / 2)
            rows.append(_row(n, seed, scale * n ** exponent * jitter))
    return rows


# ---------------------------------------------------------------------------
# metrics
# ---------------------------------------------------------------------------

def test_audit_grid_shape_and_corners():
    grid = audit_grid(2, 3)
    assert grid.shape == (9, 2)
    assert grid[0].tolist() == [0.0, 0.0]
    assert grid[-1].tolist() == [1.0, 1.0]
    with pytest.raises(ValueError):
        audit_grid(1, 1)


def test_default_resolution():
    assert default_resolution(2) == 17
    assert default_resolution(16) == 65


def test_sup_error(example_instance, flat_instance):
    boundary = example_instance.boundary
    assert sup_error(boundary, example_instance, 33) == 0.0
    assert sup_error(lambda x: boundary(x) + 0.1, example_instance, 33) == pytest.approx(0.1)
    assert sup_error(lambda x: np.full(len(x), 0.53), flat_instance(noiseless=False), 17) == pytest.approx(0.03)
    assert sup_error(lambda x: np.full(len(x), np.inf), example_instance, 33) == math.inf


# ---------------------------------------------------------------------------
# passive baseline
# ---------------------------------------------------------------------------

def test_default_grid_side():
    assert default_grid_side(2 ** 16, 2) == 32
    assert default_grid_side(100, 2) == 2
    assert default_grid_side(2 ** 21, 3) >= 31


def test_noiseless_histogram_recovers_flat_boundary(flat_instance, oracle):
    labels = oracle(flat_instance())
    classifier = passive_baseline(labels, 4096, 8, seed=1)
    assert isinstance(classifier, HistogramClassifier)
    assert labels.used == 4096
    assert classifier.counts.sum() == 4096

    x = np.array([[0.3, 0.9], [0.3, 0.1], [0.99, 0.5], [0.0, 0.49]])
    assert classifier(x).tolist() == [1, 0, 1, 0]
    assert np.all(classifier.g_hat(audit_grid(1, 17)) == 0.5)
    assert sup_error(classifier.g_hat, flat_instance(), 17) == 0.0


def test_columns_without_label_one_have_no_boundary(flat_instance, oracle):
    classifier = passive_baseline(oracle(flat_instance(height=1.0)), 256, 4, seed=0)
    assert np.all(classifier.labels == 0)
    assert np.all(classifier.g_hat(np.array([[0.2], [0.7]])) == np.inf)


def test_ties_and_empty_cells_get_label_zero():
    classifier = HistogramClassifier(2, np.zeros((2, 2), dtype=int), np.zeros((2, 2), dtype=int))
    assert classifier(np.array([[0.9, 0.9]])).tolist() == [0]


def test_passive_baseline_validates_budget(example_instance, oracle):
    with pytest.raises(ValueError):
        passive_baseline(oracle(example_instance), 63, 8)
    with pytest.raises(ValueError):
        passive_baseline(oracle(example_instance), 100, 0)


def test_passive_baseline_is_reproducible(example_instance, oracle):
    first = passive_baseline(oracle(example_instance, seed=5), 2048, 4, seed=9)
    second = passive_baseline(oracle(example_instance, seed=5), 2048, 4, seed=9)
    assert np.array_equal(first.labels, second.labels)


# ---------------------------------------------------------------------------
# sweeps and rate fits
# ---------------------------------------------------------------------------

def test_sweep_rows_are_sorted_by_budget_then_seed():
    sweep = SweepResult([_row(512, 1), _row(256, 3), _row(512, 0), _row(256, 0)])
    assert list(zip(sweep.frame["n"], sweep.frame["seed"])) == [(256, 0), (256, 3), (512, 0), (512, 1)]
    assert sweep.budgets() == [256, 512]
    assert len(sweep) == 4


@pytest.mark.parametrize(
    "rows",
    [
        [_row(256, 0), _row(256, 0)],
        [_row(256, 0, sup=-0.1)],
        [_row(256, 0, labels_used=257)],
    ],
)
def test_sweep_rejects_inconsistent_rows(rows):
    with pytest.raises(ValueError):
        SweepResult(rows)


def test_sweep_csv_is_lossless(tmp_path):
    sweep = SweepResult(_power_law_rows([256, 1024], 3))
    path = tmp_path / "results.csv"
    sweep.to_csv(path)
    assert path.read_text().splitlines()[0] == "n,seed,sup_error,excess_risk,labels_used,wall_time_ms"
    pd.testing.assert_frame_equal(SweepResult.from_csv(path).frame, sweep.frame)


def test_fit_rate_recovers_power_law():
    sweep = SweepResult(_power_law_rows([2 ** 10, 2 ** 12, 2 ** 14, 2 ** 16], 21))
    fit = fit_rate(sweep, alpha=1.0, kappa=1.5, d=2)
    assert fit.slope == pytest.approx(-0.5)
    assert fit.r2 == pytest.approx(1.0)
    assert fit.theoretical == pytest.approx(-0.5)
    assert abs(fit.deviation) < 1e-9
    assert set(fit.as_dict()) == {"slope", "intercept", "r2", "theoretical"}


def test_fit_rate_needs_enough_budgets_and_seeds():
    with pytest.raises(RateFitError):
        fit_rate(SweepResult(_power_law_rows([256, 512, 1024], 20)), 1.0, 1.5, 2)
    with pytest.raises(RateFitError):
        fit_rate(SweepResult(_power_law_rows([256, 512, 1024, 2048], 19)), 1.0, 1.5, 2)


def test_fit_rate_rejects_degenerate_medians():
    rows = _power_law_rows([256, 512, 1024, 2048], 20)
    infinite = [dict(r, sup_error=math.inf) if r["n"] == 256 else r for r in rows]
    with pytest.raises(RateFitError) as e:
        fit_rate(SweepResult(infinite), 1.0, 1.5, 2)
    assert "256" in str(e.value)

    exact = [dict(r, sup_error=0.0) for r in rows]
    with pytest.raises(ValueError):
        fit_rate(SweepResult(exact), 1.0, 1.5, 2)
