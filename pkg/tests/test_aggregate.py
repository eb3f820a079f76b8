import json
import math

import numpy as np
import pytest

from aggregate.adaptive import (
    AdaptiveResult,
    AggregationState,
    classify,
    g_hat,
    merge_regions,
    run_adaptive,
    schedule,
)
from estimator.interpolation import PiecewiseInterpolant
from estimator.subroutine import LabeledRegions, lowest_label_one
from problem.oracle import LabelOracle

VACUOUS = LabeledRegions(None, 0, 0)


def _flat_regions(height, M=64):
    """Regions around a constant interpolant; margin is 4 / M."""
    interp = PiecewiseInterpolant(alpha=1.0, lam=1.0, M=M, values=np.full(M + 1, height))
    return LabeledRegions(interp, int(math.log2(M)), 0)


def _fold(*regions):
    state = AggregationState()
    for region in regions:
        state = merge_regions(state, region)
    return state


COLUMNS = np.linspace(0, 1, 9)[:, None]


def test_schedule():
    log_n, n0, delta0 = schedule(2 ** 16, 0.05)
    assert log_n == 11
    assert n0 == 2 ** 16 // 121
    assert delta0 == pytest.approx(0.05 / 121)


def test_schedule_needs_a_usable_budget():
    with pytest.raises(ValueError):
        schedule(2, 0.05)


def test_empty_state_labels_nothing():
    state = AggregationState()
    lower, upper = state.envelopes(COLUMNS)
    assert np.all(lower == -np.inf)
    assert np.all(upper == np.inf)
    assert state.i == 0


def test_vacuous_merge_changes_nothing():
    first = _fold(_flat_regions(0.5))
    second = merge_regions(first, VACUOUS)
    assert second.i == 2
    assert np.array_equal(first.upper(COLUMNS), second.upper(COLUMNS))
    assert np.array_equal(first.lower(COLUMNS), second.lower(COLUMNS))


def test_merge_never_crosses_existing_labels():
    state = _fold(_flat_regions(0.5), _flat_regions(0.3))
    lower, upper = state.envelopes(COLUMNS)
    # label-0 set of the first region is kept, the second region's label-1 set is cut back
    assert np.all(lower == 0.5 - 1 / 16)
    assert np.all(upper > lower)
    assert np.all(upper == np.nextafter(0.5 - 1 / 16, np.inf))


def test_merge_tightens_compatible_envelopes():
    state = _fold(_flat_regions(0.5, M=16), _flat_regions(0.5, M=64))
    lower, upper = state.envelopes(COLUMNS)
    assert np.allclose(lower, 0.5 - 1 / 16)
    assert np.allclose(upper, 0.5 + 1 / 16)


def test_envelopes_are_monotone_across_merges():
    heights = [0.5, 0.45, 0.62, 0.2, 0.55, 0.9]
    state = _fold(*(_flat_regions(h, M=m) for h, m in zip(heights, [16, 32, 64, 32, 128, 16])))
    previous_lower = np.full(len(COLUMNS), -np.inf)
    previous_upper = np.full(len(COLUMNS), np.inf)
    for lower, upper in state.iter_envelopes(COLUMNS):
        assert np.all(lower >= previous_lower)
        assert np.all(upper <= previous_upper)
        assert np.all(lower < upper)
        previous_lower, previous_upper = lower, upper


def test_labeled_points_are_never_relabeled(rng):
    points = rng.random((2000, 2))
    regions = [_flat_regions(h, M=m) for h, m in [(0.5, 16), (0.3, 64), (0.7, 64), (0.5, 128)]]
    seen = np.full(len(points), -1)
    for i in range(1, len(regions) + 1):
        lower, upper = _fold(*regions[:i]).envelopes(points[:, :1])
        labels = np.where(points[:, 1] >= upper, 1, np.where(points[:, 1] <= lower, 0, -1))
        kept = seen >= 0
        assert np.array_equal(labels[kept], seen[kept])
        seen = labels


class RecordingFactory:
    def __init__(self, instance, seed=0):
        self.instance = instance
        self.seed = seed
        self.calls = []
        self.oracles = []

    def __call__(self, i, cap):
        self.calls.append((i, cap))
        oracle = LabelOracle(self.instance, self.seed * 1000 + i, cap)
        self.oracles.append(oracle)
        return oracle


def test_adaptive_run_follows_the_schedule(example_instance, trace_records):
    n = 2 ** 12
    factory = RecordingFactory(example_instance)
    result = run_adaptive(factory, n, 0.05, 1.0)

    log_n, n0, delta0 = schedule(n, 0.05)
    assert result.log_n == log_n == 8
    assert factory.calls == [(i, n0) for i in range(1, log_n ** 2 + 1)]
    assert result.alphas == pytest.approx([i / log_n for i in range(1, log_n ** 2 + 1)])
    assert result.state.i == log_n ** 2

    used = [o.used for o in factory.oracles]
    assert max(used) <= n0
    assert sum(used) == result.labels_used <= n

    iterations = [r for r in map(json.loads, trace_records) if r["event"] == "iteration"]
    assert len(iterations) == log_n ** 2
    assert iterations[0] == {"event": "iteration", **result.iterations[0]}


def test_adaptive_meta_and_classifier(example_instance):
    result = run_adaptive(RecordingFactory(example_instance, seed=3), 2 ** 10, 0.05, 1.0)
    meta = result.meta()
    assert meta["log_base"] == "e"
    assert meta["iterations_run"] == len(meta["iterations"]) == result.log_n ** 2
    assert meta["labels_used"] <= 2 ** 10

    x = np.array([[0.1, 0.2], [0.8, 0.95]])
    assert np.array_equal(classify(result, x), result.classify(x))
    assert np.array_equal(g_hat(result, x[:, :1]), lowest_label_one(result.state.upper(x[:, :1])))
    assert set(result.label(x).tolist()) <= {-1, 0, 1}


def test_without_labels_everything_is_class_zero():
    state = _fold(VACUOUS, VACUOUS)
    result = AdaptiveResult(state, 100, 0.05, 1.0, 4, 6, 0.05 / 16, ())
    x = np.array([[0.5, 0.99], [0.5, 0.01]])
    assert np.all(result.g_hat(x[:, :1]) == np.inf)
    assert result.classify(x).tolist() == [0, 0]
    assert result.label(x).tolist() == [-1, -1]


@pytest.mark.parametrize("height,expected", [(1.5, np.inf), (-0.5, 0.0), (0.5, 0.5625)])
def test_g_hat_is_the_lowest_label_one_height_in_the_cube(height, expected):
    result = AdaptiveResult(_fold(_flat_regions(height)), 100, 0.05, 1.0, 4, 6, 0.05 / 16, ())
    assert np.all(result.g_hat(COLUMNS) == expected)


def test_envelope_above_the_cube_classifies_zero():
    result = AdaptiveResult(_fold(_flat_regions(1.5)), 100, 0.05, 1.0, 4, 6, 0.05 / 16, ())
    x = np.array([[0.5, 1.0], [0.5, 0.0]])
    assert result.classify(x).tolist() == [0, 0]
    assert result.label(x).tolist() == [0, 0]


def test_first_merge_copies_the_regions():
    lower, upper = _fold(_flat_regions(0.5)).envelopes(COLUMNS)
    assert np.all(lower == 0.5 - 1 / 16)
    assert np.all(upper == 0.5 + 1 / 16)


def test_abstention_band_is_classified_zero():
    state = _fold(_flat_regions(0.5))
    result = AdaptiveResult(state, 100, 0.05, 1.0, 4, 6, 0.05 / 16, ())
    x = np.array([[0.5, 0.9], [0.5, 0.5], [0.5, 0.1]])
    assert result.classify(x).tolist() == [1, 0, 0]
    assert result.label(x).tolist() == [1, -1, 0]


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(10))
def test_adaptive_envelopes_grow_without_overlap(example_instance, seed):
    result = run_adaptive(RecordingFactory(example_instance, seed), 2 ** 14, 0.05, 1.0)
    assert any(not r.vacuous for r in result.state.regions)

    columns = np.random.default_rng(seed).random((1000, 1))
    previous_lower = np.full(len(columns), -np.inf)
    previous_upper = np.full(len(columns), np.inf)
    for lower, upper in result.state.iter_envelopes(columns):
        assert np.all(lower >= previous_lower)
        assert np.all(upper <= previous_upper)
        assert np.all(lower < upper)
        previous_lower, previous_upper = lower, upper
