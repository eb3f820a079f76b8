"""
Child seeds for reproducible runs.

Every oracle and Monte-Carlo stream is seeded from
SeedSequence(master, spawn_key=(run_index, iteration_index)), so a run's
randomness depends only on its own coordinates and not on execution order.
"""

import numpy as np

SEEDING_SCHEME = "SeedSequence(master, spawn_key=(run_index, iteration_index)) -> uint64"

# iteration index of the streams that are not oracles
RISK_STREAM = 1_000_000
POINTS_STREAM = 1_000_001


def derive_seed(master: int, run_index: int, iteration_index: int) -> int:
    if min(master, run_index, iteration_index) < 0:
        raise ValueError("seed coordinates must be non-negative")
    sequence = np.random.SeedSequence(int(master), spawn_key=(int(run_index), int(iteration_index)))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])
