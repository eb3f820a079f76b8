import numpy as np
import pytest

from experiments.config import Algorithm, RunConfig
from experiments.runner import fit

ALGORITHMS = [a.value for a in Algorithm]


def _random_config(index):
    rng = np.random.default_rng(index)
    d = int(rng.integers(2, 4))
    return RunConfig.from_dict({
        "algorithm": ALGORITHMS[index % len(ALGORITHMS)],
        "family": str(rng.choice(["affine", "sinusoid"])),
        "d": d,
        "alpha": float(rng.uniform(0.3, 3.0)),
        "lambda": float(rng.uniform(1.0, 2.0)),
        "kappa": float(rng.choice([1.0, 1.25, 1.5, 2.0])),
        "c": float(rng.uniform(0.1, 0.45)),
        "noiseless": bool(rng.random() < 0.2),
        "alpha_guess": float(rng.uniform(0.3, 3.5)),
        "anchor": rng.random(d - 1).tolist(),
        "epsilon": float(2.0 ** -rng.uniform(1.0, 8.0)),
        "n": int(rng.integers(8, 4000)),
        "delta": float(rng.uniform(0.01, 0.2)),
        "instance_seed": index,
    })


@pytest.mark.slow
@pytest.mark.parametrize("index", range(1000))
def test_random_configurations_stay_within_budget(index):
    config = _random_config(index)
    fitted = fit(config, config.build_instance(), config.n, seed=index)
    assert 0 <= fitted.labels_used <= config.n
