import json
import math
from pathlib import Path
from typing import Any, Dict

import joblib
import numpy as np
import pandas as pd
import scipy
from django.utils import timezone

from evaluation.rates import SweepResult
from problem.oracle import GENERATOR_NAME

from .config import RunConfig
from .seeding import SEEDING_SCHEME

RESULTS_CSV = "results.csv"
METADATA_JSON = "metadata.json"
RATE_JSON = "rate.json"
AUDIT_JSON = "audit.json"


def _plain(value):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def write_json(path: Path, payload: Dict[str, Any]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_plain(payload), indent=2, sort_keys=True) + "\n")
    return path


def write_results(output_dir: Path, sweep: SweepResult) -> Path:
    output_dir.mkdir(parents=True, exist_ok=True)
    path = output_dir / RESULTS_CSV
    sweep.to_csv(path)
    return path


def run_metadata(command: str, config: RunConfig, **extra) -> Dict[str, Any]:
    return {
        "command": command,
        "created": timezone.now().isoformat(),
        "config": config.as_dict(),
        "instance": config.build_instance().describe(),
        "generator": GENERATOR_NAME,
        "seeding": SEEDING_SCHEME,
        "versions": {
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "pandas": pd.__version__,
            "joblib": joblib.__version__,
        },
        **extra,
    }
