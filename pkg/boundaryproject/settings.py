"""
Django settings for the boundaryproject project.
All configuration from environment variables.
"""

import os
import sys
from pathlib import Path
from dotenv import load_dotenv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Load environment variables from .env file (if it exists)
env_path = BASE_DIR / '.env'
if env_path.exists():
    load_dotenv(env_path)

# Detect if we're running tests
TESTING = (
    "test" in sys.argv
    or "pytest" in sys.modules
    or os.environ.get("PYTEST_CURRENT_TEST")
)

# =============================================================================
# CORE SETTINGS
# =============================================================================

SECRET_KEY = os.environ.get(
    "DJANGO_SECRET_KEY",
    "django-insecure-dev-only-key-change-in-production"
)

DEBUG = os.environ.get("DJANGO_DEBUG", "False").lower() in ("true", "1", "yes")

# =============================================================================
# APPLICATION DEFINITION
# =============================================================================

INSTALLED_APPS = [
    'problem',
    'linesearch',
    'estimator',
    'aggregate',
    'evaluation',
    'experiments',
]

# Experiments never touch a database: results are CSV/JSON artifacts.
DATABASES = {}

TIME_ZONE = 'UTC'
USE_TZ = True

# =============================================================================
# EXPERIMENT CONFIGURATION - FROM ENVIRONMENT VARIABLES
# =============================================================================

# Worker count for sweeps and audits (joblib); the only experiment knob that
# is read from the environment, everything else lives in the run config.
BOUNDARY_WORKERS = int(os.environ.get("BOUNDARY_WORKERS", "1"))

# Defaults for RunConfig.output and RunConfig.risk_samples
BOUNDARY_OUTPUT_DIR = BASE_DIR / "results"
BOUNDARY_RISK_SAMPLES = 20000

if BOUNDARY_WORKERS < 1:
    raise ValueError(f"BOUNDARY_WORKERS must be >= 1, got {BOUNDARY_WORKERS}")

# =============================================================================
# LOGGING
# =============================================================================

LOG_LEVEL = "DEBUG" if DEBUG else os.environ.get("DJANGO_LOG_LEVEL", "INFO")

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "simple": {
            "format": "%(asctime)s %(levelname)s %(name)s: %(message)s",
        },
        # one JSON record per line
        "trace": {
            "format": "%(message)s",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "simple",
        },
        "trace": {
            "class": "logging.StreamHandler",
            "formatter": "trace",
        },
    },
    "root": {
        "handlers": ["console"],
        "level": LOG_LEVEL,
    },
    "loggers": {
        "boundary.trace": {
            "handlers": ["trace"],
            "level": "DEBUG" if DEBUG else "WARNING",
            "propagate": False,
        },
    },
}

# =============================================================================
# CONFIGURATION SUMMARY (for debugging)
# =============================================================================

if DEBUG and not TESTING:
    print("\n" + "=" * 80, file=sys.stderr)
    print("CONFIGURATION SUMMARY", file=sys.stderr)
    print("=" * 80, file=sys.stderr)
    print(f"DEBUG: {DEBUG}", file=sys.stderr)
    print(f"BOUNDARY_WORKERS: {BOUNDARY_WORKERS}", file=sys.stderr)
    print(f"BOUNDARY_OUTPUT_DIR: {BOUNDARY_OUTPUT_DIR}", file=sys.stderr)
    print(f"BOUNDARY_RISK_SAMPLES: {BOUNDARY_RISK_SAMPLES}", file=sys.stderr)
    print("=" * 80 + "\n", file=sys.stderr)
