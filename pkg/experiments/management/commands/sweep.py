import logging
from itertools import product

from evaluation.rates import MIN_BUDGETS, MIN_SEEDS, RateFitError, SweepResult, fit_rate
from experiments.artifacts import METADATA_JSON, RATE_JSON, run_metadata, write_json, write_results
from experiments.config import ConfigError
from experiments.management.base import ExperimentCommand
from experiments.runner import run_cells

logger = logging.getLogger(__name__)


class Command(ExperimentCommand):
    help = "Run every (budget, seed) cell, write results.csv and fit the error rate into rate.json."

    def run_experiment(self, config, progress):
        budgets = sorted(set(config.budgets))
        if len(budgets) < MIN_BUDGETS:
            raise ConfigError("budgets", f"a sweep needs at least {MIN_BUDGETS} distinct budgets")
        if len(config.seeds) < MIN_SEEDS:
            raise ConfigError("seeds", f"a sweep needs at least {MIN_SEEDS} seeds")

        rows, metas = run_cells(config, product(budgets, config.seeds), self.workers, progress)
        sweep = SweepResult(rows)
        results = write_results(config.output_dir, sweep)

        rate = None
        try:
            rate = fit_rate(sweep, config.alpha, config.kappa, config.d).as_dict()
        except RateFitError as exc:
            logger.warning("no rate fitted: %s", exc)
            self.stderr.write(f"No rate fitted: {exc}")
        else:
            write_json(config.output_dir / RATE_JSON, rate)
            self.stdout.write(
                f"slope={rate['slope']:.4f} theoretical={rate['theoretical']:.4f} r2={rate['r2']:.4f}"
            )

        write_json(config.output_dir / METADATA_JSON,
                   run_metadata("sweep", config, rate=rate, runs=metas))
        self.stdout.write(self.style.SUCCESS(f"Wrote {results}"))
