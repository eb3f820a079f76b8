from evaluation.rates import SweepResult
from experiments.artifacts import METADATA_JSON, run_metadata, write_json, write_results
from experiments.management.base import ExperimentCommand
from experiments.runner import run_cells


class Command(ExperimentCommand):
    help = "Run one algorithm at budget n for every configured seed and write results.csv + metadata.json."

    def run_experiment(self, config, progress):
        cells = [(config.n, seed) for seed in config.seeds]
        rows, metas = run_cells(config, cells, self.workers, progress)
        results = write_results(config.output_dir, SweepResult(rows))
        write_json(config.output_dir / METADATA_JSON, run_metadata("run", config, runs=metas))
        for row in rows:
            self.stdout.write(
                f"n={row['n']} seed={row['seed']} sup_error={row['sup_error']:.6g} "
                f"excess_risk={row['excess_risk']:.6g} labels_used={row['labels_used']}"
            )
        self.stdout.write(self.style.SUCCESS(f"Wrote {results}"))
