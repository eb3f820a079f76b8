from experiments.artifacts import AUDIT_JSON, METADATA_JSON, run_metadata, write_json
from experiments.audit import run_audit
from experiments.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Audit labeled regions against the true boundary across seeds and report the violation frequency."

    def run_experiment(self, config, progress):
        report = run_audit(config, config.seeds, self.workers, progress)
        path = write_json(config.output_dir / AUDIT_JSON, report)
        write_json(config.output_dir / METADATA_JSON, run_metadata("audit", config))
        summary = (
            f"{report['violations']}/{report['runs']} runs violated the {report['check']} check "
            f"(frequency {report['frequency']:.3f}, threshold {report['threshold']:.3f}, "
            f"{report['vacuous_runs']} vacuous, {report['wide_bands']} bands wider than Delta_n)"
        )
        style = self.style.SUCCESS if report["within_threshold"] else self.style.WARNING
        self.stdout.write(style(summary))
        self.stdout.write(f"Wrote {path}")
