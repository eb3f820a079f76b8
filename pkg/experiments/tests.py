import json
import shutil
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase


class ExperimentCommandsTestCase(SimpleTestCase):
    """Test cases for the run, sweep and audit commands"""

    def setUp(self):
        self.tmp = Path(tempfile.mkdtemp())
        self.addCleanup(shutil.rmtree, self.tmp, ignore_errors=True)

    def call(self, command, output="out", **options):
        out, err = StringIO(), StringIO()
        options.setdefault("risk_samples", 500)
        call_command(command, output=str(self.tmp / output), stdout=out, stderr=err, **options)
        return out.getvalue(), err.getvalue()

    def read_json(self, *parts):
        return json.loads(self.tmp.joinpath(*parts).read_text())

    def test_adaptive_run_stays_within_budget(self):
        """Test that an adaptive run writes its row and never exceeds n labels"""
        out, _ = self.call("run", algorithm="adaptive", n=2 ** 14, seeds=[7])
        self.assertIn("seed=7", out)

        lines = (self.tmp / "out" / "results.csv").read_text().splitlines()
        self.assertEqual(lines[0], "n,seed,sup_error,excess_risk,labels_used,wall_time_ms")
        self.assertEqual(len(lines), 2)
        n, seed, _, _, labels_used, wall_time_ms = lines[1].split(",")
        self.assertEqual((int(n), int(seed)), (2 ** 14, 7))
        self.assertLessEqual(int(labels_used), 2 ** 14)
        self.assertEqual(wall_time_ms, "0")

        metadata = self.read_json("out", "metadata.json")
        self.assertEqual(metadata["command"], "run")
        self.assertEqual(metadata["config"]["lambda"], 1.0)
        self.assertEqual(metadata["generator"], "PCG64")
        self.assertEqual(metadata["runs"][0]["algorithm"]["log_base"], "e")

    def test_coarse_line_search_uses_no_labels(self):
        """Test that epsilon = 1/2 returns the midpoint without querying"""
        self.call("run", algorithm="linesearch", epsilon=0.5, n=100, seeds=[0, 1])
        run = self.read_json("out", "metadata.json")["runs"][0]["algorithm"]
        self.assertEqual(run["T"], 0.5)
        self.assertEqual(run["N"], 0)
        self.assertTrue(run["completed"])
        self.assertEqual(run["anchor"], [0.5])

    def test_runs_are_reproducible(self):
        """Test that the same configuration writes byte-identical results"""
        for output in ("first", "second"):
            self.call("run", output=output, algorithm="subroutine", n=2 ** 12, seeds=[0, 3],
                      master_seed=11)
        self.assertEqual(
            (self.tmp / "first" / "results.csv").read_bytes(),
            (self.tmp / "second" / "results.csv").read_bytes(),
        )

    def test_config_file_and_flags(self):
        """Test that flags override the configuration file"""
        path = self.tmp / "run.json"
        path.write_text(json.dumps({"algorithm": "linesearch", "epsilon": 0.5, "lambda": 2.0}))
        self.call("run", config=str(path), epsilon=0.25, n=5000)
        metadata = self.read_json("out", "metadata.json")
        self.assertEqual(metadata["config"]["epsilon"], 0.25)
        self.assertEqual(metadata["config"]["lambda"], 2.0)
        self.assertEqual(metadata["runs"][0]["algorithm"]["N"] % 3, 0)

    def test_unknown_key_is_rejected(self):
        """Test that an unknown configuration key names itself in the error"""
        path = self.tmp / "run.json"
        path.write_text(json.dumps({"bogus": 1}))
        with self.assertRaisesMessage(CommandError, "bogus"):
            self.call("run", config=str(path))

    def test_scalar_where_a_list_belongs_is_rejected(self):
        """Test that a scalar seeds entry is reported as a configuration error"""
        path = self.tmp / "run.json"
        path.write_text(json.dumps({"seeds": 5}))
        with self.assertRaisesMessage(CommandError, "seeds: must be a list"):
            self.call("run", config=str(path))

    def test_bad_delta_is_rejected(self):
        """Test that an out-of-range delta is reported before anything runs"""
        with self.assertRaisesMessage(CommandError, "delta"):
            self.call("run", delta=1.5)
        self.assertFalse((self.tmp / "out").exists())

    def test_sweep_needs_several_budgets(self):
        """Test that a sweep over one budget is refused"""
        with self.assertRaisesMessage(CommandError, "budgets"):
            self.call("sweep", algorithm="passive", budgets=[1024], seeds=list(range(20)))

    def test_sweep_needs_twenty_seeds(self):
        """Test that a sweep with too few seeds is refused"""
        with self.assertRaisesMessage(CommandError, "seeds"):
            self.call("sweep", algorithm="passive", budgets=[256, 512, 1024, 2048], seeds=[0, 1])

    def test_passive_sweep_fits_a_rate(self):
        """Test that a full sweep writes results, a rate fit and metadata"""
        out, _ = self.call(
            "sweep", algorithm="passive", noiseless=True, slope=0.2,
            budgets=[256, 512, 1024, 2048], seeds=list(range(20)), risk_samples=200,
        )
        self.assertIn("slope=", out)
        rate = self.read_json("out", "rate.json")
        self.assertEqual(rate["theoretical"], -0.5)
        self.assertEqual(set(rate), {"slope", "intercept", "r2", "theoretical"})

        lines = (self.tmp / "out" / "results.csv").read_text().splitlines()
        self.assertEqual(len(lines), 1 + 4 * 20)
        metadata = self.read_json("out", "metadata.json")
        self.assertEqual(metadata["rate"], rate)
        self.assertEqual(len(metadata["runs"]), 80)

    def test_noiseless_subroutine_audit_has_no_violations(self):
        """Test that exact labels never produce a crossing or uncovered point"""
        out, _ = self.call("audit", algorithm="subroutine", noiseless=True, n=2 ** 14, seeds=[0, 1, 2])
        report = self.read_json("out", "audit.json")
        self.assertEqual(report["check"], "strong")
        self.assertEqual(report["runs"], 3)
        self.assertEqual(report["violations"], 0)
        self.assertEqual(report["frequency"], 0.0)
        self.assertTrue(report["within_threshold"])
        self.assertEqual(report["wide_bands"], 0)
        self.assertIn("0/3 runs", out)
        for record in report["records"]:
            self.assertFalse(record["crossing"])
            self.assertGreater(record["l_star"], 0)
            self.assertFalse(record["band_exceeds_delta_n"])

    def test_adaptive_audit_uses_the_weak_check(self):
        """Test that adaptive runs are audited for coverage only"""
        self.call("audit", algorithm="adaptive", n=2 ** 10, seeds=[0, 1])
        report = self.read_json("out", "audit.json")
        self.assertEqual(report["check"], "weak")
        self.assertEqual(report["threshold"], 0.1)
        self.assertTrue((self.tmp / "out" / "metadata.json").exists())

    def test_line_search_cannot_be_audited(self):
        """Test that audits refuse algorithms without labeled regions"""
        with self.assertRaisesMessage(CommandError, "algorithm"):
            self.call("audit", algorithm="linesearch")
