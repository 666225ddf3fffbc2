import contextlib
import io
import json
import tempfile
import unittest
from pathlib import Path

from commands.common import FIXTURE_DIR
from main import main

GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


def run_cli(*argv: str) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


def fixture(name: str) -> str:
    return str(FIXTURE_DIR / name)


class GraphCommandTests(unittest.TestCase):
    def test_dot_output_matches_golden_edges(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / "three_receivers.dot"
            code, _, err = run_cli("graph", "--instance", fixture("three_receivers.json"), "--out", str(target))
            self.assertEqual(code, 0)
            self.assertIn("|V| = 8, |E| = 24", err)
            written = [line for line in target.read_text(encoding="utf-8").splitlines() if not line.strip().startswith("//")]
        golden = (GOLDEN_DIR / "three_receivers.dot").read_text(encoding="utf-8").splitlines()
        self.assertEqual(written, golden)

    def test_report_format(self):
        code, out, _ = run_cli("graph", "--instance", fixture("three_receivers.json"), "--format", "report")
        self.assertEqual(code, 0)
        payload = json.loads(out)
        self.assertEqual(payload["graph"]["vertices"], 8)
        self.assertEqual(payload["graph"]["edges"], 24)
        self.assertTrue(payload["graph"]["vertex_transitive"])

    def test_vertex_cap_exit_code(self):
        code, _, err = run_cli("graph", "--instance", fixture("three_receivers.json"), "--vertex-cap", "4")
        self.assertEqual(code, 3)
        self.assertIn("error:", err)

    def test_missing_instance_file(self):
        code, _, _ = run_cli("graph", "--instance", fixture("does_not_exist.json"))
        self.assertEqual(code, 2)

    def test_bad_flag_value(self):
        code, _, _ = run_cli("graph", "--instance", fixture("three_receivers.json"), "--t", "0")
        self.assertEqual(code, 2)


class AnalysisCommandTests(unittest.TestCase):
    def test_invariants_report(self):
        code, out, _ = run_cli("invariants", "--instance", fixture("three_receivers.json"))
        self.assertEqual(code, 0)
        payload = json.loads(out)
        self.assertTrue(payload["rate_bracket"]["pinned"])

    def test_leakage_of_bundled_code(self):
        code, out, _ = run_cli("leakage", "--instance", fixture("correlated_pair.json"))
        self.assertEqual(code, 0)
        section = json.loads(out)["codes"]["correlated_pair_xor.code"]
        self.assertEqual(section["leakage"]["ps_posterior"], "7/10")
        self.assertEqual(section["leakage"]["ratio"], "7/4")
        self.assertTrue(section["validity"]["zero_error"])

    def test_leakage_of_bundled_composite_code(self):
        code, out, _ = run_cli("leakage", "--instance", fixture("biased_four.toml"))
        self.assertEqual(code, 0)
        section = json.loads(out)["codes"]["biased_four_composite.code"]
        self.assertEqual(section["leakage"]["ps_prior"], "3/16")
        self.assertEqual(section["leakage"]["ps_posterior"], "1/2")
        self.assertEqual(section["leakage"]["ratio"], "8/3")
        self.assertTrue(section["validity"]["zero_error"])
        self.assertTrue(section["converse"]["composite_bound_holds"])

    def test_leakage_search_and_simulation(self):
        code, out, _ = run_cli(
            "leakage", "--instance", fixture("correlated_pair.json"), "--search", "--simulate", "--samples", "2000", "--seed", "5"
        )
        self.assertEqual(code, 0)
        payload = json.loads(out)
        self.assertNotIn("codes", payload)
        self.assertEqual(payload["optimal"]["leakage"]["ratio"], "7/4")
        self.assertEqual(payload["optimal"]["monte_carlo"]["posterior"]["samples"], 2000)

    def test_leakage_needs_a_code_or_search(self):
        code, _, _ = run_cli("leakage", "--instance", fixture("biased_four_uniform.json"))
        self.assertEqual(code, 2)

    def test_bounds_report(self):
        code, out, _ = run_cli("bounds", "--instance", fixture("biased_four.toml"))
        self.assertEqual(code, 0)
        payload = json.loads(out)
        self.assertEqual(payload["bounds"]["best_guess_mass"], "3/16")
        self.assertEqual(payload["bounds"]["zero_error"]["upper"]["high"]["exact"], "log2(4)")
        self.assertNotIn("uniform", payload)


class VerifyCommandTests(unittest.TestCase):
    def test_bundled_fixtures_pass(self):
        code, out, err = run_cli("verify")
        self.assertEqual(code, 0, err)
        self.assertTrue(json.loads(out)["passed"])

    def test_broken_code_fails(self):
        code, out, _ = run_cli("verify", "--instance", fixture("three_receivers.json"), "--code", fixture("broken_three_receivers.code"))
        self.assertEqual(code, 4)
        self.assertFalse(json.loads(out)["passed"])

    def test_composite_fixture_checks(self):
        code, out, err = run_cli("verify", "--instance", fixture("biased_four.toml"))
        self.assertEqual(code, 0, err)
        checks = {check["name"]: check["passed"] for check in json.loads(out)["checks"]}
        self.assertTrue(checks["composite leakage <= log2 M2 [biased_four/biased_four_composite.code]"])
        self.assertTrue(checks["claimed zero-error code is a proper colouring [biased_four/biased_four_composite.code]"])

    def test_random_cases(self):
        code, out, _ = run_cli("verify", "--random", "20", "--seed", "1")
        self.assertEqual(code, 0, out)
        self.assertGreater(json.loads(out)["total"], 0)


if __name__ == "__main__":
    unittest.main()
