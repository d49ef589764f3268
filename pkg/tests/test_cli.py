"""End-to-end tests of the command-line entry point."""

import io
import json
import unittest
from contextlib import redirect_stdout

import pytest

from src.core import ConfigurationError, read_field
from src.main import build_parser, flags_to_values, parse_and_dispatch
from tests.base import TempDirTestCase


@pytest.mark.integration
class TestCommandLine(TempDirTestCase):
    """Test cases for parse_and_dispatch."""

    def dispatch(self, *argv, out=None) -> int:
        out = out or self.tmpdir
        return parse_and_dispatch([*argv, "--output-dir", str(out), "--environment", "testing"])

    def test_help_lists_defaults(self):
        buffer = io.StringIO()
        with redirect_stdout(buffer):
            code = parse_and_dispatch(["run", "--help"])
        self.assertEqual(code, 0)
        text = " ".join(buffer.getvalue().split())
        for expected in ("--beta", "(default: 1.5)", "(default: 2*pi)", "(default: 0x5EED)", "--experimental-bdf2"):
            self.assertIn(expected, text)

    def test_invalid_value_exits_with_two(self):
        with self.assertLogs("src.main", level="ERROR") as logs:
            code = self.dispatch("run", "--N", "0")
        self.assertEqual(code, 2)
        self.assertIn("N", "\n".join(logs.output))

    def test_unknown_flag(self):
        self.assertEqual(parse_and_dispatch(["run", "--resolution", "4"]), 2)

    def test_bdf2_compare_needs_switch(self):
        with self.assertLogs("src.main", level="ERROR") as logs:
            code = self.dispatch("bdf2-compare", "--N", "4,8", "--M", "8")
        self.assertEqual(code, 2)
        self.assertIn("experimental_bdf2", "\n".join(logs.output))

    def test_list_only_where_allowed(self):
        self.assertEqual(self.dispatch("run", "--N", "4,8", "--M", "8"), 2)
        self.assertEqual(self.dispatch("run", "--N", "4", "--M", "8", "--L", "3.0"), 2)

    def test_run_writes_outputs(self):
        code = self.dispatch("run", "--beta", "1.5", "--gamma", "2", "--N", "8", "--M", "8", "--snapshots", "0,4")
        self.assertEqual(code, 0)
        for name in ("final.f2d", "u_00000.f2d", "u_00004.f2d", "steps.csv", "summary.json", "config.json"):
            self.assertTrue((self.tmpdir / name).exists(), name)
        self.assertEqual(read_field(self.tmpdir / "final.f2d").shape, (8, 8))
        summary = json.loads((self.tmpdir / "summary.json").read_text())
        self.assertEqual(summary["N"], 8)
        steps = (self.tmpdir / "steps.csv").read_text().splitlines()
        self.assertEqual(len(steps), 9)
        self.assertTrue(steps[1].endswith(","))

    def test_reruns_are_bitwise_identical(self):
        argv = ("run", "--problem", "example52", "--gamma", "2", "--N", "6", "--M", "8")
        self.assertEqual(self.dispatch(*argv, out=self.tmpdir / "a"), 0)
        self.assertEqual(self.dispatch(*argv, out=self.tmpdir / "b"), 0)
        for name in ("final.f2d", "steps.csv", "summary.json"):
            first = (self.tmpdir / "a" / name).read_bytes()
            second = (self.tmpdir / "b" / name).read_bytes()
            self.assertEqual(first, second, name)

    def test_numerical_failure_exits_with_one(self):
        code = self.dispatch("run", "--N", "4", "--M", "8", "--solver-rtol", "1e-300")
        self.assertEqual(code, 1)

    def test_kernels_check(self):
        code = self.dispatch("kernels-check", "--alpha", "0.5", "--gamma", "2", "--N", "10", "--dcc", "--fuzz-cases", "2")
        self.assertEqual(code, 0)
        for name in ("kernels.csv", "lemma.json", "dcc.csv", "dcc.json", "fuzz.json"):
            self.assertTrue((self.tmpdir / name).exists(), name)
        lemma = json.loads((self.tmpdir / "lemma.json").read_text())
        self.assertTrue(lemma["passed"])
        dcc = json.loads((self.tmpdir / "dcc.json").read_text())
        self.assertLess(dcc["identity_residual"], 1e-11)
        self.assertIn("alpha_limit", dcc)

    def test_kernels_check_rejects_shrinking_mesh(self):
        mesh_file = self.tmpdir / "mesh.json"
        mesh_file.write_text(json.dumps([0.0, 0.5, 0.8, 1.0]))
        self.assertEqual(self.dispatch("kernels-check", "--mesh-file", str(mesh_file)), 2)

    def test_convergence(self):
        code = self.dispatch("convergence", "--gamma", "2", "--N", "4,8", "--M", "8")
        self.assertEqual(code, 0)
        rows = (self.tmpdir / "convergence.csv").read_text().splitlines()
        self.assertEqual(len(rows), 5)
        acceptance = json.loads((self.tmpdir / "acceptance.json").read_text())
        self.assertEqual(acceptance["table"]["N"], [4, 8])
        self.assertEqual(acceptance["expected_order"], 1.0)

    def test_truncation(self):
        code = self.dispatch("truncation", "--alpha", "0.5", "--sigma", "0.5", "--gamma", "2", "--N", "8,16")
        self.assertEqual(code, 0)
        payload = json.loads((self.tmpdir / "truncation.json").read_text())
        self.assertTrue(payload["bound_holds"])
        self.assertEqual(payload["decay"]["N"], [8, 16])

    def test_bdf2_compare(self):
        code = self.dispatch("bdf2-compare", "--experimental-bdf2", "--gamma", "2", "--N", "4,8", "--M", "8")
        self.assertEqual(code, 0)
        payload = json.loads((self.tmpdir / "bdf2_compare.json").read_text())
        self.assertEqual(set(payload["tables"]), {"l1", "bdf2"})
        self.assertTrue(payload["note"].startswith("experimental"))


@pytest.mark.unit
class TestFlagTranslation(unittest.TestCase):
    """Test cases for flags_to_values."""

    def test_nested_and_list_flags(self):
        args = vars(build_parser().parse_args(["convergence", "--N", "10,20", "--picard-tol", "1e-9", "--lagged"]))
        values = flags_to_values("convergence", args)
        self.assertEqual(values["N_list"], [10, 20])
        self.assertEqual(values["N"], 20)
        self.assertEqual(values["solver"], {"picard_tol": 1e-9, "lagged_nonlinearity": True})

    def test_omitted_flags_are_absent(self):
        args = vars(build_parser().parse_args(["run"]))
        self.assertEqual(flags_to_values("run", args), {"subcommand": "run"})

    def test_malformed_list(self):
        args = vars(build_parser().parse_args(["run", "--snapshots", "1,,2"]))
        with self.assertRaises(ConfigurationError):
            flags_to_values("run", args)


if __name__ == "__main__":
    unittest.main()
