# Copyright (c) 2026, modal_workbench contributors
# See license.txt

import json
import os
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

from click.testing import CliRunner

from modal_workbench.cli import cli
from modal_workbench.config import get_settings, reset_settings

FIXTURES = Path(__file__).resolve().parent / "fixtures"


def fixture(name: str) -> str:
	return str(FIXTURES / name)


class TestCli(unittest.TestCase):
	def setUp(self):
		self.runner = CliRunner()
		self.tmp = tempfile.TemporaryDirectory()

	def tearDown(self):
		self.tmp.cleanup()
		reset_settings()

	def invoke(self, *args):
		return self.runner.invoke(cli, list(args))

	def path(self, name: str) -> str:
		return os.path.join(self.tmp.name, name)

	def test_parse(self):
		result = self.invoke("parse", "-f", "[](p | [u] q)")
		self.assertEqual(result.exit_code, 0)
		self.assertEqual(
			result.output.splitlines(),
			["[] (p | [u] q)", "fragment: ML_UBOX_POS", "modal depth: 1", "propositions: p, q"],
		)

	def test_parse_error(self):
		result = self.invoke("parse", "-f", "p &")
		self.assertEqual(result.exit_code, 2)
		self.assertIn("error:", result.output)

	def test_formula_inline_and_from_file(self):
		path = self.path("formula.txt")
		with open(path, "w") as handle:
			handle.write("p\n")
		self.assertEqual(self.invoke("parse", "--file", path).exit_code, 0)
		result = self.invoke("parse", "-f", "p", "--file", path)
		self.assertEqual(result.exit_code, 2)
		self.assertIn("not both", result.output)
		self.assertEqual(self.invoke("parse").exit_code, 2)

	def test_eval(self):
		model = fixture("two_point_model.json")
		result = self.invoke("eval", "--model", model, "--team", "1,2", "-f", "p \\/ ~p")
		self.assertEqual((result.exit_code, result.output), (1, "false\n"))
		result = self.invoke("eval", "--model", model, "--world", "1", "-f", "p")
		self.assertEqual((result.exit_code, result.output), (0, "true\n"))
		self.assertEqual(self.invoke("eval", "--model", model, "-f", "p").exit_code, 2)

	def test_team_search_option(self):
		result = self.invoke("--team-search", "full", "eval", "--model", fixture("two_point_model.json"), "--team", "1,2", "-f", "p | ~p")
		self.assertEqual(result.exit_code, 0)
		self.assertEqual(get_settings().team_search, "full")

	def test_normal_forms_and_translations(self):
		result = self.invoke("nf", "-f", "[](p | [u] q)")
		self.assertEqual(result.output, "[] p | [u] q\n")
		result = self.invoke("nf", "--form", "idis", "-f", "[](p \\/ q)")
		self.assertEqual(result.output, "[] p\n[] q\n")
		result = self.invoke("translate", "--to", "clauses", "-f", "p \\/ q")
		self.assertEqual(result.exit_code, 0)
		self.assertEqual(json.loads(result.output), [["p", "q"]])
		result = self.invoke("nf", "--form", "clauses", "-f", "[u] p")
		self.assertEqual(result.exit_code, 0)
		clauses = json.loads(result.output)
		self.assertTrue(clauses)
		self.assertTrue(all(isinstance(body, str) for clause in clauses for body in clause))
		self.assertEqual(self.invoke("translate", "--to", "mdl", "-f", "p \\/ q").exit_code, 2)

	def test_frame_validity(self):
		result = self.invoke("frame-valid", "--frame", fixture("single_point_frame.json"), "-f", "~p | [u] p")
		self.assertEqual(result.exit_code, 0)
		result = self.invoke("frame-valid", "--frame", fixture("chain_frame.json"), "-f", "~p | [u] p")
		self.assertEqual(result.exit_code, 1)
		self.assertIn("replay block:", result.output)

	def test_frame_class(self):
		result = self.invoke("frame-class", "-f", "~p | [u] p", "--max-points", "2")
		self.assertEqual(result.exit_code, 0)
		self.assertEqual(result.output.splitlines()[-1], "2 of 18 frames")

	def test_audit_and_replay(self):
		report = self.path("audit.json")
		result = self.invoke("audit", "-f", "~p | [u] p", "--property", "disjoint-union", "--max-points", "2", "--json", report)
		self.assertEqual(result.exit_code, 1)
		with open(report) as handle:
			data = json.load(handle)
		self.assertEqual(data["command"], "audit")
		self.assertEqual(data["verdict"], "counterexample")
		self.assertIn("timing_ms", data)
		self.assertEqual(data["report"]["property"], "disjoint_union_closed")
		result = self.invoke("audit", "--replay", report)
		self.assertEqual(result.exit_code, 1)
		self.assertIn("counterexample reproduced", result.output)

	def test_generated_subframe_audit_and_replay(self):
		report = self.path("gensub.json")
		result = self.invoke("audit", "-f", "<u><>(p|~p)", "--property", "gen-subframe", "--max-points", "2", "--json", report)
		self.assertEqual(result.exit_code, 1)
		with open(report) as handle:
			self.assertEqual(json.load(handle)["report"]["witness"]["subframe"], {"points": ["2"], "rel": []})
		result = self.invoke("audit", "--replay", report)
		self.assertEqual(result.exit_code, 1)
		self.assertIn("counterexample reproduced", result.output)

	def test_internal_failure_exits_with_usage_code(self):
		with patch("modal_workbench.cli.frame_class", side_effect=RuntimeError("boom")):
			result = self.invoke("frame-class", "-f", "p", "--max-points", "1")
		self.assertEqual(result.exit_code, 2)
		self.assertIn("internal failure", result.output)
		self.assertNotIsInstance(result.exception, RuntimeError)

	def test_replay_without_witness(self):
		report = self.path("audit.json")
		result = self.invoke("audit", "-f", "[u] ~p | [u] p", "--property", "gen-subframe", "--max-points", "2", "--json", report)
		self.assertEqual(result.exit_code, 0)
		self.assertEqual(self.invoke("audit", "--replay", report).exit_code, 2)

	def test_equiv(self):
		result = self.invoke("equiv", "-f", "[](p | [u] q)", "--other", "[] p | [u] q", "--max-points", "2")
		self.assertEqual(result.exit_code, 0)
		report = self.path("equiv.json")
		result = self.invoke("equiv", "-f", "p", "--other", "q", "--max-points", "1", "--json", report)
		self.assertEqual(result.exit_code, 1)
		self.assertEqual(self.invoke("equiv", "--replay", report).exit_code, 1)

	def test_frame_constructions(self):
		result = self.invoke("ue", "--frame", fixture("loop_frame.json"))
		self.assertEqual(result.output.splitlines(), ["({U1}, {(U1,U1)})", "1 -> U1"])
		loop = fixture("loop_frame.json")
		out = self.path("union.json")
		result = self.invoke("union", "--frame", loop, "--frame", loop, "--out", out)
		self.assertEqual(result.output, "({0.1, 1.1}, {(0.1,0.1), (1.1,1.1)})\n")
		with open(out) as handle:
			self.assertEqual(json.load(handle)["points"], ["0.1", "1.1"])
		result = self.invoke("gensub", "--frame", fixture("chain_frame.json"), "--points", "b")
		self.assertEqual(result.output, "({b, c}, {(b,c)})\n")

	def test_generate_is_seeded(self):
		out = self.path("batch.txt")
		self.assertEqual(self.invoke("generate", "--count", "5", "--seed", "1", "--out", out).exit_code, 0)
		with open(out) as handle:
			first = handle.read()
		self.invoke("generate", "--count", "5", "--seed", "1", "--out", out)
		with open(out) as handle:
			self.assertEqual(handle.read(), first)
		self.assertEqual(len(first.splitlines()), 5)

	def test_suite(self):
		result = self.invoke("suite", "-c", "10", "--seed", "3")
		self.assertEqual(result.exit_code, 0)
		self.assertIn("seed: 3", result.output)
		self.assertIn("[PASS] 10.", result.output)
