# Copyright (c) 2026, modal_workbench contributors
# See license.txt

import unittest
from unittest.mock import patch

from modal_workbench.modal_workbench.definability.audit import (
	AuditProperty,
	AuditReport,
	Verdict,
	audit,
	hierarchy_witnesses,
)
from modal_workbench.modal_workbench.definability.definability import FrameUniverse
from modal_workbench.modal_workbench.exceptions import InputError
from modal_workbench.modal_workbench.formula.parser import parse
from modal_workbench.modal_workbench.frameops.frameops import BoundedMorphism, UltrafilterExtension
from modal_workbench.modal_workbench.kripke.kripke import Frame

SINGLETON_DOMAIN = parse("~p | [u] p")
NONEMPTY_RELATION = parse("<u><>(p|~p)")
CLOSED_CLAUSE = parse("[u] ~p | [u] p")


class TestAuditProperty(unittest.TestCase):
	def test_aliases(self):
		self.assertEqual(AuditProperty.lookup("disjoint-union"), AuditProperty.DISJOINT_UNION_CLOSED)
		self.assertEqual(AuditProperty.lookup("gen-subframe"), AuditProperty.GEN_SUBFRAME_CLOSED)
		self.assertEqual(AuditProperty.lookup("reflects_ultrafilter_ext"), AuditProperty.REFLECTS_ULTRAFILTER_EXT)
		with self.assertRaises(InputError):
			AuditProperty.lookup("closed-under-everything")


class TestAudits(unittest.TestCase):
	def test_disjoint_union_counterexample(self):
		report = audit(AuditProperty.DISJOINT_UNION_CLOSED, SINGLETON_DOMAIN, FrameUniverse(2))
		self.assertEqual(report.verdict, Verdict.COUNTEREXAMPLE)
		self.assertEqual(report.witness["frames"], [{"points": ["1"], "rel": []}] * 2)
		self.assertEqual(report.witness["union"]["points"], ["0.1", "1.1"])
		self.assertTrue(report.replay())

	def test_generated_subframe_counterexample(self):
		report = audit("gen-subframe", NONEMPTY_RELATION, FrameUniverse(2))
		self.assertEqual(report.verdict, Verdict.COUNTEREXAMPLE)
		self.assertEqual(report.witness["subframe"], {"points": ["2"], "rel": []})
		self.assertEqual(report.witness["frame"], {"points": ["1", "2"], "rel": [["1", "1"]]})
		self.assertEqual(report.witness["seed"], ["2"])
		self.assertTrue(report.replay())

	def test_closed_clause_passes(self):
		report = audit(AuditProperty.GEN_SUBFRAME_CLOSED, CLOSED_CLAUSE, FrameUniverse(3))
		self.assertEqual(report.verdict, Verdict.PASS)
		self.assertEqual(report.checked, len(FrameUniverse(3)))
		self.assertFalse(report.replay())

	def test_pruned_unions_give_a_bounded_pass(self):
		report = audit(AuditProperty.DISJOINT_UNION_CLOSED, parse("[] p -> p"), FrameUniverse(2))
		self.assertEqual(report.verdict, Verdict.BOUNDED_PASS)
		self.assertGreater(report.pruned, 0)
		self.assertTrue(report.passed)

	def test_bounded_morphic_images(self):
		report = audit(AuditProperty.BOUNDED_MORPHIC_IMAGE_CLOSED, parse("[] p -> p"), FrameUniverse(2))
		self.assertTrue(report.passed)
		report = audit(AuditProperty.BOUNDED_MORPHIC_IMAGE_CLOSED, NONEMPTY_RELATION, FrameUniverse(2))
		self.assertEqual(report.verdict, Verdict.PASS)
		self.assertEqual(report.checked, 18)

	def test_reflection(self):
		u = FrameUniverse(2)
		self.assertTrue(audit(AuditProperty.REFLECTS_ULTRAFILTER_EXT, NONEMPTY_RELATION, u).passed)
		self.assertTrue(audit(AuditProperty.REFLECTS_FIN_GEN_SUBFRAMES, SINGLETON_DOMAIN, u).passed)
		report = audit(AuditProperty.REFLECTS_FIN_GEN_SUBFRAMES, SINGLETON_DOMAIN, u, max_seed=1)
		self.assertEqual(report.verdict, Verdict.COUNTEREXAMPLE)
		self.assertEqual(report.witness["max_seed"], 1)
		self.assertEqual(len(report.witness["frame"]["points"]), 2)
		self.assertIn("countermodel", report.witness)
		self.assertTrue(report.replay())

	def test_bounded_morphic_image_witness(self):
		edgeless = Frame.from_edges(["x"], [])

		def collapse(frame):
			return [BoundedMorphism(frame, edgeless, (0,) * frame.size)]

		with patch("modal_workbench.modal_workbench.definability.audit.bounded_morphic_images", collapse):
			report = audit(AuditProperty.BOUNDED_MORPHIC_IMAGE_CLOSED, NONEMPTY_RELATION, FrameUniverse(1))
		self.assertEqual(report.verdict, Verdict.COUNTEREXAMPLE)
		self.assertEqual(report.witness["frame"], {"points": ["1"], "rel": [["1", "1"]]})
		self.assertEqual(report.witness["image"], {"points": ["x"], "rel": []})
		self.assertEqual(report.witness["morphism"], {"map": {"1": "x"}})
		self.assertIn("countermodel", report.witness)
		# the collapse is not a bounded morphism, so the real replay rejects it
		self.assertFalse(report.replay())

	def test_ultrafilter_extension_witness(self):
		looped = Frame.from_edges(["U1"], [["U1", "U1"]])

		def extension(frame):
			return UltrafilterExtension(looped, (), {})

		with patch("modal_workbench.modal_workbench.definability.audit.ultrafilter_extension", extension):
			report = audit(AuditProperty.REFLECTS_ULTRAFILTER_EXT, NONEMPTY_RELATION, FrameUniverse(1))
		self.assertEqual(report.verdict, Verdict.COUNTEREXAMPLE)
		self.assertEqual(report.witness["frame"], {"points": ["1"], "rel": []})
		self.assertEqual(report.witness["extension"], looped.to_dict())
		self.assertIn("countermodel", report.witness)
		self.assertFalse(report.replay())

	def test_clause_reflects_subframes_generated_by_its_width(self):
		report = audit(AuditProperty.REFLECTS_FIN_GEN_SUBFRAMES, CLOSED_CLAUSE, FrameUniverse(3), max_seed=2)
		self.assertTrue(report.passed)

	def test_invalid_max_seed(self):
		with self.assertRaises(InputError):
			audit(AuditProperty.REFLECTS_FIN_GEN_SUBFRAMES, SINGLETON_DOMAIN, FrameUniverse(1), max_seed=0)

	def test_report_round_trip(self):
		report = audit(AuditProperty.DISJOINT_UNION_CLOSED, SINGLETON_DOMAIN, FrameUniverse(2))
		restored = AuditReport.from_dict(report.to_dict())
		self.assertEqual(restored.verdict, report.verdict)
		self.assertEqual(restored.formula, SINGLETON_DOMAIN)
		self.assertTrue(restored.replay())
		with self.assertRaises(InputError):
			AuditReport.from_dict({"property": "nonsense"})

	def test_tampered_witness_does_not_replay(self):
		data = audit(AuditProperty.DISJOINT_UNION_CLOSED, SINGLETON_DOMAIN, FrameUniverse(2)).to_dict()
		data["witness"]["countermodel"]["val"] = {"p": []}
		self.assertFalse(AuditReport.from_dict(data).replay())


class TestHierarchy(unittest.TestCase):
	def test_witnesses(self):
		witnesses = hierarchy_witnesses(FrameUniverse(2))
		self.assertEqual(set(witnesses), {"positive_ubox_not_ml", "ubox_not_positive_ubox"})
		for report in witnesses.values():
			self.assertEqual(report.verdict, Verdict.COUNTEREXAMPLE)
			self.assertTrue(report.replay())
