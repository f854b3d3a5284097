# Copyright (c) 2026, modal_workbench contributors
# See license.txt

import unittest

from modal_workbench.modal_workbench.definability.definability import (
	Countermodel,
	EquivalenceMode,
	EquivalenceReport,
	FrameUniverse,
	Semantics,
	find_countermodel,
	frame_class,
	frame_class_of,
	frame_valid,
	model_valid,
	oracle_equiv,
	same_frame_class,
	semantics_of,
	valuations,
)
from modal_workbench.modal_workbench.exceptions import FragmentError, InputError
from modal_workbench.modal_workbench.formula.formula import propositions
from modal_workbench.modal_workbench.formula.parser import parse
from modal_workbench.modal_workbench.kripke.kripke import Frame, Model

SINGLETON_DOMAIN = parse("~p | [u] p")
NONEMPTY_RELATION = parse("<u><>(p|~p)")


class TestFrameUniverse(unittest.TestCase):
	def test_sizes(self):
		self.assertEqual(len(FrameUniverse(2)), 2 + 16)
		self.assertEqual(len(FrameUniverse(3)), 2 + 16 + 512)
		self.assertEqual(len(list(FrameUniverse(2))), 18)
		self.assertEqual(len(FrameUniverse(3, min_points=3)), 512)

	def test_codes(self):
		frame = FrameUniverse.frame_of(2, 0b0110)
		self.assertEqual(frame.points, ("1", "2"))
		self.assertEqual(frame.edges(), [("1", "2"), ("2", "1")])
		self.assertEqual(FrameUniverse.code_of(frame), 0b0110)

	def test_enumeration_order(self):
		first = list(FrameUniverse(2))[:3]
		self.assertEqual([frame.size for frame in first], [1, 1, 2])
		self.assertEqual(first[1].edges(), [("1", "1")])

	def test_invalid_universe(self):
		with self.assertRaises(InputError):
			FrameUniverse(0)
		with self.assertRaises(InputError):
			FrameUniverse(2, min_points=3)

	def test_dict(self):
		self.assertEqual(FrameUniverse.from_dict(FrameUniverse(3).to_dict()), FrameUniverse(3))


class TestFrameValidity(unittest.TestCase):
	def test_semantics(self):
		self.assertEqual(semantics_of(parse("[] p")), Semantics.KRIPKE)
		self.assertEqual(semantics_of(parse("[u] p")), Semantics.KRIPKE)
		self.assertEqual(semantics_of(parse("p \\/ q")), Semantics.TEAM)
		self.assertEqual(semantics_of(parse("dep(<> p; q)")), Semantics.TEAM)
		with self.assertRaises(FragmentError):
			semantics_of(parse("[u] p & dep(p; q)"))

	def test_valuations(self):
		frame = Frame.from_edges(["a", "b"], [])
		self.assertEqual(len(list(valuations(frame, {"p", "q"}))), 16)
		self.assertEqual(next(iter(valuations(frame, {"q", "p"}))), {"p": 0, "q": 0})

	def test_singleton_domain(self):
		self.assertTrue(frame_valid(Frame.from_edges(["w"], []), SINGLETON_DOMAIN))
		self.assertTrue(frame_valid(Frame.from_edges(["w"], [("w", "w")]), SINGLETON_DOMAIN))
		self.assertFalse(frame_valid(Frame.from_edges(["a", "b"], []), SINGLETON_DOMAIN))

	def test_nonempty_relation(self):
		self.assertTrue(frame_valid(Frame.from_edges(["a", "b"], [("a", "b")]), NONEMPTY_RELATION))
		self.assertFalse(frame_valid(Frame.from_edges(["a", "b"], []), NONEMPTY_RELATION))

	def test_extra_symbols_do_not_change_validity(self):
		formulas = [SINGLETON_DOMAIN, NONEMPTY_RELATION, parse("[] p -> p"), parse("p \\/ ~p"), parse("dep(p; q)")]
		for f in formulas:
			padded = sorted(propositions(f) | {"d"})
			for frame in FrameUniverse(2):
				expected = all(model_valid(Model(frame, valuation), f) for valuation in valuations(frame, padded))
				self.assertEqual(frame_valid(frame, f), expected, f"{f} on {frame}")

	def test_countermodel(self):
		frame = Frame.from_edges(["a", "b"], [])
		countermodel = find_countermodel(frame, SINGLETON_DOMAIN)
		self.assertEqual(countermodel.to_dict(frame), {"val": {"p": ["a"]}, "point": "a"})
		self.assertTrue(countermodel.refutes(frame, SINGLETON_DOMAIN))
		self.assertEqual(Countermodel.from_dict(frame, countermodel.to_dict(frame)), countermodel)

	def test_team_countermodel(self):
		frame = Frame.from_edges(["a", "b"], [])
		countermodel = find_countermodel(frame, parse("p \\/ ~p"))
		self.assertEqual(countermodel.team, ("a", "b"))
		self.assertTrue(countermodel.refutes(frame, parse("p \\/ ~p")))
		self.assertTrue(frame_valid(Frame.from_edges(["w"], []), parse("p \\/ ~p")))

	def test_frame_class(self):
		u = FrameUniverse(2)
		self.assertEqual([frame.size for frame in frame_class(SINGLETON_DOMAIN, u)], [1, 1])
		nonempty = frame_class(NONEMPTY_RELATION, u)
		self.assertEqual(len(nonempty), 1 + 15)
		self.assertTrue(all(frame.rel for frame in nonempty))
		self.assertEqual(len(frame_class(parse("p | ~p"), u)), len(u))

	def test_frame_class_of_a_set(self):
		u = FrameUniverse(2)
		both = frame_class_of([SINGLETON_DOMAIN, NONEMPTY_RELATION], u)
		self.assertEqual(both, [Frame.from_edges(["1"], [("1", "1")])])


class TestEquivalenceOracle(unittest.TestCase):
	def test_passing_modes(self):
		u = FrameUniverse(2)
		self.assertTrue(oracle_equiv(parse("[](p | [u] q)"), parse("[] p | [u] q"), u, "kripke_point").passed)
		self.assertTrue(oracle_equiv(parse("p"), parse("p \\/ p"), u, EquivalenceMode.TEAM).passed)
		self.assertTrue(oracle_equiv(parse("p \\/ q"), parse("[u] p | [u] q"), u, EquivalenceMode.MODEL_VALIDITY).passed)
		self.assertTrue(same_frame_class(SINGLETON_DOMAIN, parse("[u] p | [u] ~p"), u).passed)

	def test_first_counterexample(self):
		report = oracle_equiv(parse("p"), parse("q"), FrameUniverse(2), EquivalenceMode.KRIPKE_POINT)
		self.assertEqual(report.verdict, "counterexample")
		self.assertEqual(
			report.witness,
			{
				"frame": {"points": ["1"], "rel": []},
				"val": {"p": [], "q": ["1"]},
				"point": "1",
				"left": False,
				"right": True,
			},
		)
		self.assertTrue(report.replay())

	def test_report_round_trip(self):
		report = oracle_equiv(parse("p \\/ ~p"), parse("p | ~p"), FrameUniverse(2), EquivalenceMode.TEAM)
		self.assertFalse(report.passed)
		restored = EquivalenceReport.from_dict(report.to_dict())
		self.assertEqual(restored.witness, report.witness)
		self.assertTrue(restored.replay())

	def test_frame_validity_counterexample(self):
		report = same_frame_class(SINGLETON_DOMAIN, NONEMPTY_RELATION, FrameUniverse(2))
		self.assertEqual(report.witness["frame"], {"points": ["1"], "rel": []})
		self.assertTrue(report.replay())

	def test_malformed_report(self):
		with self.assertRaises(InputError):
			EquivalenceReport.from_dict({"mode": "team"})

	def test_mode_fragments(self):
		with self.assertRaises(FragmentError):
			oracle_equiv(parse("p \\/ q"), parse("p"), FrameUniverse(1), EquivalenceMode.KRIPKE_POINT)
		with self.assertRaises(FragmentError):
			oracle_equiv(parse("[u] p"), parse("p"), FrameUniverse(1), EquivalenceMode.TEAM)
