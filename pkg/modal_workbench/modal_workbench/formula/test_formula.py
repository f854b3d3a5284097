# Copyright (c) 2026, modal_workbench contributors
# See license.txt

import unittest

from hypothesis import given, settings, strategies as st

from modal_workbench.modal_workbench.definability.definability import FrameUniverse, valuations
from modal_workbench.modal_workbench.exceptions import FragmentError
from modal_workbench.modal_workbench.formula.formula import (
	KRIPKE_FRAGMENTS,
	Atom,
	Box,
	Conj,
	Dep,
	Dia,
	Disj,
	Fragment,
	IDisj,
	Neg,
	NegAtom,
	UBox,
	UDia,
	boxes,
	classify,
	conjunction,
	fragment_leq,
	idis_chain,
	iff,
	implies,
	modal_depth,
	negate,
	propositions,
	push_negation,
	require_fragment,
	subformulas,
)
from modal_workbench.modal_workbench.formula.parser import parse
from modal_workbench.modal_workbench.kripke.kripke import Model, extension

P, Q, R = Atom("p"), Atom("q"), Atom("r")

literals = st.sampled_from([P, Q, R, NegAtom("p"), NegAtom("q")])

ml_formulas = st.recursive(
	literals,
	lambda inner: st.one_of(
		st.builds(Conj, inner, inner),
		st.builds(Disj, inner, inner),
		st.builds(Dia, inner),
		st.builds(Box, inner),
	),
	max_leaves=8,
)

ubox_formulas = st.recursive(
	ml_formulas,
	lambda inner: st.one_of(
		st.builds(Conj, inner, inner),
		st.builds(Disj, inner, inner),
		st.builds(Box, inner),
		st.builds(UBox, inner),
		st.builds(UDia, inner),
	),
	max_leaves=6,
)

team_formulas = st.recursive(
	st.one_of(ml_formulas, st.builds(Dep, st.lists(ml_formulas, max_size=2).map(tuple), ml_formulas)),
	lambda inner: st.one_of(
		st.builds(Conj, inner, inner),
		st.builds(Disj, inner, inner),
		st.builds(IDisj, inner, inner),
		st.builds(Dia, inner),
	),
	max_leaves=6,
)


# negation anywhere, over a single symbol so every model up to three points can be checked
negated_formulas = st.recursive(
	st.sampled_from([P, NegAtom("p")]),
	lambda inner: st.one_of(
		st.builds(Neg, inner),
		st.builds(Conj, inner, inner),
		st.builds(Disj, inner, inner),
		st.builds(Dia, inner),
		st.builds(Box, inner),
		st.builds(UBox, inner),
		st.builds(UDia, inner),
	),
	max_leaves=6,
)


def direct_extension(model: Model, f) -> int:
	""" Truth set of `f` with `Neg` read as complement at every level. """
	frame, full = model.frame, model.frame.full
	if isinstance(f, Atom):
		return model.value(f.name)
	if isinstance(f, NegAtom):
		return full & ~model.value(f.name)
	if isinstance(f, Neg):
		return full & ~direct_extension(model, f.body)
	if isinstance(f, (Conj, Disj)):
		left, right = direct_extension(model, f.left), direct_extension(model, f.right)
		return left & right if isinstance(f, Conj) else left | right
	body = direct_extension(model, f.body)
	if isinstance(f, Dia):
		return sum(1 << i for i, succ in enumerate(frame.succ) if succ & body)
	if isinstance(f, Box):
		return sum(1 << i for i, succ in enumerate(frame.succ) if not succ & ~body)
	if isinstance(f, UBox):
		return full if body == full else 0
	return full if body else 0


class TestFormula(unittest.TestCase):
	def test_classify(self):
		cases = {
			"p & [] q": Fragment.ML,
			"[u] p | <> q": Fragment.ML_UBOX_POS,
			"<u> p": Fragment.ML_UBOX,
			"~[u] p": Fragment.ML_UBOX,
			"p \\/ q": Fragment.ML_IDIS,
			"dep(p, q; r)": Fragment.MDL,
			"dep(<> p; q)": Fragment.EMDL,
			"dep(p; q) & dep(<> p; q)": Fragment.EMDL,
			"[u] p & (p \\/ q)": Fragment.MIXED,
		}
		for text, fragment in cases.items():
			self.assertEqual(classify(parse(text)), fragment, text)

	def test_fragment_order(self):
		self.assertTrue(fragment_leq(Fragment.ML, Fragment.EMDL))
		self.assertTrue(fragment_leq(Fragment.ML_UBOX_POS, Fragment.ML_UBOX))
		self.assertTrue(fragment_leq(Fragment.MDL, Fragment.EMDL))
		self.assertFalse(fragment_leq(Fragment.ML_UBOX, Fragment.ML_UBOX_POS))
		self.assertFalse(fragment_leq(Fragment.ML_IDIS, Fragment.MDL))
		self.assertFalse(fragment_leq(Fragment.MIXED, Fragment.ML_UBOX))

	def test_modal_depth_ignores_universal_modality(self):
		self.assertEqual(modal_depth(parse("[] <> p & [u] [] q")), 2)
		self.assertEqual(modal_depth(parse("[u] <u> p")), 0)
		self.assertEqual(modal_depth(parse("dep([] p; q)")), 1)

	def test_propositions(self):
		self.assertEqual(propositions(parse("dep(p; ~q) | <> r")), {"p", "q", "r"})

	def test_subformulas_preorder(self):
		f = parse("p & [] q")
		self.assertEqual(list(subformulas(f)), [f, P, Box(Q), Q])

	def test_push_negation_dualizes(self):
		self.assertEqual(negate(parse("[] p | <u> q")), Conj(Dia(NegAtom("p")), UBox(NegAtom("q"))))
		self.assertEqual(push_negation(Neg(Neg(P))), P)

	def test_negation_of_team_connectives_is_rejected(self):
		with self.assertRaises(FragmentError) as ctx:
			negate(IDisj(P, Q))
		self.assertEqual(ctx.exception.constructor, "IDisj")
		with self.assertRaises(FragmentError):
			negate(Dep((P,), Q))

	def test_dependence_arguments_must_be_ml(self):
		with self.assertRaises(FragmentError):
			Dep((UBox(P),), Q)
		with self.assertRaises(FragmentError):
			Dep((P,), IDisj(P, Q))
		self.assertEqual(Dep([P], Q).args, (P,))

	def test_require_fragment_names_constructor(self):
		with self.assertRaises(FragmentError) as ctx:
			require_fragment(parse("p \\/ q"), KRIPKE_FRAGMENTS, "pointed evaluation")
		self.assertEqual(ctx.exception.constructor, "IDisj")
		self.assertEqual(require_fragment(parse("[u] p"), KRIPKE_FRAGMENTS, "test"), Fragment.ML_UBOX_POS)

	def test_builders(self):
		self.assertEqual(conjunction([P, Q, R]), Conj(Conj(P, Q), R))
		self.assertEqual(idis_chain([P, Q]), IDisj(P, Q))
		self.assertEqual(implies(P, Q), Disj(NegAtom("p"), Q))
		self.assertEqual(iff(P, Q), Conj(Disj(NegAtom("p"), Q), Disj(NegAtom("q"), P)))
		self.assertEqual(boxes(P, 2), Box(Box(P)))
		self.assertEqual(boxes(P, 0), P)
		with self.assertRaises(ValueError):
			conjunction([])

	def test_render(self):
		self.assertEqual(str(Disj(P, UBox(Q))), "p | [u] q")
		self.assertEqual(str(Conj(Disj(P, Q), R)), "(p | q) & r")
		self.assertEqual(str(Conj(P, Conj(Q, R))), "p & (q & r)")
		self.assertEqual(str(Box(Disj(P, Q))), "[] (p | q)")
		self.assertEqual(str(IDisj(P, NegAtom("q"))), "p \\/ ~q")
		self.assertEqual(str(Dep((P, Q), R)), "dep(p, q; r)")
		self.assertEqual(str(Dep((), R)), "dep(; r)")

	@settings(max_examples=100, deadline=None)
	@given(ubox_formulas)
	def test_render_parses_back_kripke(self, f):
		self.assertEqual(parse(str(f)), f)

	@settings(max_examples=100, deadline=None)
	@given(team_formulas)
	def test_render_parses_back_team(self, f):
		self.assertEqual(parse(str(f)), f)

	@settings(max_examples=100, deadline=None)
	@given(ml_formulas)
	def test_double_negation(self, f):
		self.assertEqual(negate(negate(f)), f)
		self.assertEqual(classify(negate(f)), Fragment.ML)

	@settings(max_examples=30, deadline=None)
	@given(negated_formulas)
	def test_push_negation_preserves_truth(self, f):
		pushed = push_negation(f)
		self.assertFalse(any(isinstance(part, Neg) for part in subformulas(pushed)))
		for frame in FrameUniverse(3):
			for valuation in valuations(frame, ["p"]):
				model = Model(frame, valuation)
				self.assertEqual(extension(model, pushed), direct_extension(model, f), str(frame))
