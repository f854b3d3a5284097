# Copyright (c) 2026, modal_workbench contributors
# For license information, please see license.txt
"""
□̄-forms for ML(□̄⁺).

A disjunctive □̄-clause is ψ ∨ □̄ψ₁ ∨ … ∨ □̄ψₙ and a conjunctive one is
ψ ∧ □̄ψ₁, all parts ML. Every ML(□̄⁺) formula is Kripke-equivalent to a
conjunction of disjunctive clauses and to a disjunction of conjunctive ones.
The construction pulls closed parts out of the modalities:

	□(φ ∨ ψ) ≡ □φ ∨ ψ,   ◇(φ ∧ ψ) ≡ ◇φ ∧ ψ,   □̄(φ ∨ ψ) ≡ □̄φ ∨ ψ   (ψ closed)

Closed clauses (no local part) produce the unit cases □(⊥ ∨ ψ) and ◇(⊤ ∧ ψ),
where ⊥ and ⊤ are written p ∧ ¬p and p ∨ ¬p over a symbol of the input.
"""

from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Iterable, Sequence

from modal_workbench.modal_workbench.exceptions import FragmentError, InputError
from modal_workbench.modal_workbench.formula.formula import (
	Atom,
	Box,
	Conj,
	Dia,
	Disj,
	Formula,
	Fragment,
	NegAtom,
	UBox,
	classify,
	conjunction,
	disjunction,
	propositions,
	require_fragment,
	subformulas,
)
from modal_workbench.modal_workbench.formula.parser import parse

__all__ = [
	"Polarity",
	"BoxClause",
	"ClosedClauseSet",
	"box_clauses",
	"to_box_form",
	"to_closed_clauses",
]

BOX_FORM_FRAGMENTS = (Fragment.ML, Fragment.ML_UBOX_POS)


class Polarity(str, Enum):
	DISJUNCTIVE = "disjunctive"
	CONJUNCTIVE = "conjunctive"


@dataclass(frozen=True)
class BoxClause:
	"""
	`local` is None for a closed clause. A conjunctive clause has at most one
	global body.
	"""

	local: Formula | None
	globals: tuple
	polarity: Polarity

	def __post_init__(self):
		object.__setattr__(self, "globals", tuple(self.globals))
		object.__setattr__(self, "polarity", Polarity(self.polarity))
		if self.local is None and not self.globals:
			raise InputError("a □̄-clause needs a local part or a global body")
		if self.polarity == Polarity.CONJUNCTIVE and len(self.globals) > 1:
			raise InputError("a conjunctive □̄-clause has at most one global body")
		for part in ([self.local] if self.local is not None else []) + list(self.globals):
			if classify(part) != Fragment.ML:
				raise FragmentError(f"□̄-clause parts must be ML formulas: {part}")

	def as_formula(self) -> Formula:
		parts = [] if self.local is None else [self.local]
		parts += [UBox(body) for body in self.globals]
		if self.polarity == Polarity.DISJUNCTIVE:
			return disjunction(parts)
		return conjunction(parts)


@dataclass(frozen=True)
class ClosedClauseSet:
	""" Each inner tuple [γ₁…γₖ] stands for □̄γ₁ ∨ … ∨ □̄γₖ; the set is their conjunction. """

	clauses: tuple

	def __post_init__(self):
		clauses = tuple(tuple(clause) for clause in self.clauses)
		for clause in clauses:
			if not clause:
				raise InputError("closed □̄-clauses must be nonempty")
			for part in clause:
				if classify(part) != Fragment.ML:
					raise FragmentError(f"closed □̄-clause bodies must be ML formulas: {part}")
		object.__setattr__(self, "clauses", clauses)

	def __len__(self) -> int:
		return len(self.clauses)

	def __iter__(self):
		return iter(self.clauses)

	def as_formulas(self) -> list:
		return [disjunction(UBox(body) for body in clause) for clause in self.clauses]

	def as_formula(self) -> Formula:
		return conjunction(self.as_formulas())

	def to_strings(self) -> list:
		return [[str(body) for body in clause] for clause in self.clauses]

	@classmethod
	def from_strings(cls, data: Sequence) -> "ClosedClauseSet":
		try:
			return cls(tuple(tuple(parse(text, allow_reserved=True) for text in clause) for clause in data))
		except TypeError:
			raise InputError("a clause set is a list of lists of formula strings")


# ──────────────────────────────────────────
# Clause engine
# ──────────────────────────────────────────
def _unique(items: Iterable) -> tuple:
	return tuple(dict.fromkeys(items))


def _join(a: Formula | None, b: Formula | None, node_type) -> Formula | None:
	if a is None:
		return b
	if b is None or a == b:
		return a
	return node_type(a, b)


class _BoxForm:
	"""
	CNF rows are (local, globals) read as local ∨ ⋁□̄globals; DNF rows are
	(local, globals) read as local ∧ ⋀□̄globals. `local` may be None.
	"""

	def __init__(self, f: Formula) -> None:
		symbol = min(propositions(f))
		self.bottom = Conj(Atom(symbol), NegAtom(symbol))
		self.top = Disj(Atom(symbol), NegAtom(symbol))

	@staticmethod
	def _closed_free(f: Formula) -> bool:
		return not any(isinstance(node, UBox) for node in subformulas(f))

	def cnf(self, f: Formula) -> tuple:
		if isinstance(f, Conj):
			return _unique(self.cnf(f.left) + self.cnf(f.right))
		if self._closed_free(f):
			return ((f, ()),)
		if isinstance(f, Disj):
			return self._product(self.cnf(f.left), self.cnf(f.right), Disj)
		if isinstance(f, UBox):
			return _unique((None, _unique(((local,) if local is not None else ()) + glob)) for local, glob in self.cnf(f.body))
		if isinstance(f, Box):
			return _unique((Box(local if local is not None else self.bottom), glob) for local, glob in self.cnf(f.body))
		if isinstance(f, Dia):
			return self.dnf_to_cnf(self.dnf(f))
		raise FragmentError(f"□̄-form is not defined for {type(f).__name__}", constructor=type(f).__name__)

	def dnf(self, f: Formula) -> tuple:
		if isinstance(f, Disj):
			return _unique(self.dnf(f.left) + self.dnf(f.right))
		if self._closed_free(f):
			return ((f, ()),)
		if isinstance(f, Conj):
			return self._product(self.dnf(f.left), self.dnf(f.right), Conj)
		if isinstance(f, Dia):
			return _unique((Dia(local if local is not None else self.top), glob) for local, glob in self.dnf(f.body))
		if isinstance(f, (Box, UBox)):
			return self.cnf_to_dnf(self.cnf(f))
		raise FragmentError(f"□̄-form is not defined for {type(f).__name__}", constructor=type(f).__name__)

	@staticmethod
	def _product(left: Sequence, right: Sequence, node_type) -> tuple:
		return _unique((_join(l_local, r_local, node_type), _unique(l_glob + r_glob)) for (l_local, l_glob), (r_local, r_glob) in product(left, right))

	@staticmethod
	def _flip(rows: Sequence, node_type) -> tuple:
		# one item from every row, items being the local part or a single global
		choices = [([("local", local)] if local is not None else []) + [("global", body) for body in glob] for local, glob in rows]
		flipped = []
		for picked in product(*choices):
			local = None
			glob = []
			for kind, part in picked:
				if kind == "local":
					local = _join(local, part, node_type)
				else:
					glob.append(part)
			flipped.append((local, _unique(glob)))
		return _unique(flipped)

	def cnf_to_dnf(self, rows: Sequence) -> tuple:
		return self._flip(rows, Conj)

	def dnf_to_cnf(self, rows: Sequence) -> tuple:
		return self._flip(rows, Disj)


def box_clauses(f: Formula, polarity: Polarity | str = Polarity.DISJUNCTIVE) -> list:
	require_fragment(f, BOX_FORM_FRAGMENTS, "□̄-form")
	polarity = Polarity(polarity)
	engine = _BoxForm(f)
	if polarity == Polarity.DISJUNCTIVE:
		return [BoxClause(local, glob, polarity) for local, glob in engine.cnf(f)]
	clauses = []
	for local, glob in engine.dnf(f):
		merged = (conjunction(glob),) if glob else ()
		clauses.append(BoxClause(local, merged, polarity))
	return clauses


def to_box_form(f: Formula, polarity: Polarity | str = Polarity.DISJUNCTIVE) -> Formula:
	"""
	Conjunction of disjunctive □̄-clauses, or with `polarity="conjunctive"` a
	disjunction of conjunctive ones, Kripke-equivalent to `f`.
	"""
	clauses = [clause.as_formula() for clause in box_clauses(f, polarity)]
	if Polarity(polarity) == Polarity.DISJUNCTIVE:
		return conjunction(clauses)
	return disjunction(clauses)


def to_closed_clauses(f: Formula) -> ClosedClauseSet:
	""" Closed clauses valid in exactly the models where `f` is valid. """
	clauses = []
	for clause in box_clauses(f, Polarity.DISJUNCTIVE):
		bodies = ((clause.local,) if clause.local is not None else ()) + clause.globals
		clauses.append(_unique(bodies))
	return ClosedClauseSet(_unique(clauses))
