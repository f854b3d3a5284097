# Copyright (c) 2026, modal_workbench contributors
# For license information, please see license.txt
"""
Formula AST shared by every fragment: ML, ML with (positive) universal
modality, ML with intuitionistic disjunction, MDL and EMDL.

Stored formulas are always in negation normal form. `Neg` exists only as a
transient wrapper that `push_negation` removes.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

from modal_workbench.modal_workbench.exceptions import FragmentError


class Formula:
	""" Base class of all formula nodes. """

	__slots__ = ()

	def __str__(self) -> str:
		return render(self)


@dataclass(frozen=True)
class Atom(Formula):
	name: str


@dataclass(frozen=True)
class NegAtom(Formula):
	name: str


@dataclass(frozen=True)
class Conj(Formula):
	left: Formula
	right: Formula


@dataclass(frozen=True)
class Disj(Formula):
	left: Formula
	right: Formula


@dataclass(frozen=True)
class Dia(Formula):
	body: Formula


@dataclass(frozen=True)
class Box(Formula):
	body: Formula


@dataclass(frozen=True)
class UBox(Formula):
	body: Formula


@dataclass(frozen=True)
class UDia(Formula):
	body: Formula


@dataclass(frozen=True)
class IDisj(Formula):
	left: Formula
	right: Formula


@dataclass(frozen=True)
class Dep(Formula):
	args: tuple
	target: Formula

	def __post_init__(self):
		if not isinstance(self.args, tuple):
			object.__setattr__(self, "args", tuple(self.args))
		for part in self.args + (self.target,):
			for node in subformulas(part):
				if isinstance(node, (UBox, UDia, IDisj, Dep)):
					raise FragmentError(
						f"dependence atom arguments must be ML formulas, found {type(node).__name__}",
						constructor=type(node).__name__,
					)


@dataclass(frozen=True)
class Neg(Formula):
	""" Transient negation wrapper; never part of a stored formula. """

	body: Formula


BINARY = (Conj, Disj, IDisj)
UNARY = (Dia, Box, UBox, UDia, Neg)


class Fragment(str, Enum):
	ML = "ML"
	ML_UBOX_POS = "ML_UBOX_POS"
	ML_UBOX = "ML_UBOX"
	ML_IDIS = "ML_IDIS"
	MDL = "MDL"
	EMDL = "EMDL"
	MIXED = "MIXED"


KRIPKE_FRAGMENTS = frozenset({Fragment.ML, Fragment.ML_UBOX_POS, Fragment.ML_UBOX})
TEAM_FRAGMENTS = frozenset({Fragment.ML, Fragment.ML_IDIS, Fragment.MDL, Fragment.EMDL})

# each extension of ML is a chain; fragments on different chains are incomparable
_CHAINS = (
	(Fragment.ML_UBOX_POS, Fragment.ML_UBOX),
	(Fragment.ML_IDIS,),
	(Fragment.MDL, Fragment.EMDL),
)


def fragment_leq(a: Fragment, b: Fragment) -> bool:
	""" Syntactic inclusion order; MIXED is only below itself. """
	if a == b or a == Fragment.ML:
		return True
	if Fragment.MIXED in (a, b):
		return False
	for chain in _CHAINS:
		if a in chain and b in chain:
			return chain.index(a) <= chain.index(b)
	return False


# ──────────────────────────────────────────
# Traversal and measures
# ──────────────────────────────────────────
def children(f: Formula) -> tuple:
	if isinstance(f, BINARY):
		return (f.left, f.right)
	if isinstance(f, UNARY):
		return (f.body,)
	if isinstance(f, Dep):
		return f.args + (f.target,)
	return ()


def with_children(f: Formula, parts: tuple) -> Formula:
	""" Same node type as `f` over new children, in `children` order. """
	if isinstance(f, BINARY):
		return type(f)(*parts)
	if isinstance(f, UNARY):
		return type(f)(parts[0])
	if isinstance(f, Dep):
		return Dep(tuple(parts[:-1]), parts[-1])
	return f


def subformulas(f: Formula) -> Iterator[Formula]:
	""" Preorder traversal of every node of `f`, `f` included. """
	stack = [f]
	while stack:
		node = stack.pop()
		yield node
		stack.extend(reversed(children(node)))


def propositions(f: Formula) -> set:
	return {node.name for node in subformulas(f) if isinstance(node, (Atom, NegAtom))}


def modal_depth(f: Formula) -> int:
	""" Nesting of ◇/□; universal modalities and ⊘ add nothing. """
	if isinstance(f, (Dia, Box)):
		return 1 + modal_depth(f.body)
	parts = children(f)
	if not parts:
		return 0
	return max(modal_depth(part) for part in parts)


def _is_symbol(f: Formula) -> bool:
	return isinstance(f, Atom)


def classify(f: Formula) -> Fragment:
	ubox = udia = idis = dep = compound_dep = False
	for node in subformulas(f):
		if isinstance(node, UBox):
			ubox = True
		elif isinstance(node, UDia):
			udia = True
		elif isinstance(node, IDisj):
			idis = True
		elif isinstance(node, Dep):
			dep = True
			if not all(_is_symbol(part) for part in node.args + (node.target,)):
				compound_dep = True

	found = []
	if udia:
		found.append(Fragment.ML_UBOX)
	elif ubox:
		found.append(Fragment.ML_UBOX_POS)
	if idis:
		found.append(Fragment.ML_IDIS)
	if compound_dep:
		found.append(Fragment.EMDL)
	elif dep:
		found.append(Fragment.MDL)

	if not found:
		return Fragment.ML
	if len(found) > 1:
		return Fragment.MIXED
	return found[0]


def require_fragment(f: Formula, allowed: Iterable[Fragment], operation: str) -> Fragment:
	fragment = classify(f)
	allowed = tuple(allowed)
	if fragment not in allowed:
		raise FragmentError(
			f"{operation} is defined for {', '.join(a.value for a in allowed)}; formula is {fragment.value}",
			constructor=_offending_constructor(f, allowed),
		)
	return fragment


def _offending_constructor(f: Formula, allowed: tuple) -> str | None:
	allowed_types = {Atom, NegAtom, Conj, Disj, Dia, Box}
	if Fragment.ML_UBOX_POS in allowed or Fragment.ML_UBOX in allowed:
		allowed_types.add(UBox)
	if Fragment.ML_UBOX in allowed:
		allowed_types.add(UDia)
	if Fragment.ML_IDIS in allowed:
		allowed_types.add(IDisj)
	if Fragment.MDL in allowed or Fragment.EMDL in allowed:
		allowed_types.add(Dep)
	for node in subformulas(f):
		if type(node) not in allowed_types:
			return type(node).__name__
	return None


# ──────────────────────────────────────────
# Negation
# ──────────────────────────────────────────
def push_negation(f: Formula) -> Formula:
	""" Remove every `Neg` by exchanging duals down to the literals. """
	return _nnf(f, False)


def _nnf(f: Formula, negated: bool) -> Formula:
	if isinstance(f, Neg):
		return _nnf(f.body, not negated)
	if isinstance(f, Atom):
		return NegAtom(f.name) if negated else f
	if isinstance(f, NegAtom):
		return Atom(f.name) if negated else f
	if isinstance(f, (Conj, Disj)):
		left, right = _nnf(f.left, negated), _nnf(f.right, negated)
		if negated:
			return Disj(left, right) if isinstance(f, Conj) else Conj(left, right)
		return type(f)(left, right)
	if isinstance(f, (Dia, Box)):
		body = _nnf(f.body, negated)
		if negated:
			return Box(body) if isinstance(f, Dia) else Dia(body)
		return type(f)(body)
	if isinstance(f, (UBox, UDia)):
		body = _nnf(f.body, negated)
		if negated:
			return UDia(body) if isinstance(f, UBox) else UBox(body)
		return type(f)(body)
	if negated:
		raise FragmentError(
			f"negation of {type(f).__name__} is not defined in team semantics",
			constructor=type(f).__name__,
		)
	if isinstance(f, IDisj):
		return IDisj(_nnf(f.left, False), _nnf(f.right, False))
	if isinstance(f, Dep):
		return Dep(tuple(_nnf(arg, False) for arg in f.args), _nnf(f.target, False))
	raise TypeError(f"not a formula: {f!r}")


def negate(f: Formula) -> Formula:
	return push_negation(Neg(f))


# ──────────────────────────────────────────
# Builders for shorthands
# ──────────────────────────────────────────
def _fold(parts: Iterable[Formula], node_type) -> Formula:
	parts = list(parts)
	if not parts:
		raise ValueError(f"cannot fold an empty list into {node_type.__name__}")
	result = parts[0]
	for part in parts[1:]:
		result = node_type(result, part)
	return result


def conjunction(parts: Iterable[Formula]) -> Formula:
	return _fold(parts, Conj)


def disjunction(parts: Iterable[Formula]) -> Formula:
	return _fold(parts, Disj)


def idis_chain(parts: Iterable[Formula]) -> Formula:
	return _fold(parts, IDisj)


def implies(a: Formula, b: Formula) -> Formula:
	return Disj(negate(a), b)


def iff(a: Formula, b: Formula) -> Formula:
	return Conj(implies(a, b), implies(b, a))


def boxes(f: Formula, times: int) -> Formula:
	for _ in range(times):
		f = Box(f)
	return f


# ──────────────────────────────────────────
# Printer
# ──────────────────────────────────────────
_IMPL, _IDIS, _DISJ, _CONJ, _PREFIX = range(5)

_PREFIX_SYMBOLS = {Dia: "<>", Box: "[]", UBox: "[u]", UDia: "<u>"}
_BINARY_SYMBOLS = {IDisj: (" \\/ ", _IDIS), Disj: (" | ", _DISJ), Conj: (" & ", _CONJ)}


def _level(f: Formula) -> int:
	for node_type, (_, level) in _BINARY_SYMBOLS.items():
		if isinstance(f, node_type):
			return level
	return _PREFIX


def render(f: Formula) -> str:
	"""
	Concrete syntax with minimal parentheses; binary connectives associate
	to the left, so `parse(render(f)) == f`.
	"""
	if isinstance(f, Atom):
		return f.name
	if isinstance(f, NegAtom):
		return f"~{f.name}"
	if isinstance(f, Neg):
		return f"!{_wrap(f.body, _PREFIX)}"
	if isinstance(f, tuple(_PREFIX_SYMBOLS)):
		return f"{_PREFIX_SYMBOLS[type(f)]} {_wrap(f.body, _PREFIX)}"
	if isinstance(f, Dep):
		return f"dep({', '.join(render(arg) for arg in f.args)}; {render(f.target)})"
	symbol, level = _BINARY_SYMBOLS[type(f)]
	left = _wrap(f.left, level)
	right = _wrap(f.right, level + 1)
	return f"{left}{symbol}{right}"


def _wrap(f: Formula, min_level: int) -> str:
	text = render(f)
	return f"({text})" if _level(f) < min_level else text
