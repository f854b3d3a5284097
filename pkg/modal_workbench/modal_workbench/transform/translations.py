# Copyright (c) 2026, modal_workbench contributors
# For license information, please see license.txt

from itertools import product
from typing import Callable, Iterable

from modal_workbench.modal_workbench.exceptions import FreshSymbolError, InputError
from modal_workbench.modal_workbench.formula.formula import (
	Atom,
	Box,
	Conj,
	Dep,
	Dia,
	Disj,
	Formula,
	Fragment,
	IDisj,
	children,
	conjunction,
	disjunction,
	boxes,
	idis_chain,
	iff,
	modal_depth,
	negate,
	propositions,
	require_fragment,
	with_children,
)
from modal_workbench.modal_workbench.formula.parser import RESERVED_PREFIX
from modal_workbench.modal_workbench.transform.normal_forms import ClosedClauseSet
from modal_workbench.modal_workbench.utils import get_logger

__all__ = [
	"IDIS_RULES",
	"distribute_idis",
	"to_idis_normal_form",
	"idis_to_clause",
	"clause_to_idis",
	"FreshSymbols",
	"emdl_to_mdl",
	"dep_to_idis",
]

logger = get_logger("transform")

IDIS_FRAGMENTS = (Fragment.ML, Fragment.ML_IDIS)
DEP_FRAGMENTS = (Fragment.ML, Fragment.MDL, Fragment.EMDL)
FRESH_PREFIX = RESERVED_PREFIX


# ──────────────────────────────────────────
# ⊘-normal form
# ──────────────────────────────────────────
def _conj_left(f: Formula) -> Formula | None:
	""" (α ⊘ β) ∧ γ ↦ (α ∧ γ) ⊘ (β ∧ γ) """
	if isinstance(f, Conj) and isinstance(f.left, IDisj):
		return IDisj(Conj(f.left.left, f.right), Conj(f.left.right, f.right))
	return None


def _conj_right(f: Formula) -> Formula | None:
	""" γ ∧ (α ⊘ β) ↦ (γ ∧ α) ⊘ (γ ∧ β) """
	if isinstance(f, Conj) and isinstance(f.right, IDisj):
		return IDisj(Conj(f.left, f.right.left), Conj(f.left, f.right.right))
	return None


def _disj_left(f: Formula) -> Formula | None:
	""" (α ⊘ β) ∨ γ ↦ (α ∨ γ) ⊘ (β ∨ γ) """
	if isinstance(f, Disj) and isinstance(f.left, IDisj):
		return IDisj(Disj(f.left.left, f.right), Disj(f.left.right, f.right))
	return None


def _disj_right(f: Formula) -> Formula | None:
	""" γ ∨ (α ⊘ β) ↦ (γ ∨ α) ⊘ (γ ∨ β) """
	if isinstance(f, Disj) and isinstance(f.right, IDisj):
		return IDisj(Disj(f.left, f.right.left), Disj(f.left, f.right.right))
	return None


def _dia(f: Formula) -> Formula | None:
	""" ◇(α ⊘ β) ↦ ◇α ⊘ ◇β """
	if isinstance(f, Dia) and isinstance(f.body, IDisj):
		return IDisj(Dia(f.body.left), Dia(f.body.right))
	return None


def _box(f: Formula) -> Formula | None:
	""" □(α ⊘ β) ↦ □α ⊘ □β """
	if isinstance(f, Box) and isinstance(f.body, IDisj):
		return IDisj(Box(f.body.left), Box(f.body.right))
	return None


# Each rule rewrites at the root of its argument, or returns None.
IDIS_RULES: dict[str, Callable[[Formula], Formula | None]] = {
	"conj_left": _conj_left,
	"conj_right": _conj_right,
	"disj_left": _disj_left,
	"disj_right": _disj_right,
	"dia": _dia,
	"box": _box,
}


def distribute_idis(f: Formula) -> Formula:
	""" Rewrite innermost-first until ⊘ only occurs above every other connective. """
	rewritten = with_children(f, tuple(distribute_idis(part) for part in children(f)))
	for rule in IDIS_RULES.values():
		result = rule(rewritten)
		if result is not None:
			return distribute_idis(result)
	return rewritten


def _idis_leaves(f: Formula) -> list:
	if isinstance(f, IDisj):
		return _idis_leaves(f.left) + _idis_leaves(f.right)
	return [f]


def to_idis_normal_form(f: Formula) -> list:
	""" [ψ₁…ψₙ], all ML, with ψ₁ ⊘ … ⊘ ψₙ team-equivalent to `f`. """
	require_fragment(f, IDIS_FRAGMENTS, "⊘-normal form")
	return list(dict.fromkeys(_idis_leaves(distribute_idis(f))))


def idis_to_clause(f: Formula) -> ClosedClauseSet:
	""" The closed clause □̄ψ₁ ∨ … ∨ □̄ψₙ, Kripke-valid exactly where `f` is team-valid. """
	return ClosedClauseSet((tuple(to_idis_normal_form(f)),))


def clause_to_idis(clause) -> Formula:
	if isinstance(clause, ClosedClauseSet):
		if len(clause) != 1:
			raise InputError(f"expected a single closed clause, got {len(clause)}")
		clause = clause.clauses[0]
	clause = tuple(clause)
	if not clause:
		raise InputError("cannot translate an empty clause")
	# validates the bodies
	ClosedClauseSet((clause,))
	return idis_chain(clause)


# ──────────────────────────────────────────
# Dependence atoms
# ──────────────────────────────────────────
class FreshSymbols:
	"""
	Deterministic supply `_f1`, `_f2`, … The parser only accepts the
	reserved prefix with `allow_reserved`, so user formulas never clash.
	"""

	def __init__(self, taken: Iterable[str] = (), prefix: str = FRESH_PREFIX) -> None:
		self.taken = set(taken)
		self.prefix = prefix
		self.counter = 0

	def next(self) -> str:
		self.counter += 1
		name = f"{self.prefix}{self.counter}"
		if name in self.taken:
			raise FreshSymbolError(f"fresh symbol {name} is already in use")
		self.taken.add(name)
		return name


def _map_deps(f: Formula, rewrite: Callable[[Dep], Formula]) -> Formula:
	if isinstance(f, Dep):
		return rewrite(f)
	parts = children(f)
	if not parts:
		return f
	return with_children(f, tuple(_map_deps(part, rewrite) for part in parts))


def _is_flat_dep(atom: Dep) -> bool:
	return all(isinstance(part, Atom) for part in atom.args + (atom.target,))


def emdl_to_mdl(f: Formula, fresh: FreshSymbols | None = None) -> Formula:
	"""
	Replace every dependence atom with compound arguments by

		¬(⋀_{0≤i≤k} □ⁱ ⋀_j (pⱼ ↔ θⱼ)) ∨ dep(p₁…pₙ; p₀)

	where θ₁…θₙ are the arguments, θ₀ the target, the pⱼ fresh and k the
	modal depth of the atom. Frame validity is preserved; validity in a
	single model is not.
	"""
	require_fragment(f, DEP_FRAGMENTS, "EMDL to MDL translation")
	if fresh is None:
		fresh = FreshSymbols(propositions(f))
	else:
		fresh.taken |= propositions(f)

	def rewrite(atom: Dep) -> Formula:
		if _is_flat_dep(atom):
			return atom
		thetas = atom.args + (atom.target,)
		symbols = [Atom(fresh.next()) for _ in thetas]
		agreement = conjunction(iff(symbol, theta) for symbol, theta in zip(symbols, thetas))
		depth = modal_depth(atom)
		guard = conjunction(boxes(agreement, i) for i in range(depth + 1))
		logger.debug("dependence atom %s uses fresh symbols %s", atom, [s.name for s in symbols])
		return Disj(negate(guard), Dep(tuple(symbols[:-1]), symbols[-1]))

	return _map_deps(f, rewrite)


def dep_to_idis(f: Formula) -> Formula:
	""" Team-equivalent ML(⊘) formula: each dependence atom becomes a ∨-split over argument patterns. """
	require_fragment(f, DEP_FRAGMENTS, "dependence atom elimination")

	def rewrite(atom: Dep) -> Formula:
		constant = IDisj(atom.target, negate(atom.target))
		if not atom.args:
			return constant
		cases = []
		for pattern in product((True, False), repeat=len(atom.args)):
			literals = [arg if positive else negate(arg) for arg, positive in zip(atom.args, pattern)]
			cases.append(Conj(conjunction(literals), constant))
		return disjunction(cases)

	return _map_deps(f, rewrite)
