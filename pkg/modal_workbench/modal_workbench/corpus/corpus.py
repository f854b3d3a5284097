# Copyright (c) 2026, modal_workbench contributors
# For license information, please see license.txt
"""
Seeded formula generators per fragment and the curated formulas every
property suite starts from. Formula i of a batch depends only on
(fragment, seed, i), so batches can be produced in any order.
"""

import hashlib
import random
from dataclasses import dataclass, replace
from typing import Iterable

from modal_workbench.modal_workbench.exceptions import FragmentError, InputError
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
	NegAtom,
	UBox,
	UDia,
	subformulas,
)
from modal_workbench.modal_workbench.formula.parser import parse
from modal_workbench.modal_workbench.transform.normal_forms import ClosedClauseSet

__all__ = [
	"GenConfig",
	"deterministic_seed",
	"constructors_of",
	"generate",
	"generate_closed",
	"generate_clauses",
	"export_batch",
	"curated_formulas",
]

ATOM, NEG_ATOM, CONJ, DISJ, DIA, BOX, UBOX, UDIA, IDISJ, DEP = (
	"atom", "neg_atom", "conj", "disj", "dia", "box", "ubox", "udia", "idisj", "dep",
)
MODAL = {DIA, BOX}
LEAVES = (ATOM, NEG_ATOM)

_BASE = (ATOM, NEG_ATOM, CONJ, DISJ, DIA, BOX)
_CONSTRUCTORS = {
	Fragment.ML: _BASE,
	Fragment.ML_UBOX_POS: _BASE + (UBOX,),
	Fragment.ML_UBOX: _BASE + (UBOX, UDIA),
	Fragment.ML_IDIS: _BASE + (IDISJ,),
	Fragment.MDL: _BASE + (DEP,),
	Fragment.EMDL: _BASE + (DEP,),
}


@dataclass(frozen=True)
class GenConfig:
	fragment: Fragment
	max_depth: int = 2
	max_props: int = 2
	seed: int = 2016
	count: int = 20
	# node budget of one formula
	max_size: int = 8
	# dependence atoms per formula; None means unbounded
	max_deps: int | None = None
	max_dep_args: int = 2

	def __post_init__(self):
		object.__setattr__(self, "fragment", Fragment(self.fragment))
		if self.fragment == Fragment.MIXED:
			raise FragmentError("cannot generate formulas of the MIXED fragment", constructor=Fragment.MIXED.value)
		if self.max_depth < 0 or self.max_props < 1 or self.count < 0 or self.max_size < 1:
			raise InputError("generator needs max_depth >= 0, max_props >= 1, count >= 0 and max_size >= 1")


def deterministic_seed(*parts: object) -> int:
	key = "|".join(str(p) for p in parts)
	digest = hashlib.sha256(key.encode("utf-8")).hexdigest()[:16]
	return int(digest, 16) & 0x7FFFFFFFFFFFFFFF


def constructors_of(fragment: Fragment) -> tuple:
	return _CONSTRUCTORS[Fragment(fragment)]


class _Builder:
	def __init__(self, cfg: GenConfig, rng: random.Random) -> None:
		self.cfg = cfg
		self.rng = rng
		self.constructors = constructors_of(cfg.fragment)
		self.deps_left = cfg.max_deps

	def symbol(self) -> str:
		return f"p{self.rng.randint(1, self.cfg.max_props)}"

	def literal(self) -> Formula:
		name = self.symbol()
		return Atom(name) if self.rng.random() < 0.5 else NegAtom(name)

	def available(self, depth: int, size: int) -> list:
		options = []
		for kind in self.constructors:
			if kind in LEAVES:
				continue
			if kind in MODAL and depth == 0:
				continue
			if kind == DEP and self.deps_left is not None and self.deps_left <= 0:
				continue
			if kind in (CONJ, DISJ, IDISJ) and size < 3:
				continue
			options.append(kind)
		return options

	def build(self, depth: int, size: int, root: str | None = None) -> Formula:
		kind = root
		if kind is None:
			options = self.available(depth, size)
			# leaves grow likelier as the budget shrinks
			if size <= 1 or not options or self.rng.random() < 1.0 / size:
				return self.literal()
			kind = self.rng.choice(options)
		if kind in LEAVES:
			return Atom(self.symbol()) if kind == ATOM else NegAtom(self.symbol())
		if kind in (CONJ, DISJ, IDISJ):
			left_size = self.rng.randint(1, max(1, size - 2))
			left = self.build(depth, left_size)
			right = self.build(depth, max(1, size - 1 - left_size))
			return {CONJ: Conj, DISJ: Disj, IDISJ: IDisj}[kind](left, right)
		if kind in MODAL:
			body = self.build(depth - 1, size - 1)
			return Dia(body) if kind == DIA else Box(body)
		if kind in (UBOX, UDIA):
			body = self.build(depth, max(1, size - 1))
			return UBox(body) if kind == UBOX else UDia(body)
		return self.dependence(depth, size)

	def dependence(self, depth: int, size: int) -> Formula:
		if self.deps_left is not None:
			self.deps_left -= 1
		arity = self.rng.randint(0, self.cfg.max_dep_args)
		if self.cfg.fragment == Fragment.EMDL:
			part_size = max(1, min(3, (size - 1) // (arity + 1)))
			ml = _Builder(replace(self.cfg, fragment=Fragment.ML), self.rng)
			parts = [ml.build(depth, part_size) for _ in range(arity + 1)]
			if all(isinstance(part, Atom) for part in parts):
				# an all-symbol atom would be plain MDL
				i = self.rng.randrange(len(parts))
				if depth >= 1:
					parts[i] = self.rng.choice((Dia, Box))(parts[i])
				else:
					parts[i] = Conj(parts[i], ml.literal())
			return Dep(tuple(parts[:-1]), parts[-1])
		return Dep(tuple(Atom(self.symbol()) for _ in range(arity)), Atom(self.symbol()))


def _rng(cfg: GenConfig, stream: str, index: int) -> random.Random:
	return random.Random(deterministic_seed(stream, cfg.fragment.value, cfg.seed, index))


def generate(cfg: GenConfig) -> list:
	"""
	`cfg.count` formulas of `cfg.fragment` with modal depth at most
	`cfg.max_depth` over p1..p<max_props>. From 20 formulas on, the first
	ones are rooted at each constructor of the fragment in turn. Unless
	`max_deps` is 0, every EMDL formula holds a dependence atom with a
	compound argument or target.
	"""
	forced = []
	if cfg.count >= 20:
		forced = [
			kind for kind in constructors_of(cfg.fragment)
			if not (kind in MODAL and cfg.max_depth == 0) and not (kind == DEP and cfg.max_deps == 0)
		]
	formulas = []
	for index in range(cfg.count):
		builder = _Builder(cfg, _rng(cfg, "formula", index))
		root = forced[index] if index < len(forced) else None
		f = builder.build(cfg.max_depth, max(cfg.max_size, 3), root)
		if cfg.fragment == Fragment.EMDL and builder.deps_left != 0 and not any(isinstance(node, Dep) for node in subformulas(f)):
			dep = builder.dependence(cfg.max_depth, max(cfg.max_size, 3))
			f = Conj(f, dep) if builder.rng.random() < 0.5 else Disj(f, dep)
		formulas.append(f)
	return formulas


def generate_closed(cfg: GenConfig) -> list:
	""" Closed formulas: ∧/∨ combinations of one to three □̄ψ with ψ in ML. """
	ml = replace(cfg, fragment=Fragment.ML)
	formulas = []
	for index in range(cfg.count):
		rng = _rng(cfg, "closed", index)
		builder = _Builder(ml, rng)
		result = UBox(builder.build(cfg.max_depth, max(1, cfg.max_size // 2)))
		for _ in range(rng.randint(0, 2)):
			other = UBox(builder.build(cfg.max_depth, max(1, cfg.max_size // 2)))
			result = Conj(result, other) if rng.random() < 0.5 else Disj(result, other)
		formulas.append(result)
	return formulas


def generate_clauses(cfg: GenConfig, max_disjuncts: int = 3) -> list:
	""" Closed disjunctive □̄-clauses, each as a one-clause ClosedClauseSet. """
	if max_disjuncts < 1:
		raise InputError("a closed clause needs at least one disjunct")
	ml = replace(cfg, fragment=Fragment.ML)
	clauses = []
	for index in range(cfg.count):
		rng = _rng(cfg, "clause", index)
		builder = _Builder(ml, rng)
		bodies = tuple(builder.build(cfg.max_depth, cfg.max_size) for _ in range(rng.randint(1, max_disjuncts)))
		clauses.append(ClosedClauseSet((bodies,)))
	return clauses


def export_batch(formulas: Iterable[Formula]) -> str:
	return "".join(f"{formula}\n" for formula in formulas)


# ──────────────────────────────────────────
# Curated formulas
# ──────────────────────────────────────────
CURATED = {
	# the class of frames with exactly one point
	"singleton_domain": "~p | [u] p",
	# the class of frames with a nonempty relation
	"nonempty_relation": "<u><>(p|~p)",
	"box_closed_disjunct_lhs": "[](p | [u] q)",
	"box_closed_disjunct_rhs": "[] p | [u] q",
	"dia_closed_conjunct_lhs": "<>(p & [u] q)",
	"dia_closed_conjunct_rhs": "<> p & [u] q",
	"ubox_closed_disjunct_lhs": "[u](p | [u] q)",
	"ubox_closed_disjunct_rhs": "[u] p | [u] q",
	"idis_bridge": "p \\/ q",
	"idis_bridge_clause": "[u] p | [u] q",
	"box_idis_bridge": "[](p \\/ q)",
	"box_idis_bridge_clause": "[u][] p | [u][] q",
}

# (lhs, rhs) names of the Kripke-equivalent rewrite pairs
REWRITE_PAIRS = (
	("box_closed_disjunct_lhs", "box_closed_disjunct_rhs"),
	("dia_closed_conjunct_lhs", "dia_closed_conjunct_rhs"),
	("ubox_closed_disjunct_lhs", "ubox_closed_disjunct_rhs"),
)

# (team formula, closed clause) names with equal model validity
BRIDGE_PAIRS = (
	("idis_bridge", "idis_bridge_clause"),
	("box_idis_bridge", "box_idis_bridge_clause"),
)


def curated_formulas() -> dict:
	return {name: parse(text) for name, text in CURATED.items()}
