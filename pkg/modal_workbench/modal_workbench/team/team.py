# Copyright (c) 2026, modal_workbench contributors
# For license information, please see license.txt
"""
Team semantics for ML(⊘), MDL and EMDL with lax ◇. Teams are bitsets over
the points of a model; the empty team is a legal team.
"""

from itertools import product
from typing import Iterator

from modal_workbench.config import get_settings
from modal_workbench.modal_workbench.exceptions import FragmentError, InputError
from modal_workbench.modal_workbench.formula.formula import (
	TEAM_FRAGMENTS,
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
	require_fragment,
)
from modal_workbench.modal_workbench.kripke.kripke import Model, extension
from modal_workbench.modal_workbench.utils import bits, get_logger, subsets

__all__ = [
	"successor_image",
	"predecessor_image",
	"team_rel_holds",
	"successor_teams",
	"TeamEvaluator",
	"eval_team",
	"model_valid_team",
	"check_flatness",
]

logger = get_logger("team")


def _as_team(m: Model, t) -> int:
	if isinstance(t, int):
		if not 0 <= t <= m.frame.full:
			raise InputError(f"team {t:b} mentions points outside the model")
		return t
	return m.frame.team_of(t)


def successor_image(m: Model, t: int, inverse: bool = False) -> int:
	""" R[T], or R⁻¹[T] with `inverse`. """
	table = m.frame.pred if inverse else m.frame.succ
	image = 0
	for w in bits(t):
		image |= table[w]
	return image


def predecessor_image(m: Model, t: int) -> int:
	return successor_image(m, t, inverse=True)


def team_rel_holds(m: Model, t: int, s: int) -> bool:
	""" T[R]S: S ⊆ R[T] and T ⊆ R⁻¹[S]. """
	return s & ~successor_image(m, t) == 0 and t & ~predecessor_image(m, s) == 0


def successor_teams(m: Model, t: int, mode: str = "reduced") -> Iterator[int]:
	"""
	Candidate witnesses S for ◇ at team `t`. In "reduced" mode these are the
	images of choice functions picking one successor per member; in "full"
	mode every S with T[R]S.
	"""
	if mode == "full":
		for s in subsets(successor_image(m, t)):
			if team_rel_holds(m, t, s):
				yield s
		return

	options = []
	for w in bits(t):
		successors = [1 << v for v in bits(m.frame.succ[w])]
		if not successors:
			return
		options.append(successors)
	seen = set()
	for choice in product(*options):
		s = 0
		for member in choice:
			s |= member
		if s not in seen:
			seen.add(s)
			yield s


class TeamEvaluator:
	"""
	Evaluates formulas on teams of one model. Results are memoized per
	(subformula, team) for the lifetime of the evaluator.
	"""

	def __init__(self, m: Model, mode: str | None = None) -> None:
		self.model = m
		self.mode = mode or get_settings().team_search
		if self.mode not in ("reduced", "full"):
			raise InputError(f"unknown team search mode {self.mode!r}")
		# id of a subformula -> (the subformula, {team: result}); holding the
		# node keeps its id from being reused while the entry exists
		self._memo: dict[int, tuple[Formula, dict]] = {}

	def holds(self, t: int, f: Formula) -> bool:
		entry = self._memo.get(id(f))
		if entry is None:
			entry = self._memo[id(f)] = (f, {})
		results = entry[1]
		if t not in results:
			results[t] = self._compute(t, f)
		return results[t]

	def _compute(self, t: int, f: Formula) -> bool:
		m = self.model
		if isinstance(f, Atom):
			return t & ~m.value(f.name) == 0
		if isinstance(f, NegAtom):
			return t & m.value(f.name) == 0
		if isinstance(f, Conj):
			return self.holds(t, f.left) and self.holds(t, f.right)
		if isinstance(f, Disj):
			return any(self.holds(t1, f.left) and self.holds(t2, f.right) for t1, t2 in self._splits(t))
		if isinstance(f, Dia):
			return any(self.holds(s, f.body) for s in successor_teams(m, t, self.mode))
		if isinstance(f, Box):
			return self.holds(successor_image(m, t), f.body)
		if isinstance(f, IDisj):
			return self.holds(t, f.left) or self.holds(t, f.right)
		if isinstance(f, Dep):
			return self._dependence(t, f)
		raise FragmentError(
			f"team semantics is not defined for {type(f).__name__}",
			constructor=type(f).__name__,
		)

	def _splits(self, t: int) -> Iterator[tuple]:
		if self.mode == "reduced":
			for t1 in subsets(t):
				yield t1, t & ~t1
			return
		for t1 in subsets(t):
			rest = t & ~t1
			for shared in subsets(t1):
				yield t1, rest | shared

	def _dependence(self, t: int, f: Dep) -> bool:
		seen = {}
		for w in bits(t):
			single = 1 << w
			pattern = tuple(self.holds(single, arg) for arg in f.args)
			value = self.holds(single, f.target)
			if seen.setdefault(pattern, value) != value:
				return False
		return True


def eval_team(m: Model, t, f: Formula, mode: str | None = None) -> bool:
	require_fragment(f, TEAM_FRAGMENTS, "team evaluation")
	return TeamEvaluator(m, mode).holds(_as_team(m, t), f)


def model_valid_team(m: Model, f: Formula, mode: str | None = None, check: str | None = None) -> bool:
	"""
	Team validity in `m`. Every team-semantic logic here is downward closed,
	so the full team decides it; `check="exhaustive"` evaluates every team.
	"""
	require_fragment(f, TEAM_FRAGMENTS, "team model validity")
	check = check or get_settings().validity_check
	evaluator = TeamEvaluator(m, mode)
	if check == "exhaustive":
		return all(evaluator.holds(t, f) for t in subsets(m.frame.full))
	return evaluator.holds(m.frame.full, f)


def check_flatness(m: Model, t, f: Formula) -> bool:
	require_fragment(f, (Fragment.ML,), "flatness check")
	t = _as_team(m, t)
	pointwise = t & ~extension(m, f) == 0
	team_side = TeamEvaluator(m).holds(t, f)
	if team_side != pointwise:
		logger.warning("flatness fails for %s on team %s", f, m.frame.team_names(t))
	return team_side == pointwise
