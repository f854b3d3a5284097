# Copyright (c) 2026, modal_workbench contributors
# For license information, please see license.txt

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Mapping

from modal_workbench.config import get_settings
from modal_workbench.modal_workbench.exceptions import FragmentError, InputError
from modal_workbench.modal_workbench.formula.formula import (
	KRIPKE_FRAGMENTS,
	TEAM_FRAGMENTS,
	Formula,
	classify,
	propositions,
)
from modal_workbench.modal_workbench.formula.parser import parse
from modal_workbench.modal_workbench.kripke.kripke import Frame, Model, extension
from modal_workbench.modal_workbench.team.team import TeamEvaluator
from modal_workbench.modal_workbench.utils import bits, get_logger, subsets

__all__ = [
	"FrameUniverse",
	"Semantics",
	"semantics_of",
	"valuations",
	"Countermodel",
	"find_countermodel",
	"frame_valid",
	"frame_class",
	"frame_class_of",
	"EquivalenceMode",
	"EquivalenceReport",
	"oracle_equiv",
	"same_frame_class",
]

logger = get_logger("definability")


# ──────────────────────────────────────────
# Frame universe
# ──────────────────────────────────────────
@lru_cache(maxsize=None)
def _point_names(size: int) -> tuple:
	return tuple(str(i) for i in range(1, size + 1))


@dataclass(frozen=True)
class FrameUniverse:
	"""
	Every labelled frame on {1}, {1,2}, …, {1..max_points}. A relation on k
	points is the k²-bit code whose bit i·k+j is the pair (i, j); codes are
	enumerated in ascending order.
	"""

	max_points: int
	min_points: int = 1

	def __post_init__(self):
		if self.min_points < 1 or self.max_points < self.min_points:
			raise InputError(f"invalid frame universe sizes {self.min_points}..{self.max_points}")

	@staticmethod
	def count(size: int) -> int:
		return 1 << (size * size)

	def __len__(self) -> int:
		return sum(self.count(k) for k in range(self.min_points, self.max_points + 1))

	@staticmethod
	def frame_of(size: int, code: int) -> Frame:
		row = (1 << size) - 1
		return Frame(_point_names(size), tuple((code >> (i * size)) & row for i in range(size)))

	@staticmethod
	def code_of(frame: Frame) -> int:
		return sum(mask << (i * frame.size) for i, mask in enumerate(frame.succ))

	def frames(self, size: int | None = None) -> Iterator[Frame]:
		sizes = [size] if size is not None else range(self.min_points, self.max_points + 1)
		for k in sizes:
			for code in range(self.count(k)):
				yield self.frame_of(k, code)

	def __iter__(self):
		return self.frames()

	def to_dict(self) -> dict:
		return {"max_points": self.max_points, "min_points": self.min_points}

	@classmethod
	def from_dict(cls, data: Mapping) -> "FrameUniverse":
		return cls(int(data["max_points"]), int(data.get("min_points", 1)))


# ──────────────────────────────────────────
# Semantics selection
# ──────────────────────────────────────────
class Semantics(str, Enum):
	KRIPKE = "kripke"
	TEAM = "team"


def semantics_of(f: Formula) -> Semantics:
	"""
	Kripke semantics for ML, ML(□̄⁺) and ML(□̄), team semantics for ML(⊘),
	MDL and EMDL. On ML both agree, so the faster Kripke evaluator is used.
	"""
	fragment = classify(f)
	if fragment in KRIPKE_FRAGMENTS:
		return Semantics.KRIPKE
	if fragment in TEAM_FRAGMENTS:
		return Semantics.TEAM
	raise FragmentError(f"no semantics covers a {fragment.value} formula: {f}", constructor=fragment.value)


def valuations(frame: Frame, props: Iterable[str]) -> Iterator[dict]:
	""" Every valuation of `props` (sorted) into subsets of the frame, in ascending code order. """
	props = sorted(props)
	for values in product(range(frame.full + 1), repeat=len(props)):
		yield dict(zip(props, values))


@dataclass(frozen=True)
class Countermodel:
	""" A valuation plus the point (Kripke) or team (team semantics) where the formula fails. """

	valuation: dict
	point: str | None = None
	team: tuple | None = None

	def to_dict(self, frame: Frame) -> dict:
		data = {"val": {prop: frame.team_names(mask) for prop, mask in sorted(self.valuation.items())}}
		if self.point is not None:
			data["point"] = self.point
		if self.team is not None:
			data["team"] = list(self.team)
		return data

	@classmethod
	def from_dict(cls, frame: Frame, data: Mapping) -> "Countermodel":
		valuation = {prop: frame.team_of(names) for prop, names in data.get("val", {}).items()}
		team = tuple(data["team"]) if "team" in data else None
		return cls(valuation, data.get("point"), team)

	def refutes(self, frame: Frame, f: Formula) -> bool:
		model = Model(frame, self.valuation)
		if self.point is not None:
			return not extension(model, f) >> frame.index(self.point) & 1
		if self.team is not None:
			return not TeamEvaluator(model).holds(frame.team_of(self.team), f)
		raise InputError("a countermodel needs a point or a team")


def _model_failure(model: Model, f: Formula, semantics: Semantics) -> tuple | None:
	""" (point, team) locating the failure of `f` in `model`, or None when valid. """
	if semantics == Semantics.KRIPKE:
		failing = model.frame.full & ~extension(model, f)
		if failing:
			return model.frame.points[next(bits(failing))], None
		return None
	evaluator = TeamEvaluator(model)
	if get_settings().validity_check == "exhaustive":
		teams = subsets(model.frame.full)
	else:
		teams = (model.frame.full,)
	for team in teams:
		if not evaluator.holds(team, f):
			return None, tuple(model.frame.team_names(team))
	return None


def model_valid(model: Model, f: Formula, semantics: Semantics | None = None) -> bool:
	return _model_failure(model, f, semantics or semantics_of(f)) is None


def find_countermodel(frame: Frame, f: Formula, semantics: Semantics | None = None) -> Countermodel | None:
	""" First valuation (ascending) refuting `f` on `frame`. """
	semantics = semantics or semantics_of(f)
	for valuation in valuations(frame, propositions(f)):
		failure = _model_failure(Model(frame, valuation), f, semantics)
		if failure is not None:
			point, team = failure
			return Countermodel(valuation, point, team)
	return None


def frame_valid(frame: Frame, f: Formula) -> bool:
	return find_countermodel(frame, f) is None


def frame_class(f: Formula, u: FrameUniverse) -> list:
	""" The frames of `u` validating `f`, in enumeration order. """
	semantics = semantics_of(f)
	found = [frame for frame in u if find_countermodel(frame, f, semantics) is None]
	logger.info("frame class of %s: %s of %s frames", f, len(found), len(u))
	return found


def frame_class_of(formulas: Iterable[Formula], u: FrameUniverse) -> list:
	""" Frames of `u` validating every formula of a finite set. """
	formulas = [(f, semantics_of(f)) for f in formulas]
	return [frame for frame in u if all(find_countermodel(frame, f, s) is None for f, s in formulas)]


# ──────────────────────────────────────────
# Equivalence oracle
# ──────────────────────────────────────────
class EquivalenceMode(str, Enum):
	KRIPKE_POINT = "kripke_point"
	TEAM = "team"
	MODEL_VALIDITY = "model_validity"
	FRAME_VALIDITY = "frame_validity"


@dataclass
class EquivalenceReport:
	mode: EquivalenceMode
	left: Formula
	right: Formula
	universe: FrameUniverse
	verdict: str
	witness: dict | None = None
	checked: int = 0

	@property
	def passed(self) -> bool:
		return self.verdict == "pass"

	def to_dict(self) -> dict:
		data = {
			"mode": self.mode.value,
			"left": str(self.left),
			"right": str(self.right),
			"universe": self.universe.to_dict(),
			"verdict": self.verdict,
			"checked": self.checked,
		}
		if self.witness is not None:
			data["witness"] = self.witness
		return data

	@classmethod
	def from_dict(cls, data: Mapping) -> "EquivalenceReport":
		try:
			return cls(
				EquivalenceMode(data["mode"]),
				parse(data["left"], allow_reserved=True),
				parse(data["right"], allow_reserved=True),
				FrameUniverse.from_dict(data["universe"]),
				data["verdict"],
				data.get("witness"),
				data.get("checked", 0),
			)
		except (KeyError, ValueError, TypeError) as err:
			raise InputError(f"malformed equivalence report: {err}")

	def replay(self) -> bool:
		""" True when the recorded witness still separates the two formulas. """
		if self.witness is None:
			return False
		frame = Frame.from_dict(self.witness["frame"])
		values = _compare_at(self.mode, frame, self.witness, self.left, self.right)
		return values[0] != values[1]


def _require_mode(f: Formula, mode: EquivalenceMode) -> None:
	fragment = classify(f)
	allowed = {
		EquivalenceMode.KRIPKE_POINT: KRIPKE_FRAGMENTS,
		EquivalenceMode.TEAM: TEAM_FRAGMENTS,
	}.get(mode, KRIPKE_FRAGMENTS | TEAM_FRAGMENTS)
	if fragment not in allowed:
		raise FragmentError(f"{mode.value} comparison does not support {fragment.value} formulas", constructor=fragment.value)


def _compare_at(mode: EquivalenceMode, frame: Frame, witness: Mapping, left: Formula, right: Formula) -> tuple:
	if mode == EquivalenceMode.FRAME_VALIDITY:
		return frame_valid(frame, left), frame_valid(frame, right)
	model = Model.from_names(frame, witness.get("val", {}))
	if mode == EquivalenceMode.KRIPKE_POINT:
		index = frame.index(witness["point"])
		return bool(extension(model, left) >> index & 1), bool(extension(model, right) >> index & 1)
	if mode == EquivalenceMode.TEAM:
		team = frame.team_of(witness["team"])
		return TeamEvaluator(model).holds(team, left), TeamEvaluator(model).holds(team, right)
	return model_valid(model, left), model_valid(model, right)


def oracle_equiv(f: Formula, g: Formula, u: FrameUniverse, mode: EquivalenceMode | str) -> EquivalenceReport:
	"""
	Compare `f` and `g` exhaustively over `u` × valuations of their joint
	symbols × (points | teams | nothing). The first difference in
	enumeration order becomes the witness.
	"""
	mode = EquivalenceMode(mode)
	_require_mode(f, mode)
	_require_mode(g, mode)
	props = propositions(f) | propositions(g)
	checked = 0
	report = EquivalenceReport(mode, f, g, u, "pass")

	for frame in u:
		if mode == EquivalenceMode.FRAME_VALIDITY:
			checked += 1
			left, right = frame_valid(frame, f), frame_valid(frame, g)
			if left != right:
				report.verdict = "counterexample"
				report.witness = {"frame": frame.to_dict(), "left": left, "right": right}
				break
			continue

		witness = None
		for valuation in valuations(frame, props):
			model = Model(frame, valuation)
			checked += 1
			witness = _first_difference(mode, model, f, g)
			if witness is not None:
				witness = {"frame": frame.to_dict(), **Countermodel(valuation).to_dict(frame), **witness}
				break
		if witness is not None:
			report.verdict = "counterexample"
			report.witness = witness
			break

	report.checked = checked
	logger.info("%s equivalence of %s and %s: %s after %s checks", mode.value, f, g, report.verdict, checked)
	return report


def _first_difference(mode: EquivalenceMode, model: Model, f: Formula, g: Formula) -> dict | None:
	frame = model.frame
	if mode == EquivalenceMode.KRIPKE_POINT:
		diff = extension(model, f) ^ extension(model, g)
		if not diff:
			return None
		index = next(bits(diff))
		return {"point": frame.points[index], "left": bool(extension(model, f) >> index & 1), "right": bool(extension(model, g) >> index & 1)}
	if mode == EquivalenceMode.TEAM:
		left_eval, right_eval = TeamEvaluator(model), TeamEvaluator(model)
		for team in subsets(frame.full):
			left, right = left_eval.holds(team, f), right_eval.holds(team, g)
			if left != right:
				return {"team": frame.team_names(team), "left": left, "right": right}
		return None
	left, right = model_valid(model, f), model_valid(model, g)
	if left != right:
		return {"left": left, "right": right}
	return None


def same_frame_class(f: Formula, g: Formula, u: FrameUniverse) -> EquivalenceReport:
	return oracle_equiv(f, g, u, EquivalenceMode.FRAME_VALIDITY)
