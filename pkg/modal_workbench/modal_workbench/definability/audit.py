# Copyright (c) 2026, modal_workbench contributors
# For license information, please see license.txt
"""
Finite-scale audits of the closure and reflection conditions on the frame
class of a formula. A pass is evidence over the enumerated universe only.
"""

from dataclasses import dataclass
from enum import Enum
from itertools import combinations_with_replacement
from typing import Mapping

from modal_workbench.modal_workbench.definability.definability import (
	Countermodel,
	FrameUniverse,
	Semantics,
	find_countermodel,
	semantics_of,
)
from modal_workbench.modal_workbench.exceptions import InputError
from modal_workbench.modal_workbench.formula.formula import Formula
from modal_workbench.modal_workbench.formula.parser import parse
from modal_workbench.modal_workbench.frameops.frameops import (
	BoundedMorphism,
	bounded_morphic_images,
	check_bounded_morphism,
	disjoint_union,
	finitely_generated_subframes,
	generated_mask,
	generated_subframe,
	ultrafilter_extension,
)
from modal_workbench.modal_workbench.kripke.kripke import Frame
from modal_workbench.modal_workbench.utils import get_logger

__all__ = ["AuditProperty", "Verdict", "AuditReport", "audit", "hierarchy_witnesses"]

logger = get_logger("audit")


class AuditProperty(str, Enum):
	GEN_SUBFRAME_CLOSED = "gen_subframe_closed"
	DISJOINT_UNION_CLOSED = "disjoint_union_closed"
	BOUNDED_MORPHIC_IMAGE_CLOSED = "bounded_morphic_image_closed"
	REFLECTS_FIN_GEN_SUBFRAMES = "reflects_fin_gen_subframes"
	REFLECTS_ULTRAFILTER_EXT = "reflects_ultrafilter_ext"

	@classmethod
	def lookup(cls, name: str) -> "AuditProperty":
		""" Accepts the value or a short alias such as "disjoint-union". """
		key = name.strip().lower().replace("-", "_")
		aliases = {
			"gen_subframe": cls.GEN_SUBFRAME_CLOSED,
			"generated_subframe": cls.GEN_SUBFRAME_CLOSED,
			"disjoint_union": cls.DISJOINT_UNION_CLOSED,
			"bounded_morphic_image": cls.BOUNDED_MORPHIC_IMAGE_CLOSED,
			"bounded_morphism": cls.BOUNDED_MORPHIC_IMAGE_CLOSED,
			"reflects_fin_gen": cls.REFLECTS_FIN_GEN_SUBFRAMES,
			"reflects_ue": cls.REFLECTS_ULTRAFILTER_EXT,
			"reflects_ultrafilter": cls.REFLECTS_ULTRAFILTER_EXT,
		}
		if key in aliases:
			return aliases[key]
		try:
			return cls(key)
		except ValueError:
			raise InputError(f"unknown audit property {name!r}")


class Verdict(str, Enum):
	PASS = "pass"
	# pass over every candidate that fits the universe; some were pruned
	BOUNDED_PASS = "bounded_pass"
	COUNTEREXAMPLE = "counterexample"


@dataclass
class AuditReport:
	property: AuditProperty
	formula: Formula
	universe: FrameUniverse
	verdict: Verdict
	witness: dict | None = None
	checked: int = 0
	pruned: int = 0
	max_seed: int | None = None

	@property
	def passed(self) -> bool:
		return self.verdict != Verdict.COUNTEREXAMPLE

	def to_dict(self) -> dict:
		data = {
			"property": self.property.value,
			"formula": str(self.formula),
			"universe": self.universe.to_dict(),
			"verdict": self.verdict.value,
			"checked": self.checked,
			"pruned": self.pruned,
		}
		if self.max_seed is not None:
			data["max_seed"] = self.max_seed
		if self.witness is not None:
			data["witness"] = self.witness
		return data

	@classmethod
	def from_dict(cls, data: Mapping) -> "AuditReport":
		try:
			return cls(
				AuditProperty(data["property"]),
				parse(data["formula"], allow_reserved=True),
				FrameUniverse.from_dict(data["universe"]),
				Verdict(data["verdict"]),
				data.get("witness"),
				data.get("checked", 0),
				data.get("pruned", 0),
				data.get("max_seed"),
			)
		except (KeyError, ValueError, TypeError) as err:
			raise InputError(f"malformed audit report: {err}")

	def replay(self) -> bool:
		"""
		Rebuild the witness and re-check it: the constituent frames validate
		the formula and the constructed (or reflected) frame is refuted by
		the recorded countermodel.
		"""
		if self.witness is None:
			return False
		return _REPLAYERS[self.property](self.formula, self.witness)


# ──────────────────────────────────────────
# Audits
# ──────────────────────────────────────────
class _Validity:
	""" Frame validity of one formula, cached per frame. """

	def __init__(self, f: Formula) -> None:
		self.formula = f
		self.semantics: Semantics = semantics_of(f)
		self._cache = {}

	def countermodel(self, frame: Frame) -> Countermodel | None:
		key = (frame.points, frame.succ)
		if key not in self._cache:
			self._cache[key] = find_countermodel(frame, self.formula, self.semantics)
		return self._cache[key]

	def __call__(self, frame: Frame) -> bool:
		return self.countermodel(frame) is None


def _witness(refuted: Frame, countermodel: Countermodel, **parts) -> dict:
	return {**parts, "countermodel": countermodel.to_dict(refuted)}


def _gen_subframe_closed(valid: _Validity, u: FrameUniverse, report: AuditReport) -> None:
	for frame in u:
		report.checked += 1
		if not valid(frame):
			continue
		seen = set()
		for seed in range(1, frame.full + 1):
			mask = generated_mask(frame, seed)
			if mask in seen:
				continue
			seen.add(mask)
			sub = frame.restrict(mask)
			countermodel = valid.countermodel(sub)
			if countermodel is not None:
				report.witness = _witness(sub, countermodel, frame=frame.to_dict(), seed=frame.team_names(seed), subframe=sub.to_dict())
				return


def _disjoint_union_closed(valid: _Validity, u: FrameUniverse, report: AuditReport) -> None:
	members = []
	for frame in u:
		report.checked += 1
		if valid(frame):
			members.append(frame)
	for first, second in combinations_with_replacement(members, 2):
		if first.size + second.size > u.max_points:
			report.pruned += 1
			continue
		union = disjoint_union([first, second])
		countermodel = valid.countermodel(union)
		if countermodel is not None:
			report.witness = _witness(union, countermodel, frames=[first.to_dict(), second.to_dict()], union=union.to_dict())
			return


def _bounded_morphic_image_closed(valid: _Validity, u: FrameUniverse, report: AuditReport) -> None:
	for frame in u:
		report.checked += 1
		if not valid(frame):
			continue
		for bm in bounded_morphic_images(frame):
			countermodel = valid.countermodel(bm.target)
			if countermodel is not None:
				report.witness = _witness(bm.target, countermodel, frame=frame.to_dict(), image=bm.target.to_dict(), morphism=bm.to_dict())
				return


def _reflects_fin_gen_subframes(valid: _Validity, u: FrameUniverse, report: AuditReport) -> None:
	for frame in u:
		report.checked += 1
		countermodel = valid.countermodel(frame)
		if countermodel is None:
			continue
		max_seed = report.max_seed or frame.size
		if all(valid(sub) for sub in finitely_generated_subframes(frame, max_seed)):
			report.witness = _witness(frame, countermodel, frame=frame.to_dict(), max_seed=max_seed)
			return


def _reflects_ultrafilter_ext(valid: _Validity, u: FrameUniverse, report: AuditReport) -> None:
	# ultrafilter_extension raises if the principal map is not an isomorphism
	for frame in u:
		report.checked += 1
		extension = ultrafilter_extension(frame).frame
		countermodel = valid.countermodel(frame)
		if countermodel is None:
			continue
		if valid(extension):
			report.witness = _witness(frame, countermodel, frame=frame.to_dict(), extension=extension.to_dict())
			return


_AUDITS = {
	AuditProperty.GEN_SUBFRAME_CLOSED: _gen_subframe_closed,
	AuditProperty.DISJOINT_UNION_CLOSED: _disjoint_union_closed,
	AuditProperty.BOUNDED_MORPHIC_IMAGE_CLOSED: _bounded_morphic_image_closed,
	AuditProperty.REFLECTS_FIN_GEN_SUBFRAMES: _reflects_fin_gen_subframes,
	AuditProperty.REFLECTS_ULTRAFILTER_EXT: _reflects_ultrafilter_ext,
}


def audit(prop: AuditProperty | str, f: Formula, u: FrameUniverse, max_seed: int | None = None) -> AuditReport:
	"""
	Run one closure or reflection audit of the frame class of `f` over `u`.
	`max_seed` bounds the seeds of the finitely generated subframes; by
	default every seed is allowed.
	"""
	prop = prop if isinstance(prop, AuditProperty) else AuditProperty.lookup(prop)
	if max_seed is not None and max_seed < 1:
		raise InputError("max_seed must be at least 1")
	report = AuditReport(prop, f, u, Verdict.PASS, max_seed=max_seed)
	_AUDITS[prop](_Validity(f), u, report)
	if report.witness is not None:
		report.verdict = Verdict.COUNTEREXAMPLE
	elif report.pruned:
		report.verdict = Verdict.BOUNDED_PASS
	logger.info("audit %s of %s: %s (%s frames, %s pruned)", prop.value, f, report.verdict.value, report.checked, report.pruned)
	return report


# ──────────────────────────────────────────
# Replay
# ──────────────────────────────────────────
def _refuted(f: Formula, frame: Frame, witness: Mapping) -> bool:
	return Countermodel.from_dict(frame, witness["countermodel"]).refutes(frame, f)


def _valid(f: Formula, frame: Frame) -> bool:
	return find_countermodel(frame, f) is None


def _replay_gen_subframe(f: Formula, witness: Mapping) -> bool:
	frame = Frame.from_dict(witness["frame"])
	sub = generated_subframe(frame, witness["seed"])
	return sub == Frame.from_dict(witness["subframe"]) and _valid(f, frame) and _refuted(f, sub, witness)


def _replay_disjoint_union(f: Formula, witness: Mapping) -> bool:
	parts = [Frame.from_dict(data) for data in witness["frames"]]
	union = disjoint_union(parts)
	return union == Frame.from_dict(witness["union"]) and all(_valid(f, part) for part in parts) and _refuted(f, union, witness)


def _replay_bounded_morphic_image(f: Formula, witness: Mapping) -> bool:
	frame = Frame.from_dict(witness["frame"])
	image = Frame.from_dict(witness["image"])
	bm = BoundedMorphism.from_names(frame, image, witness["morphism"]["map"])
	return bm.is_surjective and check_bounded_morphism(bm) and _valid(f, frame) and _refuted(f, image, witness)


def _replay_fin_gen(f: Formula, witness: Mapping) -> bool:
	frame = Frame.from_dict(witness["frame"])
	subframes = finitely_generated_subframes(frame, int(witness["max_seed"]))
	return all(_valid(f, sub) for sub in subframes) and _refuted(f, frame, witness)


def _replay_ultrafilter(f: Formula, witness: Mapping) -> bool:
	frame = Frame.from_dict(witness["frame"])
	return _valid(f, ultrafilter_extension(frame).frame) and _refuted(f, frame, witness)


_REPLAYERS = {
	AuditProperty.GEN_SUBFRAME_CLOSED: _replay_gen_subframe,
	AuditProperty.DISJOINT_UNION_CLOSED: _replay_disjoint_union,
	AuditProperty.BOUNDED_MORPHIC_IMAGE_CLOSED: _replay_bounded_morphic_image,
	AuditProperty.REFLECTS_FIN_GEN_SUBFRAMES: _replay_fin_gen,
	AuditProperty.REFLECTS_ULTRAFILTER_EXT: _replay_ultrafilter,
}


# ──────────────────────────────────────────
# Hierarchy
# ──────────────────────────────────────────
SINGLETON_DOMAIN = "~p | [u] p"
NONEMPTY_RELATION = "<u><>(p|~p)"


def hierarchy_witnesses(u: FrameUniverse) -> dict:
	"""
	Two strictness witnesses: an ML(□̄⁺) formula whose class is not closed
	under disjoint unions (so not ML-definable), and an ML(□̄) formula whose
	class is not closed under generated subframes (so not ML(□̄⁺)-definable).
	"""
	return {
		"positive_ubox_not_ml": audit(AuditProperty.DISJOINT_UNION_CLOSED, parse(SINGLETON_DOMAIN), u),
		"ubox_not_positive_ubox": audit(AuditProperty.GEN_SUBFRAME_CLOSED, parse(NONEMPTY_RELATION), u),
	}
