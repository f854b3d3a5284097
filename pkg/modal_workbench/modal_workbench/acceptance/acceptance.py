# Copyright (c) 2026, modal_workbench contributors
# For license information, please see license.txt
"""
The acceptance suite run by `modal-workbench suite`. Every criterion is an
exhaustive check over a small universe. Both levels use the same formula
counts; "quick" enumerates frames of at most two points and "full" frames of
at most three (four for the ultrafilter criterion).

The properties checked on models are invariant under renaming points, so
model checks take one frame per isomorphism class. The frame class and
ultrafilter criteria that count labelled frames enumerate all of them.
"""

import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator

from modal_workbench.modal_workbench.corpus.corpus import (
	BRIDGE_PAIRS,
	REWRITE_PAIRS,
	GenConfig,
	curated_formulas,
	generate,
	generate_closed,
	generate_clauses,
)
from modal_workbench.modal_workbench.definability.audit import AuditProperty, audit, hierarchy_witnesses
from modal_workbench.modal_workbench.definability.definability import (
	EquivalenceMode,
	FrameUniverse,
	frame_class,
	frame_valid,
	oracle_equiv,
	valuations,
)
from modal_workbench.modal_workbench.exceptions import InputError
from modal_workbench.modal_workbench.formula.formula import Box, Conj, Dia, Disj, Fragment, UBox, propositions
from modal_workbench.modal_workbench.frameops.frameops import distinct_up_to_isomorphism, is_isomorphic, ultrafilter_extension
from modal_workbench.modal_workbench.kripke.kripke import Model, extension, model_valid_kripke
from modal_workbench.modal_workbench.team.team import TeamEvaluator, check_flatness, model_valid_team
from modal_workbench.modal_workbench.transform.normal_forms import to_box_form, to_closed_clauses
from modal_workbench.modal_workbench.transform.translations import (
	clause_to_idis,
	dep_to_idis,
	emdl_to_mdl,
	idis_to_clause,
)
from modal_workbench.modal_workbench.utils import get_logger, subsets

__all__ = ["LEVELS", "CriterionResult", "CRITERIA", "run_criterion", "run_suite"]

logger = get_logger("acceptance")

LEVELS = ("quick", "full")

# criterion -> level -> (formula count, max points)
SCALES = {
	3: {"quick": (200, 2), "full": (200, 3)},
	4: {"quick": (100, 2), "full": (100, 3)},
	5: {"quick": (200, 2), "full": (200, 3)},
	6: {"quick": (200, 2), "full": (200, 3)},
	7: {"quick": (200, 2), "full": (200, 3)},
	8: {"quick": (100, 2), "full": (100, 3)},
	9: {"quick": (100, 2), "full": (100, 3)},
	10: {"quick": (0, 3), "full": (0, 4)},
	11: {"quick": (100, 2), "full": (100, 3)},
}


@dataclass
class CriterionResult:
	number: int
	title: str
	passed: bool
	detail: str
	elapsed_ms: int = 0
	seed: int | None = None

	def to_dict(self) -> dict:
		return {
			"number": self.number,
			"title": self.title,
			"passed": self.passed,
			"detail": self.detail,
			"elapsed_ms": self.elapsed_ms,
			"seed": self.seed,
		}


@lru_cache(maxsize=None)
def _frames(max_points: int) -> tuple:
	""" One frame per isomorphism class, up to `max_points` points. """
	frames = tuple(distinct_up_to_isomorphism(FrameUniverse(max_points)))
	logger.debug("%s frames up to isomorphism on <= %s points", len(frames), max_points)
	return frames


def _models(max_points: int, props) -> Iterator[Model]:
	for frame in _frames(max_points):
		for valuation in valuations(frame, props):
			yield Model(frame, valuation)


def _symbols(max_props: int = 2) -> list:
	return [f"p{i}" for i in range(1, max_props + 1)]


def _same_frame_class(f, g, max_points: int) -> bool:
	return all(frame_valid(frame, f) == frame_valid(frame, g) for frame in _frames(max_points))


class _Failures:
	""" Counts failures and keeps the first one for the report. """

	def __init__(self) -> None:
		self.count = 0
		self.first = None

	def add(self, description: str) -> None:
		self.count += 1
		if self.first is None:
			self.first = description
			logger.warning("first counterexample: %s", description)

	def summary(self, checked: str) -> str:
		if not self.count:
			return f"{checked}, 0 counterexamples"
		return f"{checked}, {self.count} counterexamples; first: {self.first}"


# ──────────────────────────────────────────
# Criteria
# ──────────────────────────────────────────
def _class_reproduction(level: str, seed: int) -> tuple:
	formulas = curated_formulas()
	u = FrameUniverse(3)
	singleton = frame_class(formulas["singleton_domain"], u)
	nonempty = frame_class(formulas["nonempty_relation"], u)
	singleton_ok = [frame.size for frame in singleton] == [1, 1]
	nonempty_ok = nonempty == [frame for frame in u if frame.rel]
	return singleton_ok and nonempty_ok, f"singleton_domain: {len(singleton)} frames, nonempty_relation: {len(nonempty)} frames"


def _closure_counterexamples(level: str, seed: int) -> tuple:
	witnesses = hierarchy_witnesses(FrameUniverse(2))
	reproduced = all(report.witness is not None and report.replay() for report in witnesses.values())
	return reproduced, ", ".join(f"{name}: {report.verdict.value}" for name, report in witnesses.items())


def _box_form(level: str, seed: int) -> tuple:
	count, points = SCALES[3][level]
	cfg = GenConfig(Fragment.ML_UBOX_POS, max_depth=3, max_props=2, seed=seed, count=count)
	formulas = [(f, to_box_form(f), to_closed_clauses(f).as_formulas()) for f in generate(cfg)]
	failures = _Failures()
	for model in _models(points, _symbols()):
		for f, box, clauses in formulas:
			if extension(model, f) != extension(model, box):
				failures.add(f"{f} vs box form {box}")
			if model_valid_kripke(model, f) != all(model_valid_kripke(model, c) for c in clauses):
				failures.add(f"{f} vs closed clauses")
	return not failures.count, failures.summary(f"{count} formulas on models <= {points} points")


def _rewrite_pairs(level: str, seed: int) -> tuple:
	count, points = SCALES[4][level]
	curated = curated_formulas()
	pairs = [(curated[lhs], curated[rhs]) for lhs, rhs in REWRITE_PAIRS]
	ml = generate(GenConfig(Fragment.ML, max_depth=1, max_props=2, seed=seed, count=count, max_size=4))
	closed = generate_closed(GenConfig(Fragment.ML_UBOX_POS, max_depth=1, max_props=2, seed=seed, count=count, max_size=4))
	for phi, psi in zip(ml, closed):
		pairs.append((Box(Disj(phi, psi)), Disj(Box(phi), psi)))
		pairs.append((Dia(Conj(phi, psi)), Conj(Dia(phi), psi)))
		pairs.append((UBox(Disj(phi, psi)), Disj(UBox(phi), psi)))
	failures = _Failures()
	for lhs, rhs in pairs:
		props = propositions(lhs) | propositions(rhs)
		if any(extension(model, lhs) != extension(model, rhs) for model in _models(points, props)):
			failures.add(f"{lhs} vs {rhs}")
	return not failures.count, failures.summary(f"{len(pairs)} pairs on frames <= {points} points")


def _flatness_and_downward_closure(level: str, seed: int) -> tuple:
	count, points = SCALES[5][level]
	ml = generate(GenConfig(Fragment.ML, max_depth=2, max_props=2, seed=seed, count=count))
	team = generate(GenConfig(Fragment.ML_IDIS, max_depth=2, max_props=2, seed=seed, count=count // 2))
	team += generate(GenConfig(Fragment.EMDL, max_depth=2, max_props=2, seed=seed, count=count - count // 2, max_deps=1))
	failures = _Failures()
	for model in _models(points, _symbols()):
		full = model.frame.full
		for f in ml:
			for t in subsets(full):
				if not check_flatness(model, t, f):
					failures.add(f"flatness of {f}")
		for f in team:
			evaluator = TeamEvaluator(model)
			for t in subsets(full):
				if evaluator.holds(t, f) and not all(evaluator.holds(s, f) for s in subsets(t)):
					failures.add(f"downward closure of {f}")
		for f in ml + team:
			if not TeamEvaluator(model).holds(0, f):
				failures.add(f"empty team fails {f}")
	return not failures.count, failures.summary(f"{len(ml)} ML and {len(team)} team formulas on models <= {points} points")


def _search_reduction(level: str, seed: int) -> tuple:
	count, points = SCALES[6][level]
	formulas = generate(GenConfig(Fragment.ML_IDIS, max_depth=2, max_props=2, seed=seed, count=count // 2))
	formulas += generate(GenConfig(Fragment.EMDL, max_depth=2, max_props=2, seed=seed, count=count - count // 2, max_deps=1))
	failures = _Failures()
	for model in _models(points, _symbols()):
		reduced, full = TeamEvaluator(model, "reduced"), TeamEvaluator(model, "full")
		for f in formulas:
			for t in subsets(model.frame.full):
				if reduced.holds(t, f) != full.holds(t, f):
					failures.add(f"{f} on team {model.frame.team_names(t)}")
	return not failures.count, failures.summary(f"{len(formulas)} formulas on models <= {points} points")


def _idis_bridges(level: str, seed: int) -> tuple:
	count, points = SCALES[7][level]
	generated = generate(GenConfig(Fragment.ML_IDIS, max_depth=2, max_props=2, seed=seed, count=count, max_size=6))
	curated = curated_formulas()
	failures = _Failures()

	for name, clause_name in BRIDGE_PAIRS:
		lhs, rhs = curated[name], curated[clause_name]
		if not oracle_equiv(lhs, rhs, FrameUniverse(points), EquivalenceMode.MODEL_VALIDITY).passed:
			failures.add(f"{lhs} vs {rhs}")

	cases = []
	for f in generated:
		clause = idis_to_clause(f)
		cases.append((f, clause.as_formula(), clause_to_idis(clause)))
	for model in _models(points, _symbols()):
		for f, clause, back in cases:
			kripke_side = model_valid_kripke(model, clause)
			if model_valid_team(model, f) != kripke_side:
				failures.add(f"{f} vs clause {clause}")
			if model_valid_team(model, back) != kripke_side:
				failures.add(f"clause {clause} vs {back}")

	for f, clause, _ in cases:
		if not _same_frame_class(f, clause, points):
			failures.add(f"frame class of {f} vs {clause}")
	return not failures.count, failures.summary(f"{len(cases) + len(BRIDGE_PAIRS)} formulas on models <= {points} points")


def _emdl_to_mdl(level: str, seed: int) -> tuple:
	count, points = SCALES[8][level]
	cfg = GenConfig(Fragment.EMDL, max_depth=2, max_props=2, seed=seed, count=count, max_size=5, max_deps=1, max_dep_args=1)
	failures = _Failures()
	model_level_differences = 0
	for f in generate(cfg):
		translated = emdl_to_mdl(f)
		if not _same_frame_class(f, translated, points):
			failures.add(f"{f} vs {translated}")
		if propositions(translated) != propositions(f):
			# model-level agreement is not claimed; only record it
			if not oracle_equiv(f, translated, FrameUniverse(2), EquivalenceMode.MODEL_VALIDITY).passed:
				model_level_differences += 1
	logger.info("emdl_to_mdl: %s formulas differ on some model of <= 2 points (expected)", model_level_differences)
	detail = failures.summary(f"{count} formulas on frames <= {points} points")
	return not failures.count, f"{detail}; {model_level_differences} model-level differences logged"


def _dep_to_idis(level: str, seed: int) -> tuple:
	count, points = SCALES[9][level]
	formulas = generate(GenConfig(Fragment.MDL, max_depth=2, max_props=2, seed=seed, count=count // 2, max_size=6, max_deps=2))
	formulas += generate(GenConfig(Fragment.EMDL, max_depth=2, max_props=2, seed=seed, count=count - count // 2, max_size=6, max_deps=1))
	failures = _Failures()
	for f in formulas:
		translated = dep_to_idis(f)
		for model in _models(points, propositions(f) | propositions(translated)):
			left, right = TeamEvaluator(model), TeamEvaluator(model)
			if any(left.holds(t, f) != right.holds(t, translated) for t in subsets(model.frame.full)):
				failures.add(f"{f} vs {translated}")
				break
	return not failures.count, failures.summary(f"{len(formulas)} formulas on models <= {points} points")


def _ultrafilter_extensions(level: str, seed: int) -> tuple:
	_, points = SCALES[10][level]
	checked = 0
	failures = _Failures()
	for frame in FrameUniverse(points):
		checked += 1
		try:
			extension_frame = ultrafilter_extension(frame).frame
		except Exception as err:
			failures.add(f"{frame}: {err}")
			continue
		if not is_isomorphic(frame, extension_frame):
			failures.add(f"{frame}")
	return not failures.count, failures.summary(f"{checked} frames <= {points} points")


def _clause_subframes(level: str, seed: int) -> tuple:
	count, points = SCALES[11][level]
	u = FrameUniverse(points)
	failures = _Failures()
	for clause in generate_clauses(GenConfig(Fragment.ML, max_depth=2, max_props=2, seed=seed, count=count, max_size=4), max_disjuncts=2):
		f = clause.as_formula()
		width = len(clause.clauses[0])
		if not audit(AuditProperty.GEN_SUBFRAME_CLOSED, f, u).passed:
			failures.add(f"{f} not closed under generated subframes")
		if not audit(AuditProperty.REFLECTS_FIN_GEN_SUBFRAMES, f, u, max_seed=width).passed:
			failures.add(f"{f} does not reflect subframes generated by {width} points")
	return not failures.count, failures.summary(f"{count} clauses on frames <= {points} points")


def _hierarchy(level: str, seed: int) -> tuple:
	witnesses = hierarchy_witnesses(FrameUniverse(3))
	strict = all(report.witness is not None for report in witnesses.values())
	return strict, ", ".join(f"{name}: {report.verdict.value}" for name, report in witnesses.items())


CRITERIA: dict[int, tuple[str, Callable]] = {
	1: ("frame classes of the two curated class formulas", _class_reproduction),
	2: ("closure counterexamples replay", _closure_counterexamples),
	3: ("□̄-form and closed clause normal forms", _box_form),
	4: ("closed-part rewrite equivalences", _rewrite_pairs),
	5: ("flatness, downward closure, empty team", _flatness_and_downward_closure),
	6: ("reduced ◇/∨ search agrees with full search", _search_reduction),
	7: ("⊘ and closed clause bridges", _idis_bridges),
	8: ("EMDL to MDL keeps frame validity", _emdl_to_mdl),
	9: ("dependence atom elimination", _dep_to_idis),
	10: ("finite ultrafilter extensions are isomorphic", _ultrafilter_extensions),
	11: ("closed clauses and generated subframes", _clause_subframes),
	12: ("hierarchy witnesses", _hierarchy),
}


def run_criterion(number: int, level: str = "quick", seed: int = 2016) -> CriterionResult:
	if level not in LEVELS:
		raise InputError(f"unknown suite level {level!r}; use one of {LEVELS}")
	if number not in CRITERIA:
		raise InputError(f"unknown criterion {number}")
	title, check = CRITERIA[number]
	started = time.perf_counter()
	passed, detail = check(level, seed)
	elapsed = int((time.perf_counter() - started) * 1000)
	logger.info("criterion %s (%s): %s in %s ms", number, title, "pass" if passed else "FAIL", elapsed)
	return CriterionResult(number, title, passed, detail, elapsed, seed)


def run_suite(level: str = "quick", seed: int = 2016, only: list | None = None) -> list:
	numbers = only or sorted(CRITERIA)
	return [run_criterion(number, level, seed) for number in numbers]
