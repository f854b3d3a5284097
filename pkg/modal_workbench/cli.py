# Copyright (c) 2026, modal_workbench contributors
# For license information, please see license.txt
"""
Command-line front end. Exit codes: 0 true / pass, 1 false / counterexample,
2 usage or input error.
"""

import json
import time
from functools import wraps

import click

from modal_workbench import __version__
from modal_workbench.config import get_settings, update_settings
from modal_workbench.modal_workbench.acceptance.acceptance import LEVELS, run_suite
from modal_workbench.modal_workbench.corpus.corpus import GenConfig, export_batch, generate, generate_closed
from modal_workbench.modal_workbench.definability.audit import AuditProperty, AuditReport, audit
from modal_workbench.modal_workbench.definability.definability import (
	EquivalenceMode,
	EquivalenceReport,
	FrameUniverse,
	find_countermodel,
	frame_class,
	oracle_equiv,
)
from modal_workbench.modal_workbench.exceptions import InputError, ReplayError, WorkbenchError
from modal_workbench.modal_workbench.formula.formula import Fragment, classify, modal_depth, propositions
from modal_workbench.modal_workbench.formula.parser import parse
from modal_workbench.modal_workbench.frameops.frameops import (
	disjoint_union,
	distinct_up_to_isomorphism,
	generated_subframe,
	ultrafilter_extension,
)
from modal_workbench.modal_workbench.kripke.kripke import eval_pointed, load_frame, load_model, read_json
from modal_workbench.modal_workbench.team.team import eval_team
from modal_workbench.modal_workbench.transform.normal_forms import to_box_form, to_closed_clauses
from modal_workbench.modal_workbench.transform.translations import (
	dep_to_idis,
	emdl_to_mdl,
	idis_to_clause,
	to_idis_normal_form,
)
from modal_workbench.modal_workbench.utils import apply_log_level, get_logger

logger = get_logger("cli")

EXIT_TRUE, EXIT_FALSE, EXIT_ERROR = 0, 1, 2


class _Run:
	""" Collects what a command reports, then writes the --json file. """

	def __init__(self, command: str, json_path: str | None, **inputs) -> None:
		self.command = command
		self.json_path = json_path
		self.inputs = {key: value for key, value in inputs.items() if value is not None}
		self.started = time.perf_counter()

	def finish(self, verdict, witness: dict | None = None, seed: int | None = None, **extra) -> None:
		if not self.json_path:
			return
		data = {"command": self.command, "inputs": self.inputs, "verdict": verdict}
		if witness is not None:
			data["witness"] = witness
		data["timing_ms"] = int((time.perf_counter() - self.started) * 1000)
		if seed is not None:
			data["seed"] = seed
		data.update(extra)
		try:
			with open(self.json_path, "w", encoding="utf-8") as handle:
				json.dump(data, handle, indent=1, ensure_ascii=False)
				handle.write("\n")
		except OSError as err:
			raise InputError(f"cannot write {self.json_path}: {err.strerror}")


def _command(func):
	"""
	Maps WorkbenchError to exit code 2 with a one-line diagnostic. Any other
	exception is an internal failure: it is logged with its traceback and
	also exits with 2, never with the counterexample code.
	"""

	@wraps(func)
	def wrapper(*args, **kwargs):
		try:
			code = func(*args, **kwargs)
		except WorkbenchError as err:
			click.secho(f"error: {err}", fg="red", err=True)
			raise SystemExit(EXIT_ERROR)
		except (click.ClickException, click.exceptions.Exit, click.Abort):
			raise
		except Exception as err:
			logger.exception("%s failed", func.__name__)
			click.secho(f"error: internal failure ({type(err).__name__}: {err})", fg="red", err=True)
			raise SystemExit(EXIT_ERROR)
		raise SystemExit(code or EXIT_TRUE)

	return wrapper


def _formula_text(formula: str | None, file: str | None, label: str = "formula") -> str:
	if formula is not None and file is not None:
		raise InputError(f"give the {label} inline or from a file, not both")
	if file is not None:
		try:
			with open(file, encoding="utf-8") as handle:
				return handle.read().strip()
		except OSError as err:
			raise InputError(f"cannot read {file}: {err.strerror}")
	if formula is None:
		raise InputError(f"a {label} is required (--formula or --file)")
	return formula


def _formula(formula: str | None, file: str | None, label: str = "formula"):
	return parse(_formula_text(formula, file, label), allow_reserved=True)


def _names(text: str) -> list:
	return [name.strip() for name in text.split(",") if name.strip()]


def _verdict(value: bool) -> int:
	click.echo("true" if value else "false")
	return EXIT_TRUE if value else EXIT_FALSE


def _echo_witness(witness: dict) -> None:
	click.echo("replay block:")
	click.echo(json.dumps(witness, indent=1, ensure_ascii=False))


formula_options = [
	click.option("--formula", "-f", "formula", help="Formula text."),
	click.option("--file", "file", type=click.Path(dir_okay=False), help="File holding the formula."),
]
json_option = click.option("--json", "json_path", type=click.Path(dir_okay=False), help="Write a machine-readable report.")
max_points_option = click.option("--max-points", type=click.IntRange(min=1), default=None, help="Largest frame size enumerated.")


def with_formula(func):
	for option in reversed(formula_options):
		func = option(func)
	return func


def _universe(max_points: int | None) -> FrameUniverse:
	return FrameUniverse(max_points or get_settings().default_max_points)


# ──────────────────────────────────────────
# Commands
# ──────────────────────────────────────────
@click.group()
@click.version_option(__version__, prog_name="modal-workbench")
@click.option("--team-search", type=click.Choice(["reduced", "full"]), help="◇/∨ witness search in team semantics.")
@click.option("--validity-check", type=click.Choice(["downward_closed", "exhaustive"]), help="Teams checked for team validity.")
@click.option("--verbose", "-v", count=True, help="-v logs progress, -vv logs detail.")
def cli(team_search, validity_check, verbose):
	""" Modal logic workbench: evaluation, normal forms and brute-force definability. """
	changes = {}
	if team_search:
		changes["team_search"] = team_search
	if validity_check:
		changes["validity_check"] = validity_check
	if verbose:
		changes["log_level"] = "DEBUG" if verbose > 1 else "INFO"
	if changes:
		try:
			update_settings(**changes)
		except WorkbenchError as err:
			raise click.UsageError(str(err))
		apply_log_level()


@cli.command("parse")
@with_formula
@json_option
@_command
def parse_command(formula, file, json_path):
	""" Parse a formula and print its canonical form and fragment. """
	run = _Run("parse", json_path, formula=formula, file=file)
	f = _formula(formula, file)
	fragment = classify(f)
	click.echo(str(f))
	click.echo(f"fragment: {fragment.value}")
	click.echo(f"modal depth: {modal_depth(f)}")
	click.echo(f"propositions: {', '.join(sorted(propositions(f))) or '-'}")
	run.finish(str(f), fragment=fragment.value)


@cli.command("eval")
@with_formula
@click.option("--model", "model_path", required=True, type=click.Path(dir_okay=False), help="Model JSON file.")
@click.option("--world", "-w", help="Point for Kripke evaluation.")
@click.option("--team", "-t", help='Comma-separated team for team evaluation, e.g. "1,2".')
@json_option
@_command
def eval_command(formula, file, model_path, world, team, json_path):
	""" Evaluate a formula at a point or on a team of a model. """
	if (world is None) == (team is None):
		raise InputError("give exactly one of --world or --team")
	run = _Run("eval", json_path, formula=formula, file=file, model=model_path, world=world, team=team)
	model = load_model(model_path)
	f = _formula(formula, file)
	if world is not None:
		value = eval_pointed(model, world, f)
	else:
		value = eval_team(model, _names(team), f)
	run.finish(value)
	return _verdict(value)


@cli.command("nf")
@with_formula
@click.option("--form", type=click.Choice(["box", "clauses", "idis"]), default="box", show_default=True)
@click.option("--polarity", type=click.Choice(["disjunctive", "conjunctive"]), default="disjunctive", show_default=True)
@json_option
@_command
def nf_command(formula, file, form, polarity, json_path):
	""" Print a normal form: □̄-form, closed clauses, or ⊘ of ML formulas. """
	run = _Run("nf", json_path, formula=formula, file=file, form=form)
	f = _formula(formula, file)
	if form == "clauses":
		# one JSON array per closed clause, holding the bodies of its [u] disjuncts
		result = to_closed_clauses(f).to_strings()
		click.echo(json.dumps(result, ensure_ascii=False))
	else:
		if form == "box":
			result = [str(to_box_form(f, polarity))]
		else:
			result = [str(leaf) for leaf in to_idis_normal_form(f)]
		for line in result:
			click.echo(line)
	run.finish(result)


@cli.command("translate")
@with_formula
@click.option("--to", "target", type=click.Choice(["mdl", "idis", "clauses"]), required=True)
@json_option
@_command
def translate_command(formula, file, target, json_path):
	""" Translate EMDL to MDL, MDL/EMDL to ML(⊘), or ML(⊘) to a closed clause. """
	run = _Run("translate", json_path, formula=formula, file=file, to=target)
	f = _formula(formula, file)
	if target == "clauses":
		result = idis_to_clause(f).to_strings()
		click.echo(json.dumps(result, ensure_ascii=False))
	else:
		result = str(emdl_to_mdl(f) if target == "mdl" else dep_to_idis(f))
		click.echo(result)
	run.finish(result)


@cli.command("frame-valid")
@with_formula
@click.option("--frame", "frame_path", required=True, type=click.Path(dir_okay=False), help="Frame JSON file.")
@json_option
@_command
def frame_valid_command(formula, file, frame_path, json_path):
	""" Decide frame validity; prints a countermodel when it fails. """
	run = _Run("frame-valid", json_path, formula=formula, file=file, frame=frame_path)
	frame = load_frame(frame_path)
	f = _formula(formula, file)
	countermodel = find_countermodel(frame, f)
	witness = None
	if countermodel is not None:
		witness = {"frame": frame.to_dict(), **countermodel.to_dict(frame)}
	code = _verdict(countermodel is None)
	if witness:
		_echo_witness(witness)
	run.finish(countermodel is None, witness)
	return code


@cli.command("frame-class")
@with_formula
@max_points_option
@click.option("--distinct", is_flag=True, help="One frame per isomorphism class.")
@json_option
@_command
def frame_class_command(formula, file, max_points, distinct, json_path):
	""" List the frames up to --max-points that validate a formula. """
	u = _universe(max_points)
	run = _Run("frame-class", json_path, formula=formula, file=file, max_points=u.max_points, distinct=distinct)
	frames = frame_class(_formula(formula, file), u)
	if distinct:
		frames = distinct_up_to_isomorphism(frames)
	for frame in frames:
		click.echo(str(frame))
	click.echo(f"{len(frames)} of {len(u)} frames")
	run.finish(len(frames), frames=[frame.to_dict() for frame in frames])


def _replay(path: str, report_cls) -> int:
	data = read_json(path)
	report = report_cls.from_dict(data.get("report", data))
	if report.witness is None:
		raise ReplayError(f"{path} records no counterexample to replay")
	if not report.replay():
		raise ReplayError(f"the counterexample recorded in {path} did not reproduce")
	click.echo("counterexample reproduced")
	return EXIT_FALSE


@cli.command("audit")
@with_formula
@click.option("--property", "prop", help="disjoint-union, gen-subframe, bounded-morphic-image, reflects-fin-gen or reflects-ue.")
@max_points_option
@click.option("--max-seed", type=click.IntRange(min=1), help="Largest seed of the reflected generated subframes.")
@click.option("--replay", "replay_path", type=click.Path(dir_okay=False), help="Re-check a counterexample from a --json report.")
@json_option
@_command
def audit_command(formula, file, prop, max_points, max_seed, replay_path, json_path):
	""" Audit a closure or reflection condition of a formula's frame class. """
	if replay_path:
		return _replay(replay_path, AuditReport)
	if not prop:
		raise InputError("--property is required")
	u = _universe(max_points)
	prop = AuditProperty.lookup(prop)
	run = _Run("audit", json_path, formula=formula, file=file, property=prop.value, max_points=u.max_points, max_seed=max_seed)
	report = audit(prop, _formula(formula, file), u, max_seed=max_seed)
	click.echo(f"{prop.value}: {report.verdict.value} ({report.checked} frames, {report.pruned} pruned)")
	if report.witness:
		_echo_witness(report.witness)
	run.finish(report.verdict.value, report.witness, report=report.to_dict())
	return EXIT_TRUE if report.passed else EXIT_FALSE


@cli.command("equiv")
@with_formula
@click.option("--other", help="Second formula text.")
@click.option("--other-file", type=click.Path(dir_okay=False), help="File holding the second formula.")
@click.option("--mode", type=click.Choice([mode.value for mode in EquivalenceMode]), default=EquivalenceMode.KRIPKE_POINT.value, show_default=True)
@max_points_option
@click.option("--replay", "replay_path", type=click.Path(dir_okay=False), help="Re-check a counterexample from a --json report.")
@json_option
@_command
def equiv_command(formula, file, other, other_file, mode, max_points, replay_path, json_path):
	""" Compare two formulas exhaustively over every frame up to --max-points. """
	if replay_path:
		return _replay(replay_path, EquivalenceReport)
	u = _universe(max_points)
	run = _Run("equiv", json_path, formula=formula, file=file, other=other, other_file=other_file, mode=mode, max_points=u.max_points)
	f = _formula(formula, file)
	g = _formula(other, other_file, "second formula")
	report = oracle_equiv(f, g, u, mode)
	click.echo(f"{mode}: {report.verdict} ({report.checked} checks)")
	if report.witness:
		_echo_witness(report.witness)
	run.finish(report.verdict, report.witness, report=report.to_dict())
	return EXIT_TRUE if report.passed else EXIT_FALSE


@cli.command("ue")
@click.option("--frame", "frame_path", required=True, type=click.Path(dir_okay=False), help="Frame JSON file.")
@json_option
@_command
def ue_command(frame_path, json_path):
	""" Print the ultrafilter extension of a finite frame and its principal map. """
	run = _Run("ue", json_path, frame=frame_path)
	result = ultrafilter_extension(load_frame(frame_path))
	click.echo(str(result.frame))
	for point, image in result.principal.items():
		click.echo(f"{point} -> {image}")
	run.finish(result.frame.to_dict(), principal=result.principal)


@cli.command("union")
@click.option("--frame", "frame_paths", multiple=True, required=True, type=click.Path(dir_okay=False), help="Frame JSON file; repeat for each frame.")
@click.option("--out", type=click.Path(dir_okay=False), help="Write the union as frame JSON.")
@json_option
@_command
def union_command(frame_paths, out, json_path):
	""" Disjoint union of frames; points of the i-th frame become "i.name". """
	run = _Run("union", json_path, frames=list(frame_paths))
	union = disjoint_union([load_frame(path) for path in frame_paths])
	click.echo(str(union))
	if out:
		with open(out, "w", encoding="utf-8") as handle:
			json.dump(union.to_dict(), handle, indent=1)
	run.finish(union.to_dict())


@cli.command("gensub")
@click.option("--frame", "frame_path", required=True, type=click.Path(dir_okay=False), help="Frame JSON file.")
@click.option("--points", required=True, help='Comma-separated generating points, e.g. "1,3".')
@json_option
@_command
def gensub_command(frame_path, points, json_path):
	""" Subframe generated by a set of points. """
	run = _Run("gensub", json_path, frame=frame_path, points=points)
	sub = generated_subframe(load_frame(frame_path), _names(points))
	click.echo(str(sub))
	run.finish(sub.to_dict())


@cli.command("generate")
@click.option("--fragment", type=click.Choice([f.value for f in Fragment if f != Fragment.MIXED]), default=Fragment.ML.value, show_default=True)
@click.option("--count", type=click.IntRange(min=0), default=20, show_default=True)
@click.option("--depth", type=click.IntRange(min=0), default=2, show_default=True)
@click.option("--props", type=click.IntRange(min=1), default=2, show_default=True)
@click.option("--seed", type=int, help="Defaults to the configured seed.")
@click.option("--closed", is_flag=True, help="Closed formulas: ∧/∨ combinations of □̄ψ.")
@click.option("--out", type=click.Path(dir_okay=False), help="Write the batch to a file.")
@json_option
@_command
def generate_command(fragment, count, depth, props, seed, closed, out, json_path):
	""" Seeded formula batch, one formula per line. """
	seed = get_settings().default_seed if seed is None else seed
	run = _Run("generate", json_path, fragment=fragment, count=count, depth=depth, props=props, closed=closed)
	cfg = GenConfig(Fragment(fragment), max_depth=depth, max_props=props, seed=seed, count=count)
	formulas = generate_closed(cfg) if closed else generate(cfg)
	batch = export_batch(formulas)
	if out:
		with open(out, "w", encoding="utf-8") as handle:
			handle.write(batch)
	else:
		click.echo(batch, nl=False)
	click.echo(f"seed: {seed}", err=True)
	run.finish(len(formulas), seed=seed, formulas=[str(f) for f in formulas])


@cli.command("suite")
@click.option("--level", type=click.Choice(LEVELS), default="quick", show_default=True)
@click.option("--seed", type=int, help="Defaults to the configured seed.")
@click.option("--criterion", "-c", "criteria", type=int, multiple=True, help="Run only these criteria.")
@json_option
@_command
def suite_command(level, seed, criteria, json_path):
	""" Run the acceptance criteria; exit 0 iff all pass. """
	seed = get_settings().default_seed if seed is None else seed
	run = _Run("suite", json_path, level=level, criteria=list(criteria) or None)
	click.echo(f"seed: {seed}")
	results = run_suite(level, seed, list(criteria) or None)
	for result in results:
		status = "PASS" if result.passed else "FAIL"
		click.secho(f"[{status}] {result.number:>2}. {result.title} ({result.elapsed_ms} ms)", fg="green" if result.passed else "red")
		click.echo(f"      {result.detail}")
	passed = all(result.passed for result in results)
	run.finish("pass" if passed else "fail", seed=seed, results=[result.to_dict() for result in results])
	return EXIT_TRUE if passed else EXIT_FALSE


def main() -> None:
	cli(prog_name="modal-workbench")
