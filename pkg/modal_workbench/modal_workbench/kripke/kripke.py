# Copyright (c) 2026, modal_workbench contributors
# For license information, please see license.txt

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from modal_workbench.modal_workbench.exceptions import FragmentError, InputError
from modal_workbench.modal_workbench.formula.formula import (
	KRIPKE_FRAGMENTS,
	Atom,
	Box,
	Conj,
	Dia,
	Disj,
	Formula,
	NegAtom,
	UBox,
	UDia,
	require_fragment,
)
from modal_workbench.modal_workbench.utils import bits, full_mask

__all__ = [
	"Frame",
	"Model",
	"extension",
	"eval_pointed",
	"model_valid_kripke",
	"read_json",
	"load_frame",
	"load_model",
	"dump_json",
]


@dataclass(frozen=True)
class Frame:
	"""
	Finite Kripke frame. Points are addressed by their position in `points`;
	`succ[i]` is the bitset of R-successors of point i.
	"""

	points: tuple
	succ: tuple

	def __post_init__(self):
		object.__setattr__(self, "points", tuple(str(p) for p in self.points))
		object.__setattr__(self, "succ", tuple(self.succ))
		if not self.points:
			raise InputError("a frame needs at least one point")
		if len(set(self.points)) != len(self.points):
			raise InputError(f"duplicate point names in {list(self.points)}")
		if len(self.succ) != len(self.points):
			raise InputError("successor table does not match the point list")
		limit = 1 << len(self.points)
		for mask in self.succ:
			if not 0 <= mask < limit:
				raise InputError(f"successor set {mask:b} mentions points outside the frame")

	@classmethod
	def from_edges(cls, points: Iterable, edges: Iterable) -> "Frame":
		points = tuple(str(p) for p in points)
		position = {name: i for i, name in enumerate(points)}
		succ = [0] * len(points)
		for edge in edges:
			try:
				source, target = edge
				succ[position[str(source)]] |= 1 << position[str(target)]
			except KeyError as err:
				raise InputError(f"edge {list(edge)} mentions unknown point {err.args[0]}")
			except (TypeError, ValueError):
				raise InputError(f"edge {edge!r} is not a pair of point names")
		return cls(points, tuple(succ))

	@property
	def size(self) -> int:
		return len(self.points)

	@cached_property
	def full(self) -> int:
		return full_mask(len(self.points))

	@cached_property
	def pred(self) -> tuple:
		pred = [0] * len(self.points)
		for i, mask in enumerate(self.succ):
			for j in bits(mask):
				pred[j] |= 1 << i
		return tuple(pred)

	@cached_property
	def rel(self) -> frozenset:
		return frozenset((i, j) for i, mask in enumerate(self.succ) for j in bits(mask))

	def edges(self) -> list:
		return [(self.points[i], self.points[j]) for i, j in sorted(self.rel)]

	def index(self, name) -> int:
		try:
			return self.points.index(str(name))
		except ValueError:
			raise InputError(f"unknown point {name!r}; points are {list(self.points)}")

	def team_of(self, names: Iterable) -> int:
		mask = 0
		for name in names:
			mask |= 1 << self.index(name)
		return mask

	def team_names(self, mask: int) -> list:
		return [self.points[i] for i in bits(mask)]

	def restrict(self, mask: int) -> "Frame":
		""" Subframe on the points of `mask`, keeping their order. """
		kept = list(bits(mask))
		if not kept:
			raise InputError("cannot restrict a frame to no points")
		renumber = {old: new for new, old in enumerate(kept)}
		succ = []
		for old in kept:
			new_mask = 0
			for j in bits(self.succ[old] & mask):
				new_mask |= 1 << renumber[j]
			succ.append(new_mask)
		return Frame(tuple(self.points[i] for i in kept), tuple(succ))

	def to_dict(self) -> dict:
		return {"points": list(self.points), "rel": [list(edge) for edge in self.edges()]}

	@classmethod
	def from_dict(cls, data: Mapping) -> "Frame":
		if not isinstance(data, Mapping) or "points" not in data:
			raise InputError("frame data needs a 'points' list")
		return cls.from_edges(data["points"], data.get("rel", []))

	def __str__(self) -> str:
		edges = ", ".join(f"({a},{b})" for a, b in self.edges())
		return f"({{{', '.join(self.points)}}}, {{{edges}}})"


@dataclass(frozen=True)
class Model:
	""" Frame plus valuation; propositions missing from `valuation` are empty. """

	frame: Frame
	valuation: Mapping = field(default_factory=dict)

	def __post_init__(self):
		valuation = dict(self.valuation)
		for prop, mask in valuation.items():
			if not 0 <= mask <= self.frame.full:
				raise InputError(f"valuation of {prop} mentions points outside the frame")
		object.__setattr__(self, "valuation", valuation)

	@classmethod
	def from_names(cls, frame: Frame, valuation: Mapping) -> "Model":
		return cls(frame, {str(prop): frame.team_of(names) for prop, names in valuation.items()})

	def value(self, prop: str) -> int:
		return self.valuation.get(prop, 0)

	def restrict(self, mask: int) -> "Model":
		frame = self.frame.restrict(mask)
		kept = list(bits(mask))
		valuation = {}
		for prop, value in self.valuation.items():
			new_value = 0
			for new, old in enumerate(kept):
				if value >> old & 1:
					new_value |= 1 << new
			valuation[prop] = new_value
		return Model(frame, valuation)

	def to_dict(self) -> dict:
		data = self.frame.to_dict()
		data["val"] = {prop: self.frame.team_names(mask) for prop, mask in sorted(self.valuation.items())}
		return data

	@classmethod
	def from_dict(cls, data: Mapping) -> "Model":
		frame = Frame.from_dict(data)
		valuation = data.get("val", {})
		if not isinstance(valuation, Mapping):
			raise InputError("'val' must map proposition symbols to lists of points")
		return cls.from_names(frame, valuation)


# ──────────────────────────────────────────
# Evaluation
# ──────────────────────────────────────────
def extension(m: Model, f: Formula) -> int:
	""" Bitset of the points of `m` where `f` holds. """
	return _Extension(m).of(f)


class _Extension:
	def __init__(self, m: Model) -> None:
		self.model = m
		self.frame = m.frame
		self.memo = {}

	def of(self, f: Formula) -> int:
		key = id(f)
		if key in self.memo:
			return self.memo[key][1]
		result = self._compute(f)
		# keep `f` alive so its id cannot be reused during this evaluation
		self.memo[key] = (f, result)
		return result

	def _compute(self, f: Formula) -> int:
		full = self.frame.full
		if isinstance(f, Atom):
			return self.model.value(f.name)
		if isinstance(f, NegAtom):
			return full & ~self.model.value(f.name)
		if isinstance(f, Conj):
			return self.of(f.left) & self.of(f.right)
		if isinstance(f, Disj):
			return self.of(f.left) | self.of(f.right)
		if isinstance(f, Dia):
			body = self.of(f.body)
			return sum(1 << i for i, mask in enumerate(self.frame.succ) if mask & body)
		if isinstance(f, Box):
			body = self.of(f.body)
			return sum(1 << i for i, mask in enumerate(self.frame.succ) if not mask & ~body)
		if isinstance(f, UBox):
			return full if self.of(f.body) == full else 0
		if isinstance(f, UDia):
			return full if self.of(f.body) else 0
		raise FragmentError(
			f"pointed semantics is not defined for {type(f).__name__}",
			constructor=type(f).__name__,
		)


def eval_pointed(m: Model, w, f: Formula) -> bool:
	require_fragment(f, KRIPKE_FRAGMENTS, "pointed evaluation")
	index = w if isinstance(w, int) else m.frame.index(w)
	if not 0 <= index < m.frame.size:
		raise InputError(f"point index {index} is out of range for a frame of {m.frame.size} points")
	return bool(extension(m, f) >> index & 1)


def model_valid_kripke(m: Model, f: Formula) -> bool:
	require_fragment(f, KRIPKE_FRAGMENTS, "Kripke model validity")
	return extension(m, f) == m.frame.full


# ──────────────────────────────────────────
# Files
# ──────────────────────────────────────────
def read_json(path) -> dict:
	try:
		with open(path, encoding="utf-8") as handle:
			return json.load(handle)
	except OSError as err:
		raise InputError(f"cannot read {path}: {err.strerror}")
	except json.JSONDecodeError as err:
		raise InputError(f"{path} is not valid JSON: {err.msg} (line {err.lineno})")


def load_frame(path) -> Frame:
	return Frame.from_dict(read_json(path))


def load_model(path) -> Model:
	return Model.from_dict(read_json(path))


def dump_json(obj, path) -> None:
	with open(path, "w", encoding="utf-8") as handle:
		json.dump(obj.to_dict(), handle, indent=1)
		handle.write("\n")
