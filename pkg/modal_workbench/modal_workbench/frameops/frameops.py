# Copyright (c) 2026, modal_workbench contributors
# For license information, please see license.txt

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

import networkx as nx

from modal_workbench.modal_workbench.exceptions import InputError, WorkbenchError
from modal_workbench.modal_workbench.kripke.kripke import Frame
from modal_workbench.modal_workbench.utils import bits, full_mask, get_logger

__all__ = [
	"disjoint_union",
	"generated_subframe",
	"finitely_generated_subframes",
	"BoundedMorphism",
	"check_bounded_morphism",
	"find_bounded_epimorphisms",
	"bounded_morphic_images",
	"compose",
	"ultrafilters",
	"UltrafilterExtension",
	"ultrafilter_extension",
	"isomorphism",
	"is_isomorphic",
	"distinct_up_to_isomorphism",
]

logger = get_logger("frameops")


# ──────────────────────────────────────────
# Disjoint unions and generated subframes
# ──────────────────────────────────────────
def disjoint_union(frames: Sequence[Frame]) -> Frame:
	""" Points of the i-th frame (0-based) are renamed "i.name". """
	frames = list(frames)
	if not frames:
		raise InputError("disjoint union of an empty list of frames")
	points = []
	succ = []
	offset = 0
	for index, frame in enumerate(frames):
		points.extend(f"{index}.{name}" for name in frame.points)
		succ.extend(mask << offset for mask in frame.succ)
		offset += frame.size
	return Frame(tuple(points), tuple(succ))


def generated_mask(f: Frame, seed: int) -> int:
	""" R-reachability closure of the point set `seed`. """
	closure = seed
	frontier = seed
	while frontier:
		reached = 0
		for w in bits(frontier):
			reached |= f.succ[w]
		frontier = reached & ~closure
		closure |= frontier
	return closure


def generated_subframe(f: Frame, seed) -> Frame:
	seed = seed if isinstance(seed, int) else f.team_of(seed)
	if not seed:
		raise InputError("a generated subframe needs a nonempty seed")
	return f.restrict(generated_mask(f, seed))


def finitely_generated_subframes(f: Frame, max_seed: int) -> list:
	"""
	Subframes generated by every nonempty seed of at most `max_seed` points,
	smaller seeds first, one per resulting point set.
	"""
	if max_seed < 1:
		raise InputError("max_seed must be at least 1")
	seen = {}
	for size in range(1, min(max_seed, f.size) + 1):
		for seed in combinations(range(f.size), size):
			mask = generated_mask(f, sum(1 << w for w in seed))
			if mask not in seen:
				seen[mask] = f.restrict(mask)
	return list(seen.values())


# ──────────────────────────────────────────
# Bounded morphisms
# ──────────────────────────────────────────
@dataclass(frozen=True)
class BoundedMorphism:
	source: Frame
	target: Frame
	# image index of every source point
	map: tuple

	@classmethod
	def from_names(cls, source: Frame, target: Frame, table: Mapping) -> "BoundedMorphism":
		missing = [name for name in source.points if name not in table]
		if missing:
			raise InputError(f"morphism is not total: no image for {missing}")
		return cls(source, target, tuple(target.index(table[name]) for name in source.points))

	@property
	def is_surjective(self) -> bool:
		return set(self.map) == set(range(self.target.size))

	def image_of(self, mask: int) -> int:
		image = 0
		for w in bits(mask):
			image |= 1 << self.map[w]
		return image

	def to_dict(self) -> dict:
		return {"map": {name: self.target.points[self.map[w]] for w, name in enumerate(self.source.points)}}


def check_bounded_morphism(bm: BoundedMorphism) -> bool:
	"""
	Forth: wRv implies f(w) R' f(v). Back: f(w) R' v' implies some
	R-successor v of w with f(v) = v'. Together: f[R[w]] = R'[f(w)].
	"""
	if len(bm.map) != bm.source.size or not all(0 <= x < bm.target.size for x in bm.map):
		raise InputError("bounded morphism map must be total on the source points")
	for w in range(bm.source.size):
		forward = bm.image_of(bm.source.succ[w])
		required = bm.target.succ[bm.map[w]]
		if forward & ~required:
			return False
		if required & ~forward:
			return False
	return True


def find_bounded_epimorphisms(src: Frame, dst: Frame) -> list:
	if dst.size > src.size:
		return []
	found = []
	for table in product(range(dst.size), repeat=src.size):
		bm = BoundedMorphism(src, dst, table)
		if bm.is_surjective and check_bounded_morphism(bm):
			found.append(bm)
	return found


def _surjection_codes(size: int) -> Iterable[tuple]:
	""" Restricted growth strings: each map onto 0..k-1 up to renaming the targets. """
	def extend(prefix: list, classes: int):
		if len(prefix) == size:
			yield tuple(prefix)
			return
		for value in range(classes + 1):
			yield from extend(prefix + [value], max(classes, value + 1))

	yield from extend([], 0)


def bounded_morphic_images(f: Frame) -> list:
	"""
	Every bounded morphic image of `f` up to relabelling, with its morphism.
	The image relation is forced to be f[R]; only Back needs checking.
	"""
	images = []
	for code in _surjection_codes(f.size):
		count = max(code) + 1
		names = tuple("+".join(f.points[w] for w in range(f.size) if code[w] == c) for c in range(count))
		succ = [0] * count
		for w, mask in enumerate(f.succ):
			for v in bits(mask):
				succ[code[w]] |= 1 << code[v]
		image = Frame(names, tuple(succ))
		bm = BoundedMorphism(f, image, code)
		if check_bounded_morphism(bm):
			images.append(bm)
	return images


def compose(first: BoundedMorphism, second: BoundedMorphism) -> BoundedMorphism:
	""" `second` after `first`. """
	if first.target != second.source:
		raise InputError("morphisms do not compose: target and source differ")
	return BoundedMorphism(first.source, second.target, tuple(second.map[x] for x in first.map))


# ──────────────────────────────────────────
# Ultrafilter extensions
# ──────────────────────────────────────────
@lru_cache(maxsize=None)
def ultrafilters(n: int) -> tuple:
	"""
	All ultrafilters over an n-point set, each a frozenset of subset masks.
	Candidates hold exactly one set of every complementary pair; a candidate
	is kept when it omits ∅ and is closed upwards and under intersection.
	"""
	full = full_mask(n)
	pairs = [(x, full & ~x) for x in range(1 << n) if x < full & ~x]
	found = []
	for choice in product((0, 1), repeat=len(pairs)):
		family = frozenset(pair[pick] for pair, pick in zip(pairs, choice))
		if 0 in family:
			continue
		if not all(x | y in family for x in family for y in range(1 << n)):
			continue
		if not all(x & y in family for x in family for y in family):
			continue
		found.append(family)
	found.sort(key=lambda family: min(family, key=lambda x: (bin(x).count("1"), x)))
	if len(found) != n:
		raise WorkbenchError(f"expected {n} ultrafilters over {n} points, found {len(found)}")
	return tuple(found)


@dataclass(frozen=True)
class UltrafilterExtension:
	frame: Frame
	ultrafilters: tuple
	# point of the original frame -> point of the extension
	principal: dict


def ultrafilter_extension(f: Frame) -> UltrafilterExtension:
	"""
	Ultrafilter frame of `f` with U R V iff m_R(X) ∈ U for every X ∈ V, where
	m_R(X) is the set of points with an R-successor in X. On a finite frame
	the principal ultrafilters give an isomorphism, which is checked here.
	"""
	n = f.size
	families = ultrafilters(n)
	m_r = [0] * (1 << n)
	for x in range(1 << n):
		for w in range(n):
			if f.succ[w] & x:
				m_r[x] |= 1 << w

	principal_of = []
	for family in families:
		singletons = [w for w in range(n) if 1 << w in family]
		principal_of.append(singletons[0])
	names = tuple(f"U{f.points[w]}" for w in principal_of)

	succ = []
	for u in families:
		mask = 0
		for j, v in enumerate(families):
			if all(m_r[x] in u for x in v):
				mask |= 1 << j
		succ.append(mask)
	extension = Frame(names, tuple(succ))

	principal = {f.points[w]: names[i] for i, w in enumerate(principal_of)}
	bm = BoundedMorphism.from_names(f, extension, principal)
	if not (bm.is_surjective and check_bounded_morphism(bm) and len(set(bm.map)) == n):
		raise WorkbenchError(f"principal ultrafilters are not an isomorphism for {f}")
	logger.debug("ultrafilter extension of %s computed over %s subsets", f, 1 << n)
	return UltrafilterExtension(extension, families, principal)


# ──────────────────────────────────────────
# Isomorphism
# ──────────────────────────────────────────
def _as_graph(f: Frame) -> nx.DiGraph:
	graph = nx.DiGraph()
	for w in range(f.size):
		graph.add_node(w, loop=bool(f.succ[w] >> w & 1))
	graph.add_edges_from((w, v) for w, v in f.rel if w != v)
	return graph


def isomorphism(f: Frame, g: Frame) -> dict | None:
	""" A relation-preserving bijection from the points of `f` to those of `g`, or None. """
	if f.size != g.size or len(f.rel) != len(g.rel):
		return None
	mapping = nx.vf2pp_isomorphism(_as_graph(f), _as_graph(g), node_label="loop")
	if mapping is None:
		return None
	return {f.points[w]: g.points[v] for w, v in sorted(mapping.items())}


def is_isomorphic(f: Frame, g: Frame) -> bool:
	return isomorphism(f, g) is not None


def distinct_up_to_isomorphism(frames: Iterable[Frame]) -> list:
	""" First representative of every isomorphism class, in input order. """
	kept = []
	for frame in frames:
		if not any(is_isomorphic(frame, other) for other in kept):
			kept.append(frame)
	return kept
