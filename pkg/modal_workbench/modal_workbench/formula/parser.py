# Copyright (c) 2026, modal_workbench contributors
# For license information, please see license.txt

from functools import lru_cache

import lark

from modal_workbench.modal_workbench.exceptions import FormulaSyntaxError, WorkbenchError
from modal_workbench.modal_workbench.formula.formula import (
	Atom,
	Box,
	Conj,
	Dep,
	Dia,
	Disj,
	Formula,
	IDisj,
	Neg,
	UBox,
	UDia,
	iff,
	implies,
	push_negation,
)

# prefix of the fresh symbols introduced by the dependence translations
RESERVED_PREFIX = "_f"

GRAMMAR = r"""
?start: impl

?impl: idis
     | idis "->" impl      -> implies
     | idis "<->" impl     -> iff

?idis: disj
     | idis "\\/" disj     -> idisj

?disj: conj
     | disj "|" conj       -> disj

?conj: unary
     | conj "&" unary      -> conj

?unary: atom_expr
      | "~" unary          -> neg
      | "!" unary          -> neg
      | "[]" unary         -> box
      | "<>" unary         -> dia
      | "[u]" unary        -> ubox
      | "<u>" unary        -> udia

?atom_expr: NAME           -> atom
          | "(" impl ")"
          | "dep" "(" [dep_args] ";" impl ")" -> dep

dep_args: impl ("," impl)*

NAME: /[a-z_][a-z0-9_]*/

%import common.WS
%ignore WS
"""


@lru_cache(maxsize=1)
def _parser() -> lark.Lark:
	return lark.Lark(GRAMMAR, parser="lalr", maybe_placeholders=True)


class _ToFormula(lark.Transformer):
	def __init__(self, allow_reserved: bool) -> None:
		super().__init__()
		self.allow_reserved = allow_reserved

	def atom(self, children):
		(token,) = children
		name = str(token)
		if name.startswith(RESERVED_PREFIX) and not self.allow_reserved:
			raise FormulaSyntaxError(
				f"proposition symbols starting with {RESERVED_PREFIX!r} are reserved for fresh symbols: {name}",
				position=token.start_pos,
			)
		return Atom(name)

	def neg(self, children):
		return push_negation(Neg(children[0]))

	def box(self, children):
		return Box(children[0])

	def dia(self, children):
		return Dia(children[0])

	def ubox(self, children):
		return UBox(children[0])

	def udia(self, children):
		return UDia(children[0])

	def conj(self, children):
		return Conj(*children)

	def disj(self, children):
		return Disj(*children)

	def idisj(self, children):
		return IDisj(*children)

	def implies(self, children):
		return implies(*children)

	def iff(self, children):
		return iff(*children)

	def dep_args(self, children):
		return tuple(children)

	def dep(self, children):
		args, target = children
		return Dep(args or (), target)


def parse(text: str, allow_reserved: bool = False) -> Formula:
	"""
	Parse concrete syntax into a negation normal form AST.

	`!`/`~` may prefix any formula free of `\\/` and `dep`; the negation is
	pushed to the atoms immediately. `->` and `<->` expand to their
	disjunctive definitions.
	"""
	if not isinstance(text, str) or not text.strip():
		raise FormulaSyntaxError("empty formula", position=0)
	try:
		tree = _parser().parse(text)
	except lark.exceptions.UnexpectedEOF:
		raise FormulaSyntaxError("unexpected end of formula", position=len(text))
	except lark.exceptions.UnexpectedInput as err:
		position = getattr(err, "pos_in_stream", None)
		if position is None or position < 0:
			position = len(text)
		raise FormulaSyntaxError(f"unexpected input {_excerpt(text, position)!r}", position=position)

	try:
		return _ToFormula(allow_reserved).transform(tree)
	except lark.exceptions.VisitError as err:
		if isinstance(err.orig_exc, WorkbenchError):
			raise err.orig_exc
		raise


def _excerpt(text: str, position: int) -> str:
	return text[position:position + 8] or "<end>"
