# Copyright (c) 2026, modal_workbench contributors
# For license information, please see license.txt

__all__ = [
	"WorkbenchError",
	"FormulaSyntaxError",
	"FragmentError",
	"InputError",
	"FreshSymbolError",
	"ConfigurationError",
	"ReplayError",
]


class WorkbenchError(Exception):
	"""
	Main workbench exception class
	"""

	def __init__(self, *args, **kwargs) -> None:
		self.error = kwargs.get("error", "-")
		self.error_description = kwargs.get("error_description", "-")
		super().__init__(*args)


class FormulaSyntaxError(WorkbenchError):
	""" Formula text does not conform to the grammar. """

	def __init__(self, message: str, position: int | None = None, **kwargs) -> None:
		self.position = position
		if position is not None:
			message = f"{message} (at position {position})"
		super().__init__(message, error="syntax", **kwargs)


class FragmentError(WorkbenchError):
	""" An operation was applied to a formula outside the fragment it supports. """

	def __init__(self, message: str, constructor: str | None = None, **kwargs) -> None:
		self.constructor = constructor
		super().__init__(message, error="fragment", **kwargs)


class InputError(WorkbenchError):
	""" Malformed frames, models, teams, morphisms or report files. """


class FreshSymbolError(WorkbenchError):
	""" A fresh proposition symbol collides with one already in use. """


class ConfigurationError(WorkbenchError):
	""" Invalid settings value. """


class ReplayError(WorkbenchError):
	""" A recorded witness did not reproduce its verdict. """
