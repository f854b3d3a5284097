# Copyright (c) 2026, modal_workbench contributors
# For license information, please see license.txt

import logging
from typing import Iterator

from modal_workbench.config import get_settings

_ROOT_LOGGER = "modal_workbench"
_configured = False


def get_logger(name: str) -> logging.Logger:
	"""
	Return the named workbench logger, e.g. `get_logger("definability")`.
	The package root logger gets its handler and level on first use.
	"""
	global _configured
	if not _configured:
		root = logging.getLogger(_ROOT_LOGGER)
		if not root.handlers:
			handler = logging.StreamHandler()
			handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s [%(name)s] %(message)s"))
			root.addHandler(handler)
		apply_log_level()
		_configured = True
	return logging.getLogger(f"{_ROOT_LOGGER}.{name}")


def apply_log_level() -> None:
	""" Re-read the level from the settings, e.g. after `update_settings(debug=True)`. """
	settings = get_settings()
	logging.getLogger(_ROOT_LOGGER).setLevel(logging.DEBUG if settings.debug else settings.log_level.upper())


# ──────────────────────────────────────────
# Bitset helpers
# ──────────────────────────────────────────
def full_mask(size: int) -> int:
	return (1 << size) - 1


def bits(mask: int) -> Iterator[int]:
	""" Indices of the set bits of `mask`, ascending. """
	index = 0
	while mask:
		if mask & 1:
			yield index
		mask >>= 1
		index += 1


def popcount(mask: int) -> int:
	return bin(mask).count("1")


def subsets(mask: int) -> Iterator[int]:
	""" Every submask of `mask`, from `mask` itself down to 0. """
	sub = mask
	while True:
		yield sub
		if sub == 0:
			return
		sub = (sub - 1) & mask
