# Copyright (c) 2026, modal_workbench contributors
# For license information, please see license.txt

import os
from dataclasses import dataclass, fields, replace

from modal_workbench.modal_workbench.exceptions import ConfigurationError

ENV_PREFIX = "MODAL_WORKBENCH_"

TEAM_SEARCH_MODES = ("reduced", "full")
VALIDITY_CHECKS = ("downward_closed", "exhaustive")


@dataclass(frozen=True)
class WorkbenchSettings:
	# ◇ witnesses from choice functions and ∨ from disjoint splits ("reduced"),
	# or every subteam / every cover ("full")
	team_search: str = "reduced"
	# team validity on the full team only, or on every team
	validity_check: str = "downward_closed"
	default_max_points: int = 3
	default_seed: int = 2016
	log_level: str = "WARNING"
	debug: bool = False

	def validate(self) -> "WorkbenchSettings":
		if self.team_search not in TEAM_SEARCH_MODES:
			raise ConfigurationError(f"team_search must be one of {TEAM_SEARCH_MODES}, got {self.team_search!r}")
		if self.validity_check not in VALIDITY_CHECKS:
			raise ConfigurationError(f"validity_check must be one of {VALIDITY_CHECKS}, got {self.validity_check!r}")
		if self.default_max_points < 1:
			raise ConfigurationError("default_max_points must be at least 1")
		return self


_settings: WorkbenchSettings | None = None


def _from_env() -> WorkbenchSettings:
	values = {}
	for field in fields(WorkbenchSettings):
		raw = os.environ.get(ENV_PREFIX + field.name.upper())
		if raw is None:
			continue
		if field.type in (bool, "bool"):
			values[field.name] = raw.strip().lower() in ("1", "true", "yes", "on")
		elif field.type in (int, "int"):
			try:
				values[field.name] = int(raw)
			except ValueError:
				raise ConfigurationError(f"{ENV_PREFIX}{field.name.upper()} must be an integer, got {raw!r}")
		else:
			values[field.name] = raw.strip()
	return WorkbenchSettings(**values).validate()


def get_settings() -> WorkbenchSettings:
	""" Process-wide settings, read once from the environment. """
	global _settings
	if _settings is None:
		_settings = _from_env()
	return _settings


def update_settings(**changes) -> WorkbenchSettings:
	""" Replace individual settings at runtime, e.g. `update_settings(team_search="full")`. """
	global _settings
	_settings = replace(get_settings(), **changes).validate()
	return _settings


def reset_settings() -> None:
	global _settings
	_settings = None
