"""
Solver settings, read from ``GRIDFLOW_*`` environment variables.

Malformed or out-of-range values fall back to the defaults instead of failing,
so a stray environment variable never breaks a batch run.
"""

from __future__ import annotations

import dataclasses
import logging
import os
from dataclasses import dataclass
from typing import Any, Callable, Optional

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9
DEFAULT_ORACLE_MAX_VERTICES = 20
DEFAULT_ORACLE_MAX_COMBINATIONS = 10**6
DEFAULT_CONCAVITY_SAMPLES = 17
DEFAULT_THREADS = 1


def _env_value(name: str, parse: Callable[[str], Any], default: Any, valid: Callable[[Any], bool]) -> Any:
    raw = os.getenv(name, "").strip()
    if not raw:
        return default
    try:
        value = parse(raw)
    except ValueError:
        logger.warning("Ignoring malformed %s=%r", name, raw)
        return default
    if not valid(value):
        logger.warning("Ignoring out-of-range %s=%r", name, raw)
        return default
    return value


@dataclass(frozen=True)
class SolverSettings:
    """Tunable limits shared by the solver, the brute-force oracle and the CLI.

    Attributes:
        tolerance: Absolute tolerance for comparing real-valued costs.
        oracle_max_vertices: Largest L*T the brute-force oracle accepts.
        oracle_max_combinations: Cap on spanning-tree/bound combinations.
        concavity_samples: Sample points per arc for the concavity check.
        threads: Worker threads used to price state-graph transitions.
        db_path: Run ledger location; None means the platform data dir.
    """

    tolerance: float = DEFAULT_TOLERANCE
    oracle_max_vertices: int = DEFAULT_ORACLE_MAX_VERTICES
    oracle_max_combinations: int = DEFAULT_ORACLE_MAX_COMBINATIONS
    concavity_samples: int = DEFAULT_CONCAVITY_SAMPLES
    threads: int = DEFAULT_THREADS
    db_path: Optional[str] = None

    @classmethod
    def from_env(cls) -> "SolverSettings":
        return cls(
            tolerance=_env_value("GRIDFLOW_TOLERANCE", float, DEFAULT_TOLERANCE, lambda v: v >= 0),
            oracle_max_vertices=_env_value(
                "GRIDFLOW_ORACLE_MAX_VERTICES", int, DEFAULT_ORACLE_MAX_VERTICES, lambda v: v >= 1
            ),
            oracle_max_combinations=_env_value(
                "GRIDFLOW_ORACLE_MAX_COMBINATIONS", int, DEFAULT_ORACLE_MAX_COMBINATIONS, lambda v: v >= 1
            ),
            concavity_samples=_env_value(
                "GRIDFLOW_CONCAVITY_SAMPLES", int, DEFAULT_CONCAVITY_SAMPLES, lambda v: v >= 3
            ),
            threads=_env_value("GRIDFLOW_THREADS", int, DEFAULT_THREADS, lambda v: v >= 1),
            db_path=os.getenv("GRIDFLOW_DB_PATH", "").strip() or None,
        )

    def replace(self, **changes: Any) -> "SolverSettings":
        """Return a copy with the given fields overridden; None values are ignored."""
        return dataclasses.replace(self, **{k: v for k, v in changes.items() if v is not None})


def resolve_settings(settings: Optional[SolverSettings]) -> SolverSettings:
    return settings if settings is not None else SolverSettings.from_env()
