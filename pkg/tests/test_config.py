"""Tests for environment-driven solver settings."""

import pytest

from gridflow.config import (
    DEFAULT_ORACLE_MAX_VERTICES,
    DEFAULT_THREADS,
    DEFAULT_TOLERANCE,
    SolverSettings,
    resolve_settings,
)

ENV_VARS = (
    "GRIDFLOW_TOLERANCE",
    "GRIDFLOW_ORACLE_MAX_VERTICES",
    "GRIDFLOW_ORACLE_MAX_COMBINATIONS",
    "GRIDFLOW_CONCAVITY_SAMPLES",
    "GRIDFLOW_THREADS",
    "GRIDFLOW_DB_PATH",
)


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ENV_VARS:
        monkeypatch.delenv(name, raising=False)


class TestFromEnv:
    def test_defaults(self):
        settings = SolverSettings.from_env()
        assert settings == SolverSettings()
        assert settings.db_path is None

    def test_reads_values(self, monkeypatch):
        monkeypatch.setenv("GRIDFLOW_TOLERANCE", "1e-6")
        monkeypatch.setenv("GRIDFLOW_THREADS", "4")
        monkeypatch.setenv("GRIDFLOW_DB_PATH", " /tmp/runs.db ")
        settings = SolverSettings.from_env()
        assert settings.tolerance == 1e-6
        assert settings.threads == 4
        assert settings.db_path == "/tmp/runs.db"

    def test_malformed_value_falls_back(self, monkeypatch):
        monkeypatch.setenv("GRIDFLOW_ORACLE_MAX_VERTICES", "many")
        assert SolverSettings.from_env().oracle_max_vertices == DEFAULT_ORACLE_MAX_VERTICES

    def test_out_of_range_falls_back(self, monkeypatch):
        monkeypatch.setenv("GRIDFLOW_THREADS", "0")
        monkeypatch.setenv("GRIDFLOW_TOLERANCE", "-1")
        settings = SolverSettings.from_env()
        assert settings.threads == DEFAULT_THREADS
        assert settings.tolerance == DEFAULT_TOLERANCE


class TestReplace:
    def test_none_is_ignored(self):
        settings = SolverSettings().replace(threads=None, tolerance=0.5)
        assert settings.threads == DEFAULT_THREADS
        assert settings.tolerance == 0.5

    def test_resolve_keeps_explicit(self):
        explicit = SolverSettings(threads=3)
        assert resolve_settings(explicit) is explicit

    def test_resolve_reads_env(self, monkeypatch):
        monkeypatch.setenv("GRIDFLOW_THREADS", "2")
        assert resolve_settings(None).threads == 2
