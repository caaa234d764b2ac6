"""
Local run ledger for gridflow.

Stores one row per CLI run and a compressed cache of solve reports keyed by
instance fingerprint, in SQLite.
"""

from __future__ import annotations

import json
import os
import sqlite3
import threading
import zlib
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Optional


def _utc_now_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


def _default_data_dir(app_name: str) -> Path:
    home = Path.home()
    if os.name == "nt":
        base = Path(os.getenv("APPDATA", str(home / "AppData" / "Roaming")))
        return base / app_name
    if os.name == "posix" and "darwin" in os.uname().sysname.lower():
        return home / "Library" / "Application Support" / app_name
    return home / ".local" / "share" / app_name


def default_db_path() -> Path:
    override = os.getenv("GRIDFLOW_DB_PATH", "").strip()
    if override:
        return Path(override).expanduser()
    return _default_data_dir("gridflow") / "runs.db"


class RunStore:
    """SQLite-backed ledger of solver runs and cached solve reports."""

    def __init__(self, db_path: Optional[str] = None):
        self.db_path = Path(db_path).expanduser() if db_path else default_db_path()
        self.db_path.parent.mkdir(parents=True, exist_ok=True)
        self._conn = sqlite3.connect(str(self.db_path), check_same_thread=False)
        self._conn.row_factory = sqlite3.Row
        self._lock = threading.Lock()
        self._migrate()

    def close(self):
        with self._lock:
            self._conn.close()

    def __enter__(self) -> "RunStore":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    def _migrate(self):
        with self._lock:
            cur = self._conn.cursor()
            cur.execute(
                """
                CREATE TABLE IF NOT EXISTS runs (
                    run_id      INTEGER PRIMARY KEY AUTOINCREMENT,
                    fingerprint TEXT    NOT NULL,
                    command     TEXT    NOT NULL,
                    case_tag    TEXT    NOT NULL DEFAULT '',
                    cost        REAL,
                    exit_code   INTEGER NOT NULL DEFAULT 0,
                    created_at  TEXT    NOT NULL
                )
                """
            )
            cur.execute(
                "CREATE INDEX IF NOT EXISTS idx_runs_fp ON runs (fingerprint, created_at DESC)"
            )
            cur.execute(
                """
                CREATE TABLE IF NOT EXISTS solution_cache (
                    fingerprint      TEXT PRIMARY KEY,
                    report_data      BLOB NOT NULL,
                    created_at       TEXT NOT NULL,
                    last_accessed_at TEXT NOT NULL
                )
                """
            )
            cur.execute(
                "CREATE INDEX IF NOT EXISTS idx_solution_cache_lru ON solution_cache (last_accessed_at ASC)"
            )
            # older ledgers lack these columns
            self._ensure_columns(
                "runs",
                {
                    "case_tag": "TEXT NOT NULL DEFAULT ''",
                    "cost": "REAL",
                    "exit_code": "INTEGER NOT NULL DEFAULT 0",
                },
                cur,
            )
            self._conn.commit()

    @staticmethod
    def _ensure_columns(table_name: str, required: dict[str, str], cur: sqlite3.Cursor):
        existing = {
            row["name"]
            for row in cur.execute(f"PRAGMA table_info({table_name})").fetchall()
        }
        for column, definition in required.items():
            if column in existing:
                continue
            cur.execute(f"ALTER TABLE {table_name} ADD COLUMN {column} {definition}")

    # ==================== Runs ====================

    def record_run(
        self,
        fingerprint: str,
        command: str,
        *,
        case_tag: str = "",
        cost: Optional[float] = None,
        exit_code: int = 0,
    ) -> int:
        with self._lock:
            cur = self._conn.execute(
                """
                INSERT INTO runs (fingerprint, command, case_tag, cost, exit_code, created_at)
                VALUES (?, ?, ?, ?, ?, ?)
                """,
                (fingerprint, command, case_tag, cost, int(exit_code), _utc_now_iso()),
            )
            self._conn.commit()
            return int(cur.lastrowid)

    def list_runs(self, limit: int = 20, fingerprint: Optional[str] = None) -> list[dict[str, Any]]:
        safe_limit = max(1, int(limit or 20))
        query = "SELECT run_id, fingerprint, command, case_tag, cost, exit_code, created_at FROM runs"
        params: list[Any] = []
        if fingerprint:
            query += " WHERE fingerprint = ?"
            params.append(fingerprint)
        query += " ORDER BY run_id DESC LIMIT ?"
        params.append(safe_limit)
        with self._lock:
            rows = self._conn.execute(query, params).fetchall()
        return [
            {
                "run_id": row["run_id"],
                "fingerprint": row["fingerprint"],
                "command": row["command"],
                "case_tag": row["case_tag"] or "",
                "cost": row["cost"],
                "exit_code": int(row["exit_code"] or 0),
                "created_at": row["created_at"],
            }
            for row in rows
        ]

    # ==================== Report Cache ====================

    def save_report(self, fingerprint: str, report: dict[str, Any]) -> None:
        """Cache a solve report (compressed)."""
        now = _utc_now_iso()
        blob = zlib.compress(json.dumps(report, separators=(",", ":")).encode())
        with self._lock:
            self._conn.execute(
                """
                INSERT INTO solution_cache (fingerprint, report_data, created_at, last_accessed_at)
                VALUES (?, ?, ?, ?)
                ON CONFLICT(fingerprint) DO UPDATE SET
                    report_data      = excluded.report_data,
                    last_accessed_at = excluded.last_accessed_at
                """,
                (fingerprint, blob, now, now),
            )
            self._conn.commit()

    def load_report(self, fingerprint: str) -> dict[str, Any] | None:
        """Load a cached report. Returns None if not cached or unreadable."""
        with self._lock:
            row = self._conn.execute(
                "SELECT report_data FROM solution_cache WHERE fingerprint = ?",
                (fingerprint,),
            ).fetchone()

        if not row:
            return None

        with self._lock:
            self._conn.execute(
                "UPDATE solution_cache SET last_accessed_at = ? WHERE fingerprint = ?",
                (_utc_now_iso(), fingerprint),
            )
            self._conn.commit()

        try:
            return json.loads(zlib.decompress(row["report_data"]))
        except (zlib.error, ValueError):
            with self._lock:
                self._conn.execute("DELETE FROM solution_cache WHERE fingerprint = ?", (fingerprint,))
                self._conn.commit()
            return None

    def evict_old_reports(self, max_reports: int = 200) -> int:
        """Remove least-recently-used cached reports. Returns the number evicted."""
        with self._lock:
            total_row = self._conn.execute("SELECT COUNT(*) AS cnt FROM solution_cache").fetchone()
            total = total_row["cnt"] if total_row else 0
            if total <= max_reports:
                return 0

            to_evict = [
                r["fingerprint"]
                for r in self._conn.execute(
                    "SELECT fingerprint FROM solution_cache ORDER BY last_accessed_at ASC LIMIT ?",
                    (total - max_reports,),
                ).fetchall()
            ]
            if not to_evict:
                return 0

            placeholders = ",".join("?" for _ in to_evict)
            self._conn.execute(
                f"DELETE FROM solution_cache WHERE fingerprint IN ({placeholders})",
                to_evict,
            )
            self._conn.commit()
            return len(to_evict)
