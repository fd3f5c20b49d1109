"""SQLite ledger of CLI runs and separation verdicts."""

from __future__ import annotations

import json
import sqlite3
from collections.abc import Iterable
from datetime import datetime, timezone

from gnnlab.errors import PropertyViolation


class RunStore:
    def __init__(self, db_path: str = "gnnlab_runs.db"):
        self.db_path = db_path
        self._init_db()

    def _connect(self) -> sqlite3.Connection:
        conn = sqlite3.connect(self.db_path)
        conn.row_factory = sqlite3.Row
        return conn

    def _init_db(self) -> None:
        with self._connect() as conn:
            conn.execute("""
                CREATE TABLE IF NOT EXISTS runs (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    timestamp TEXT NOT NULL,
                    command TEXT NOT NULL,
                    seed INTEGER,
                    out_dir TEXT,
                    exit_code INTEGER NOT NULL,
                    summary TEXT,
                    latency_ms REAL
                )
            """)
            conn.execute("""
                CREATE TABLE IF NOT EXISTS verdicts (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    run_id INTEGER NOT NULL REFERENCES runs(id),
                    pair_id TEXT NOT NULL,
                    discriminator TEXT NOT NULL,
                    separated INTEGER NOT NULL,
                    gap REAL
                )
            """)
            conn.execute("""
                CREATE INDEX IF NOT EXISTS idx_runs_command ON runs(command)
            """)
            conn.execute("""
                CREATE INDEX IF NOT EXISTS idx_verdicts_run ON verdicts(run_id)
            """)

    def save_run(
        self,
        command: str,
        seed: int | None,
        out_dir: str,
        exit_code: int,
        summary: dict | None = None,
        latency_ms: float = 0.0,
    ) -> int:
        with self._connect() as conn:
            cursor = conn.execute(
                "INSERT INTO runs"
                " (timestamp, command, seed, out_dir, exit_code, summary, latency_ms)"
                " VALUES (?, ?, ?, ?, ?, ?, ?)",
                (
                    datetime.now(timezone.utc).isoformat(),
                    command,
                    seed,
                    out_dir,
                    exit_code,
                    json.dumps(summary or {}, sort_keys=True),
                    latency_ms,
                ),
            )
            return int(cursor.lastrowid)

    def save_verdicts(self, run_id: int, rows: Iterable) -> int:
        """Store SeparationRow-like objects; returns the number written."""
        values = [
            (run_id, r.pair_id, r.discriminator, int(bool(r.separated)), float(r.gap)) for r in rows
        ]
        with self._connect() as conn:
            conn.executemany(
                "INSERT INTO verdicts (run_id, pair_id, discriminator, separated, gap) "
                "VALUES (?, ?, ?, ?, ?)",
                values,
            )
        return len(values)

    def get_verdicts(self, run_id: int) -> list[dict]:
        with self._connect() as conn:
            rows = conn.execute(
                "SELECT pair_id, discriminator, separated, gap FROM verdicts "
                "WHERE run_id = ? ORDER BY pair_id, discriminator",
                (run_id,),
            ).fetchall()
            return [{**dict(r), "separated": bool(r["separated"])} for r in rows]

    def get_stats(self) -> dict:
        with self._connect() as conn:
            total = conn.execute("SELECT COUNT(*) FROM runs").fetchone()[0]
            violations = conn.execute(
                "SELECT COUNT(*) FROM runs WHERE exit_code = ?", (PropertyViolation.exit_code,)
            ).fetchone()[0]
            cmd_rows = conn.execute(
                "SELECT command, COUNT(*) as cnt FROM runs GROUP BY command ORDER BY command"
            ).fetchall()
            by_command = {row["command"]: row["cnt"] for row in cmd_rows}

        return {
            "total_runs": total,
            "runs_by_command": by_command,
            "total_violations": violations,
        }

    def get_recent(self, limit: int = 50) -> list[dict]:
        with self._connect() as conn:
            rows = conn.execute(
                "SELECT * FROM runs ORDER BY id DESC LIMIT ?", (limit,)
            ).fetchall()
            recent = []
            for r in rows:
                entry = dict(r)
                entry["summary"] = json.loads(entry["summary"] or "{}")
                recent.append(entry)
            return recent
