# reports.py
from datetime import datetime, timezone
from typing import List, Optional

from app.data.db import get_connection, initialize_database
from app.models.report import RunReport


def save_report(report: RunReport, path=None) -> int:
    """Store a report; returns its row id."""
    initialize_database(path)
    sql = """
    INSERT INTO run_reports (command, passed, seed, created_at, payload)
    VALUES (?, ?, ?, ?, ?)
    """
    # seeds are 64-bit unsigned, beyond sqlite's signed INTEGER
    seed = None if report.seed is None else str(report.seed)
    created = datetime.now(timezone.utc).isoformat(timespec="seconds")
    with get_connection(path) as conn:
        cur = conn.execute(sql, (report.op, int(report.passed), seed, created, report.to_json()))
        return cur.lastrowid


def list_reports(command: Optional[str] = None, path=None) -> List:
    initialize_database(path)
    with get_connection(path) as conn:
        if command:
            rows = conn.execute(
                "SELECT * FROM run_reports WHERE command = ? ORDER BY id DESC", (command,)
            ).fetchall()
        else:
            rows = conn.execute("SELECT * FROM run_reports ORDER BY id DESC").fetchall()
    return rows


def get_report(report_id: int, path=None):
    initialize_database(path)
    with get_connection(path) as conn:
        row = conn.execute("SELECT * FROM run_reports WHERE id = ?", (report_id,)).fetchone()
    return row


def load_report(report_id: int, path=None) -> Optional[RunReport]:
    row = get_report(report_id, path)
    return RunReport.from_json(row["payload"]) if row else None


def delete_report(report_id: int, path=None) -> bool:
    initialize_database(path)
    with get_connection(path) as conn:
        cur = conn.execute("DELETE FROM run_reports WHERE id = ?", (report_id,))
    return cur.rowcount > 0
