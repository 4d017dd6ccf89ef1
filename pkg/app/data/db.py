# db.py
import sqlite3
from pathlib import Path
from typing import Optional, Union

from app.config import get_settings


def database_path() -> Path:
    """Archive location from SNOWLAB_DB, default app/data/db/reports.db."""
    return get_settings().db_path


def get_connection(path: Optional[Union[str, Path]] = None):
    """
    Returns a sqlite3.Connection with row_factory -> sqlite3.Row.
    The parent directory is created on first use.
    """
    path = Path(path) if path else database_path()
    path.parent.mkdir(parents=True, exist_ok=True)
    conn = sqlite3.connect(path)
    conn.row_factory = sqlite3.Row
    return conn


def initialize_database(path: Optional[Union[str, Path]] = None):
    """
    Create the database file (if not exists) and create all tables by calling schema.create_all_tables.
    """
    # import here to avoid top-level circular imports
    from app.data.schema import create_all_tables

    conn = get_connection(path)
    try:
        create_all_tables(conn)
    finally:
        conn.close()
