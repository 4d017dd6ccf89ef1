# schema.py
"""
Table creation functions for the report archive.
All functions accept a sqlite3.Connection object (conn).
"""


def create_run_reports_table(conn):
    cursor = conn.cursor()
    cursor.execute("""
        CREATE TABLE IF NOT EXISTS run_reports (
            id INTEGER PRIMARY KEY AUTOINCREMENT,
            command TEXT NOT NULL,
            passed INTEGER NOT NULL,
            seed TEXT,
            created_at TEXT NOT NULL,
            payload TEXT NOT NULL
        )
    """)
    cursor.execute("CREATE INDEX IF NOT EXISTS idx_run_reports_command ON run_reports(command)")
    conn.commit()


def create_all_tables(conn):
    """
    Master function that creates all tables.
    Call this from db.initialize_database().
    """
    create_run_reports_table(conn)
