# config.py
"""
Runtime settings.

Paths follow the layout of the repository; everything else comes from
environment variables so the CLI and the tests can override it without
touching code.
"""
import os
from pathlib import Path
from typing import Mapping, Optional

PROJECT_ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = PROJECT_ROOT / "DATA"
DB_DIR = Path(__file__).resolve().parent / "data" / "db"
DEFAULT_DB_PATH = DB_DIR / "reports.db"

_TRUE_WORDS = {"1", "true", "yes", "on"}

# Set by enable_analysis_hooks(); overrides the environment when not None.
_hooks_override: Optional[bool] = None


class Settings:
    """
    Settings snapshot.

    Attributes:
        seed: Default 64-bit seed for statistical commands (SNOWLAB_SEED)
        workers: Default worker count for chunked experiments (SNOWLAB_WORKERS)
        db_path: Report archive location (SNOWLAB_DB)
        analysis_hooks: Whether fault hooks may be constructed (SNOWLAB_ANALYSIS_HOOKS)
        s2_table: Optional S2 byte-table file replacing the computed table (SNOWLAB_S2_TABLE)
    """

    def __init__(self,
                 seed: int = 0,
                 workers: int = 1,
                 db_path: Optional[Path] = None,
                 analysis_hooks: bool = False,
                 s2_table: Optional[Path] = None):
        self.seed = seed
        self.workers = workers
        self.db_path = Path(db_path) if db_path else DEFAULT_DB_PATH
        self.analysis_hooks = analysis_hooks
        self.s2_table = Path(s2_table) if s2_table else None

        self._validate()

    def _validate(self) -> None:
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("Seed must be a 64-bit unsigned integer")
        if self.workers < 1:
            raise ValueError("Worker count must be at least 1")

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> "Settings":
        """
        Build settings from environment variables.

        Args:
            environ: Mapping to read from (defaults to os.environ)

        Returns:
            Settings object
        """
        env = os.environ if environ is None else environ
        try:
            seed = int(env.get("SNOWLAB_SEED", "0"), 0)
            workers = int(env.get("SNOWLAB_WORKERS", "1"))
        except ValueError as e:
            raise ValueError(f"Bad numeric environment setting: {e}") from e

        hooks = env.get("SNOWLAB_ANALYSIS_HOOKS", "").strip().lower() in _TRUE_WORDS
        if _hooks_override is not None:
            hooks = _hooks_override

        return cls(
            seed=seed,
            workers=workers,
            db_path=env.get("SNOWLAB_DB") or None,
            analysis_hooks=hooks,
            s2_table=env.get("SNOWLAB_S2_TABLE") or None,
        )

    def __repr__(self) -> str:
        return (f"Settings(seed={self.seed}, workers={self.workers}, "
                f"db_path='{self.db_path}', analysis_hooks={self.analysis_hooks})")


def get_settings() -> Settings:
    """Read settings fresh from the environment."""
    return Settings.from_env()


def enable_analysis_hooks(flag: Optional[bool] = True) -> None:
    """Turn fault hooks on or off for this process; None defers to the environment."""
    global _hooks_override
    _hooks_override = flag
