import json
import logging
import random

import pytest

from app.cli import main
from app.config import enable_analysis_hooks
from app.utils.mini_config import load_mini_config


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path, monkeypatch):
    """Keep every test away from the real archive and the caller's SNOWLAB_* settings."""
    for name in ("SNOWLAB_SEED", "SNOWLAB_WORKERS", "SNOWLAB_ANALYSIS_HOOKS", "SNOWLAB_S2_TABLE"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("SNOWLAB_DB", str(tmp_path / "reports.db"))
    yield
    enable_analysis_hooks(None)


@pytest.fixture
def hooks_enabled():
    enable_analysis_hooks(True)
    yield
    enable_analysis_hooks(None)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def mini_params():
    return load_mini_config()


class CliResult:
    def __init__(self, code: int, out: str, err: str):
        self.code = code
        self.out = out
        self.err = err

    @property
    def report(self):
        return json.loads(self.out)


@pytest.fixture
def run_cli(capsys):
    """Run the CLI in-process and capture what it printed."""

    def run(*argv: str) -> CliResult:
        root = logging.getLogger()
        handlers, level = list(root.handlers), root.level
        try:
            code = main(list(argv))
        finally:
            # main() reconfigures the root logger; give pytest its handlers back
            root.handlers[:] = handlers
            root.setLevel(level)
        captured = capsys.readouterr()
        return CliResult(code, captured.out, captured.err)

    return run
