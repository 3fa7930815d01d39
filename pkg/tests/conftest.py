from __future__ import annotations

import contextlib
import io
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))  # make oracles importable

from schemmel.dynamics import build_tables


class TableBank:
    """Memoized table builder shared across the whole run.

    Tests ask for (m, limit); an already-built larger table for the same
    m is reused as-is.
    """

    def __init__(self) -> None:
        self._cache = {}

    def get(self, m: int, limit: int):
        have = self._cache.get(m)
        if have is None or have.limit < limit:
            have = build_tables(m, limit)
            self._cache[m] = have
        return have


@pytest.fixture(scope="session")
def tables():
    return TableBank()


@pytest.fixture()
def run_cli():
    """Invoke the CLI entry point in-process, capturing stdout."""
    from schemmel.cli import main

    def run(argv, env: dict[str, str] | None = None) -> tuple[int, str]:
        saved = {}
        if env:
            for key, value in env.items():
                saved[key] = os.environ.get(key)
                os.environ[key] = value
        buf = io.StringIO()
        try:
            with contextlib.redirect_stdout(buf):
                code = main(list(argv))
        finally:
            for key, value in saved.items():
                if value is None:
                    os.environ.pop(key, None)
                else:
                    os.environ[key] = value
        return code, buf.getvalue()

    return run
