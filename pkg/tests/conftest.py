import os
from pathlib import Path

import pytest

from rcsynth import database, oracle3
from rcsynth.synthesis import DistanceOracle

DEPTH4 = 6


def _cached_db(request, n: int, depth: int) -> database.OptimalDb:
    """Build once per machine; reuse across sessions via the pytest cache dir."""
    env = os.environ.get("RCSYNTH_DB")
    if env and n == 4 and Path(env).exists():
        db = database.load(env)
        if db.depth == depth:
            return db
    path = request.config.cache.mkdir("rcsynth") / f"n{n}d{depth}.rcdb"
    if path.exists():
        try:
            return database.load(path)
        except database.DatabaseError:
            path.unlink()
    db = database.build(n, depth)
    database.save(db, path)
    return db


@pytest.fixture(scope="session")
def db4(request):
    return _cached_db(request, 4, DEPTH4)


@pytest.fixture(scope="session")
def db4_path(request, db4):
    path = request.config.cache.mkdir("rcsynth") / f"n4d{DEPTH4}.rcdb"
    if not path.exists():
        database.save(db4, path)
    return path


@pytest.fixture(scope="session")
def oracle4(db4):
    return DistanceOracle(db4)


@pytest.fixture(scope="session")
def db3(request):
    return _cached_db(request, 3, 8)


@pytest.fixture(scope="session")
def table3():
    return oracle3.build_full_table()


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
