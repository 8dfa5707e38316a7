import random
import sys

import pytest

from zddsat import LiteralOrder, ZddManager

sys.setrecursionlimit(max(sys.getrecursionlimit(), 50_000))


def random_clauses(rng: random.Random, nvars: int, max_clauses: int, max_len: int | None = None):
    """Random non-tautological clauses over variables ``1..nvars``."""
    max_len = max_len or nvars
    out = []
    for _ in range(rng.randint(0, max_clauses)):
        k = rng.randint(0, min(max_len, nvars))
        vs = rng.sample(range(1, nvars + 1), k)
        out.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return out


def random_cnf_clauses(rng: random.Random, nvars: int, max_clauses: int, width: int = 3):
    out = []
    for _ in range(rng.randint(1, max_clauses)):
        vs = rng.sample(range(1, nvars + 1), min(width, nvars))
        out.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return out


@pytest.fixture
def mgr():
    return ZddManager(LiteralOrder(8))


_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_c" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        _ACCEPTANCE[name] = (report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        outcome, duration = _ACCEPTANCE[name]
        crit = name.split("_")[1][1:]
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {crit}: {status}  {name}  ({duration:.1f}s)")
