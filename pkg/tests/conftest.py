import time

import pytest

# criterion number -> (passed, description); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def full_corpus():
    """Zero corpus for every primitive character with conductor <= 50 up to height 50."""
    from zdecheck.zeros import build_corpus
    t0 = time.perf_counter()
    corpus = build_corpus(50, 50)
    return corpus, time.perf_counter() - t0


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, desc = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {desc}")
