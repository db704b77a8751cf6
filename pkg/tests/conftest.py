import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))

import pytest

from katobounds import gfunction

_BRACKETS: dict = {}


def cached_bracket(n: int):
    """Default-config bracket, computed once per test session."""
    if n not in _BRACKETS:
        _BRACKETS[n] = gfunction.sup_bracket(gfunction.default_config(n))
    return _BRACKETS[n]


@pytest.fixture(scope="session")
def bracket():
    return cached_bracket

# acceptance criteria report: {number: (passed, detail lines)}
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, lines = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}")
        for line in lines:
            terminalreporter.write_line(f"    {line}")
