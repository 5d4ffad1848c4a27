import functools

import pytest

from tempostego import generate_click_track

# one "[PASS] criterion N: ..." line per acceptance test, echoed after the
# run so they survive pytest's output capture
ACCEPTANCE_RESULTS: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_RESULTS:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def criterion_log():
    def log(line: str) -> None:
        ACCEPTANCE_RESULTS.append(line)
        print(line)

    return log


@pytest.fixture(scope="session")
def click():
    """Memoized click-track factory; generation is cheap but many tests
    share the same carriers."""

    @functools.lru_cache(maxsize=64)
    def make(bpm, duration_s, seed=0, subdivision=False):
        return generate_click_track(bpm, duration_s, seed=seed, subdivision=subdivision)

    return make
