import contextlib

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

_criteria: dict[int, tuple[str, bool]] = {}


@pytest.fixture
def criterion():
    """Context manager that records one acceptance criterion as PASS or FAIL."""

    @contextlib.contextmanager
    def run(number: int, title: str):
        try:
            yield
        except BaseException:
            _criteria[number] = (title, False)
            raise
        _criteria[number] = (title, True)

    return run


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok = _criteria[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}")
