import pytest

from udqubit.qcore import configure_tolerances, tolerances

# (criterion, passed, detail) rows collected by the acceptance tests
CRITERIA: list[tuple[str, bool, str]] = []


@pytest.fixture(autouse=True)
def _restore_tolerances():
    saved = tolerances()
    yield
    configure_tolerances(saved)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for cid, passed, detail in CRITERIA:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} criterion {cid}: {detail}")
