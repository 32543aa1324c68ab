import pytest

_RESULTS = []


class AcceptanceRecorder:
    def __call__(self, criterion: str, passed: bool, detail: str = ""):
        _RESULTS.append((criterion, bool(passed), detail))
        return passed


@pytest.fixture(scope="session")
def report():
    return AcceptanceRecorder()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, passed, detail in _RESULTS:
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {criterion}: {detail}")
