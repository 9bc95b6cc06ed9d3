import pytest

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report_criterion():
    """Record a one-line PASS/FAIL verdict shown in the terminal summary."""

    def record(number: int, title: str, ok: bool, detail: str = "") -> bool:
        verdict = "PASS" if ok else "FAIL"
        _ACCEPTANCE_LINES.append(f"[{verdict}] criterion {number}: {title}" + (f" ({detail})" if detail else ""))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
