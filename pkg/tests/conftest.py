import pytest

# (criterion number, title, passed, detail) filled in by test_acceptance.py
ACCEPTANCE = []


@pytest.fixture
def record():
    def add(number, title, passed, detail=""):
        ACCEPTANCE.append((number, title, bool(passed), detail))
        return passed
    return add


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(ACCEPTANCE):
        status = "PASS" if passed else "FAIL"
        line = f"[{status}] {number}. {title}"
        terminalreporter.write_line(f"{line} ({detail})" if detail else line)
