import pytest

from _shared import resonant_run


@pytest.fixture(scope="session")
def resonant():
    return resonant_run(1.0)


@pytest.fixture(scope="session")
def resonant_q2():
    return resonant_run(2.0)


def pytest_terminal_summary(terminalreporter):
    from _shared import ACCEPTANCE

    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
