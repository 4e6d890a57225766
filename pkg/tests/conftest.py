import pytest

from higman.rewrite import Context, RuleSystem


@pytest.fixture(scope="session")
def rs342():
    return RuleSystem(Context(3, 2, 4))


@pytest.fixture(scope="session")
def rs343():
    return RuleSystem(Context(3, 3, 4))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
