import pytest

from hilbertzeta.specfun import ProblemParams

# lines printed after the run by the acceptance tests
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def unit_params():
    return ProblemParams(1, 1, 1.0, 1.0, 2.0, 2.0)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
