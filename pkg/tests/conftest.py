import itertools

import pytest

from geospacing import BoundParams

ALPHAS = (1.1, 1.5, 2.0, 3.0, 5.0, 10.0)
RATIOS = (1.0, 0.5, 0.1, 0.01)
GRID = list(itertools.product(ALPHAS, RATIOS))


@pytest.fixture(params=GRID, ids=lambda ar: f"a{ar[0]}-r{ar[1]}")
def grid_params(request):
    alpha, ratio = request.param
    return BoundParams(alpha, ratio, 1.0)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record():
    def _record(criterion: str, passed: bool, detail: str) -> None:
        ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  {criterion}: {detail}")

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
