import pytest

from balanced_invariants.optim import OptimizerBudget

# acceptance outcomes, filled by tests/test_acceptance.py
ACCEPTANCE_LINES: list[tuple[str, bool, str]] = []


@pytest.fixture
def small_budget():
    return OptimizerBudget(restarts=2, max_iterations=200, degree=3, angles=64, radii=6)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_LINES:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
