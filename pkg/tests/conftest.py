from __future__ import annotations

import numpy as np
import pytest

from qselect.qubo import QuboProblem


def random_problem(rng: np.random.Generator, n: int, density: float = 0.6, scale: float = 5.0,
                   integer: bool = False, offset: bool = True) -> QuboProblem:
    """Random QUBO for oracle comparisons; integer mode draws from [-scale, scale]."""
    def draw():
        if integer:
            return int(rng.integers(-scale, scale + 1))
        return float(rng.uniform(-scale, scale))

    lin = {i: draw() for i in range(n) if rng.random() < density}
    quad = {(i, j): draw() for i in range(n) for j in range(i + 1, n) if rng.random() < density}
    c = draw() if offset else 0.0
    return QuboProblem.from_terms(n, lin, quad, offset=float(c))


@pytest.fixture
def small_problem() -> QuboProblem:
    # a = {0: 2, 1: -3}, b = {(0, 1): 4}
    return QuboProblem.from_terms(3, {0: 2, 1: -3}, {(0, 1): 4})


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


# acceptance verdicts, filled in by test_acceptance and printed after the run
VERDICTS: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(VERDICTS):
        terminalreporter.write_line(VERDICTS[num])
