"""The fourteen acceptance criteria at their stated sizes (seed 7).

Each criterion prints one PASS/FAIL line; the lines are repeated in the
terminal summary."""

import pytest

from fimod import checks

CONFIG = checks.CheckConfig(seed=7)
LINES = []


@pytest.mark.parametrize("number", [n for n, _, _ in checks.CRITERIA],
                         ids=[f"criterion-{n:02d}" for n, _, _ in checks.CRITERIA])
def test_criterion(number):
    result = checks.run(number, CONFIG)
    line = result.line()
    LINES.append(line)
    print(line)
    assert result.passed, line
