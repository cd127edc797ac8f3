"""Acceptance gate: one test per criterion, each printing a single PASS/FAIL line.

Tolerances live in airyspec.checks. The lines are repeated in an
"acceptance criteria" section at the end of the pytest run.
"""

import pytest

from airyspec import checks


@pytest.mark.parametrize("number", sorted(checks.CRITERIA))
def test_criterion(number, acceptance_log):
    result = checks.CRITERIA[number]()
    print(result.line())
    acceptance_log.append(result.line())
    assert result.passed, result.line()
