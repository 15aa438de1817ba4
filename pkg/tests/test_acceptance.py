"""The ten acceptance criteria, one test each.

Every test prints a single PASS/FAIL line with the measured values.  Run
``pytest tests/test_acceptance.py -v`` to see them.
"""

import pytest

from toric_dioph.acceptance import CHECKS, _timed


@pytest.mark.parametrize("number,name,fn", CHECKS, ids=[f"criterion_{k:02d}" for k, _, _ in CHECKS])
def test_criterion(number, name, fn, capsys):
    result = _timed(number, name, fn)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.line()
