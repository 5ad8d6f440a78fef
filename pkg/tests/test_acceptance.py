"""One test per acceptance criterion; each prints its pass/fail line with the measured numbers."""

import pytest

from artifact.acceptance import CHECKS

REPORT: list[str] = []


@pytest.mark.parametrize("check", CHECKS, ids=[f"criterion_{c.id:02d}_{c.name.replace(' ', '_')}" for c in CHECKS])
def test_criterion(check):
    result = check.run()
    line = result.line()
    REPORT.append(line)
    print(line)
    assert result.passed, f"{line}\nbound: {result.bound}\nmeasured: {result.measured}"
