"""Release gate: every criterion runs at its full sample size and tolerance.

One test per criterion; each prints its own PASS/FAIL line (visible with
``pytest -s`` or on failure). The suite mirrors ``stitkit acceptance``.
"""

import json

import pytest

from stitkit.acceptance import CRITERIA


@pytest.mark.parametrize("name", list(CRITERIA))
def test_criterion(name):
    result = CRITERIA[name]()
    status = "PASS" if result.passed else "FAIL"
    print(f"{result.name}: {status} ({result.runtime_s:.1f}s) {result.description}")
    assert result.runtime_ok, (
        f"{name} exceeded its runtime budget: "
        f"{result.runtime_s:.1f}s > {result.limit_s:.0f}s"
    )
    assert result.passed, json.dumps(result.details, indent=2, default=str)
