"""One test per acceptance criterion; each prints a PASS/FAIL line."""

import pytest

from mrsw import acceptance


@pytest.mark.parametrize("number", sorted(acceptance.CRITERIA))
def test_criterion(number, capsys):
    res = acceptance.CRITERIA[number]()
    with capsys.disabled():
        print("\n" + res.line())
    assert res.passed, res.line()
