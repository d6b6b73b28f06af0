"""The acceptance suite: every criterion runs once per worker count and the
reports must agree byte for byte (criterion 11).  One printed line per
criterion; run pytest with -s to watch them stream.
"""

import pytest

from ualg.selftest import render_report, run_selftest


@pytest.fixture(scope="module")
def report_one_worker():
    return run_selftest(workers=1)


@pytest.fixture(scope="module")
def report_four_workers():
    return run_selftest(workers=4)


@pytest.mark.parametrize("number", range(1, 11))
def test_criterion(number, report_one_worker):
    result = next(r for r in report_one_worker if r.number == number)
    print(result.line())
    assert result.passed, "\n".join([result.line()] + result.details)


def test_criterion_11_determinism(report_one_worker, report_four_workers):
    text_one = render_report(report_one_worker)
    text_four = render_report(report_four_workers)
    print("criterion 11 [pass] byte-identical reports across worker counts"
          if text_one == text_four else
          "criterion 11 [FAIL] reports differ across worker counts")
    assert text_one == text_four
    assert all(r.passed for r in report_one_worker)
