import math
from functools import partial

import pytest

from prabhakar import verify
from prabhakar.verify import (
    COVERAGE,
    SUITES,
    VerificationReport,
    build_cases,
    coverage_gaps,
    reports_to_csv,
    run_case,
    run_suite,
    summary_table,
)


def test_report_relative_and_absolute_checks():
    r = VerificationReport.compare("a", 1.0 + 1e-7, 1.0, 1e-6)
    assert r.passed and r.rel_err == pytest.approx(1e-7)
    r = VerificationReport.compare("b", 2e-5, 0.0, 1e-4)
    assert r.passed and r.rel_err == pytest.approx(2e25)
    assert not VerificationReport.compare("c", math.nan, 1.0, 1.0).passed
    assert not VerificationReport.compare("d", 1.1, 1.0, 1e-3).passed


def test_exceptions_become_failed_reports():
    def boom(case_id):
        raise ZeroDivisionError("nope")

    [r] = run_case(partial(boom, "x/1"))
    assert r.case_id == "x/1" and not r.passed and "ZeroDivisionError" in r.notes


def test_registry_is_complete():
    assert coverage_gaps() == []
    assert set(s for suites in COVERAGE.values() for s in suites) == set(SUITES)
    assert len(SUITES) == 11


@pytest.mark.parametrize("name", sorted(SUITES))
def test_every_suite_has_ten_draws(name):
    assert len(build_cases(name, 0)) >= 10


def test_unknown_suite():
    with pytest.raises(ValueError, match="unknown suite"):
        run_suite("lemma_9_9")


def test_kernel_symbol_sweep():
    reports = run_suite("lemma_2_14", 42)
    assert len(reports) >= 30 and all(r.passed for r in reports)
    assert all(r.tolerance == 1e-6 for r in reports)
    assert [r.case_id for r in reports] == sorted(r.case_id for r in reports)


def test_vanishing_limit_suite():
    reports = run_suite("limit_3_3", 1)
    assert reports and all(r.passed for r in reports)
    assert any("cos" in r.notes for r in reports)


def test_seed_changes_draws_and_is_reproducible():
    a = build_cases("thm_2_13", 3)
    b = build_cases("thm_2_13", 3)
    c = build_cases("thm_2_13", 4)
    assert [x.args for x in a] == [x.args for x in b]
    assert [x.args for x in a] != [x.args for x in c]


def test_parallel_run_matches_serial():
    serial = run_suite("thm_2_13", 5)
    parallel = run_suite("thm_2_13", 5, workers=2)
    assert reports_to_csv(serial) == reports_to_csv(parallel)


def test_output_formats():
    reports = [VerificationReport.compare("s/1", 1.0, 1.0, 1e-6),
               VerificationReport.compare("s/2", 2.0, 1.0, 1e-6, "note")]
    csv_text = reports_to_csv(reports)
    assert csv_text.splitlines()[0] == ",".join(verify.REPORT_FIELDS)
    assert csv_text.splitlines()[1] == "s/1,1,1,0,0,9.9999999999999995e-07,true,"
    table = summary_table(reports)
    assert "FAIL  note" in table and table.endswith("1/2 passed\n")
