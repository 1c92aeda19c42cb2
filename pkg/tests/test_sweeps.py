# tests/test_sweeps.py
import pytest

from sweeps import SUITES, run_suite


@pytest.mark.parametrize("suite", sorted(SUITES))
def test_every_suite_passes_on_a_small_sample(suite):
    report = run_suite(suite, cases=10, seed=7)
    assert report.suite == suite
    assert report.seed == 7
    assert report.failed == 0, report.failures
    assert report.passed == report.cases > 0


def test_same_seed_same_report():
    assert run_suite("saturation", cases=5, seed=11) == run_suite("saturation", cases=5, seed=11)


def test_reduction_suite_covers_every_budget():
    assert run_suite("reduction", cases=1, seed=0).cases == 13 * 3


def test_dieudonne_suite_is_exhaustive_up_to_dimension_three():
    small, large = run_suite("dieudonne", cases=1, seed=0), run_suite("dieudonne", cases=50, seed=1)
    assert small.cases == large.cases
    assert small.failed == 0
    # F = 0 in dimension 3 already pairs with all 512 choices of V
    assert small.cases > 512
