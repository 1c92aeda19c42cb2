# tests/test_engine.py
import pytest

from bundles import AbstractBundle, SplitBundle
from engine import (
    FamilyDescriptor,
    ListOracle,
    ReductionState,
    low_genus_nonliftable,
    moret_bailly_family,
    moret_bailly_lie_estimate,
    moret_bailly_state,
    reduction_run,
    reduction_step,
    w2_obstruction_report,
    zarkhin,
)
from exact_algebra import FieldSpec, Form
from exceptions import InconsistentDescriptor, OracleDegreeMismatch
from models import Positivity, ReductionCase, ReductionVerdict, RepeatPolicy, W2Verdict
from sheafmaps import GradedMatrix

F5 = FieldSpec(5)
ZERO, ONE = Form.zero(F5), Form.constant(F5, 1)


def case_i_state(budget: int) -> ReductionState:
    return ReductionState(2, budget, GradedMatrix.zero(F5, (0, 0), (-1, -1)))


def case_ii_state(budget: int) -> ReductionState:
    return ReductionState(2, budget, GradedMatrix(F5, (0, 0), (0, -2), ((ONE, ZERO), (ZERO, ZERO))))


# ---------------------- FAMILIES ----------------------

def test_descriptor_validation():
    with pytest.raises(InconsistentDescriptor):
        FamilyDescriptor(g=0, genus=0, prime=5, hodge=SplitBundle(), non_isotrivial=False)
    with pytest.raises(InconsistentDescriptor):
        FamilyDescriptor(g=2, genus=0, prime=5, hodge=SplitBundle.of(1), non_isotrivial=True)
    with pytest.raises(InconsistentDescriptor):
        FamilyDescriptor(g=2, genus=0, prime=5, hodge=SplitBundle.of(0, 0), non_isotrivial=True)


def test_moret_bailly_family_is_not_w2_liftable():
    F = moret_bailly_family(5)
    assert F.lie == SplitBundle.of(-5, 1)
    report = w2_obstruction_report(F)
    assert report.verdict == W2Verdict.not_w2_liftable
    assert report.hodge_degree == 4
    assert report.positivity == Positivity.not_nef
    assert report.higgs.fires
    assert report.higgs.certificate["twists"] == [1]
    assert report.arakelov.fires
    assert report.arakelov.certificate["bound"] == -2
    assert report.arakelov.certificate["pipeline"]["kernel"] == [5]
    assert report.trace is None


def test_trace_check_expects_a_non_nef_hodge_bundle():
    F = FamilyDescriptor(g=2, genus=0, prime=5, hodge=SplitBundle.of(5, -1), non_isotrivial=True, trace_nontrivial=True)
    report = w2_obstruction_report(F)
    assert report.higgs is None
    assert report.trace.detail == "expect NotNef; observed NotNef"
    ample = FamilyDescriptor(
        g=1, genus=2, prime=5, hodge=AbstractBundle(1, 1, genus=2, prime=5),
        non_isotrivial=True, trace_nontrivial=True,
    )
    with pytest.raises(InconsistentDescriptor, match="nontrivial trace forces a non-nef Hodge bundle"):
        w2_obstruction_report(ample)


def test_isotrivial_family_is_inconclusive():
    F = FamilyDescriptor(g=1, genus=2, prime=3, hodge=AbstractBundle(1, 0, genus=2, prime=3), non_isotrivial=False)
    report = w2_obstruction_report(F)
    assert not report.arakelov.fires
    assert report.verdict == W2Verdict.inconclusive


def test_low_genus_families():
    assert low_genus_nonliftable(0, True)
    assert low_genus_nonliftable(1, True)
    assert not low_genus_nonliftable(2, True)
    assert not low_genus_nonliftable(0, False)


# ---------------------- REDUCTION LOOP ----------------------

def test_frobenius_steps_consume_g():
    S = case_i_state(3)
    report = reduction_run(S, ListOracle([S.lie_phi]))
    assert report.verdict == ReductionVerdict.contradiction_reached
    assert report.steps == 2
    assert [r.case for r in report.trace] == [ReductionCase.case_i, ReductionCase.case_i]
    assert [r.budget_after for r in report.trace] == [1, -1]


def test_slope_zero_kernel_steps_consume_its_rank():
    S = case_ii_state(2)
    report = reduction_run(S, ListOracle([S.lie_phi], RepeatPolicy.last))
    assert report.verdict == ReductionVerdict.contradiction_reached
    assert report.steps == 3
    assert report.trace[0].kernel_rank == 1
    assert report.trace[0].kernel_twists == [0]


def test_positive_lie_summand_stops_immediately():
    S = moret_bailly_state(5)
    outcome = reduction_step(S, ListOracle([]))
    assert outcome.verdict == ReductionVerdict.mu_max_positive
    assert outcome.record.budget_after == 2


def test_injective_lie_map_yields_no_contradiction():
    S = ReductionState(2, 4, GradedMatrix.constant(F5, 0, [[1, 0], [0, 1]]))
    report = reduction_run(S, ListOracle([S.lie_phi]))
    assert report.verdict == ReductionVerdict.no_contradiction
    assert report.steps == 1


def test_exhausted_oracle_and_step_limit():
    report = reduction_run(case_i_state(3), ListOracle([], RepeatPolicy.none))
    assert report.verdict == ReductionVerdict.oracle_exhausted
    assert report.steps == 1
    S = case_i_state(10)
    report = reduction_run(S, ListOracle([S.lie_phi]), max_steps=2)
    assert report.verdict == ReductionVerdict.step_limit
    assert report.trace[-1].budget_after == 6


def test_oracle_matrix_of_the_wrong_shape():
    bad = GradedMatrix.zero(F5, (0, 0), (0, 0))
    with pytest.raises(OracleDegreeMismatch) as info:
        reduction_run(case_i_state(3), ListOracle([bad]))
    assert info.value.step == 1


def test_cycle_policy_repeats_the_list():
    a = GradedMatrix.zero(F5, (0, 0), (-1, -1))
    b = GradedMatrix.zero(F5, (0, 0), (-2, -1))
    oracle = ListOracle([a, b], RepeatPolicy.cycle)
    state = case_i_state(1)
    assert [oracle.next_matrix(k, state) for k in range(1, 4)] == [a, b, a]


def test_reduction_state_validation():
    with pytest.raises(InconsistentDescriptor):
        case_i_state(-1)
    with pytest.raises(InconsistentDescriptor):
        ReductionState(3, 1, GradedMatrix.zero(F5, (0, 0), (-1, -1)))
    with pytest.raises(InconsistentDescriptor):
        reduction_run(case_i_state(1), ListOracle([]), max_steps=0)


# ---------------------- LIE ESTIMATE AND ZARKHIN ----------------------

@pytest.mark.parametrize("p", [2, 3, 5])
def test_moret_bailly_lie_estimate(p):
    estimate = moret_bailly_lie_estimate(p)
    assert (estimate["n"], estimate["m"]) == (-p, 1)
    assert estimate["kernel_twists"] == [-1]
    assert not estimate["kernel_constant"]
    assert estimate["kernel_is_subgroup"]
    assert estimate["estimate_holds"]


def test_zarkhin_trick():
    record = zarkhin(2, 3, -3)
    assert record.dim == 16
    assert record.principally_polarized
    assert record.hodge_degree == 0
    assert zarkhin(1).hodge_degree is None
    with pytest.raises(InconsistentDescriptor):
        zarkhin(0)
