# tests/test_higgs.py
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from bundles import SplitBundle
from engine import moret_bailly_family
from exact_algebra import FieldSpec, Form
from exceptions import InvalidBundle, NotSymmetric
from higgs import (
    GradedHiggs,
    HiggsBundle,
    arakelov_pipeline,
    destabilizer_search,
    dual_higgs,
    graded_from_hodge,
    higgs_hom_dimension,
    is_nilpotent,
    semistability_verdict,
    verdict_is_complete,
    w2_rule,
)
from models import HiggsVerdict, W2Rule
from sheafmaps import GradedMatrix
from sweeps import random_form, random_twists

F5 = FieldSpec(5)
ZERO, ONE = Form.zero(F5), Form.constant(F5, 1)


def nilpotent_pair() -> HiggsBundle:
    """O(1) + O(-1) with theta sending O(-1) onto O(1) (x) Omega"""
    theta = GradedMatrix(F5, (1, -1), (-1, -3), ((ZERO, ONE), (ZERO, ZERO)))
    return HiggsBundle(theta)


def random_higgs(rng: np.random.Generator, field: FieldSpec) -> HiggsBundle:
    twists = random_twists(rng, 3, -3, 3)
    if rng.random() < 0.5:
        twists = [twists[0]] * len(twists)
    target = [c - 2 for c in twists]
    entries = [[random_form(rng, field, b - a) for a in twists] for b in target]
    return HiggsBundle(GradedMatrix(field, tuple(twists), tuple(target), entries))


def is_semistable(H: HiggsBundle) -> bool:
    check = semistability_verdict(H)
    return check.verdict == HiggsVerdict.semistable and check.complete


# ---------------------- HIGGS BUNDLES ----------------------

def test_higgs_field_must_land_in_the_omega_twist():
    with pytest.raises(InvalidBundle):
        HiggsBundle(GradedMatrix.zero(F5, (0,), (0,)))


def test_zero_field_on_a_trivial_bundle_is_semistable():
    check = semistability_verdict(HiggsBundle.zero_field(F5, (0, 0)))
    assert check.verdict == HiggsVerdict.semistable
    assert check.complete
    assert check.witness is None


def test_zero_field_on_an_unstable_bundle():
    check = semistability_verdict(HiggsBundle.zero_field(F5, (2, 0)))
    assert check.verdict == HiggsVerdict.unstable
    assert check.witness.twists == (2,)
    assert check.witness.slope == 2


def test_invariant_top_summand_destabilizes():
    H = nilpotent_pair()
    assert is_nilpotent(H)
    check = semistability_verdict(H)
    assert check.verdict == HiggsVerdict.unstable
    assert check.witness.twists == (1,)
    assert check.witness.slope == Fraction(1)
    assert verdict_is_complete(H)


def test_dual_higgs_negates_twists():
    D = dual_higgs(nilpotent_pair())
    assert D.twists == (-1, 1)
    assert D.theta.target_twists == (-3, -1)


def test_hom_dimension_of_zero_fields_counts_monomials():
    H1 = HiggsBundle.zero_field(F5, (0,))
    H2 = HiggsBundle.zero_field(F5, (1,))
    assert higgs_hom_dimension(H1, H2) == 2
    assert higgs_hom_dimension(H2, H1) == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3, 5]))
def test_no_morphisms_from_semistable_to_semistable_of_lower_slope(seed, p):
    rng = np.random.default_rng(seed)
    field = FieldSpec(p)
    H1, H2 = random_higgs(rng, field), random_higgs(rng, field)
    assume(H2.slope < H1.slope)
    assume(is_semistable(H1) and is_semistable(H2))
    assert higgs_hom_dimension(H1, H2) == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3, 5]))
def test_dual_of_a_semistable_higgs_bundle_is_semistable(seed, p):
    H = random_higgs(np.random.default_rng(seed), FieldSpec(p))
    assume(is_semistable(H))
    D = dual_higgs(H)
    assert D.slope == -H.slope
    assert is_semistable(D)


# ---------------------- GRADED HIGGS ----------------------

def test_kodaira_spencer_must_be_symmetric():
    with pytest.raises(NotSymmetric):
        graded_from_hodge(F5, (-1, -1), ((ZERO, ONE), (Form.constant(F5, 2), ZERO)))
    graded_from_hodge(F5, (-1, -1), ((ZERO, ONE), (Form.constant(F5, 2), ZERO)), check_symmetry=False)


def test_graded_assembly_round_trips():
    G = moret_bailly_family(5).graded
    hodge, ks = G.project()
    assert hodge == SplitBundle.of(5, -1)
    assert ks == G.ks
    assert G.higgs.twists == (5, -1, -5, 1)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
def test_moret_bailly_graded_bundle_is_destabilized_by_o_one(p):
    G = moret_bailly_family(p).graded
    witness = destabilizer_search(G)
    assert witness.twists == (1,)
    assert witness.slope == 1
    rule, certificate = w2_rule(G)
    assert rule == W2Rule.obstruction_found
    assert certificate.twists == (1,)


# ---------------------- ARAKELOV ----------------------

def test_moret_bailly_arakelov_chain():
    report = arakelov_pipeline(moret_bailly_family(5).graded, 0)
    assert report.kernel == [5]
    assert report.cokernel_degree == -7
    assert report.chain.lhs == "8" and report.chain.rhs == "8"
    assert report.chain.holds
    assert not report.consistent
    assert report.broken_steps == ["kernel_degree", "cokernel_dual_degree", "rank_refined_bound", "final_bound"]
    assert report.symmetry_identified is True


def test_arakelov_equality_case_on_a_line_bundle():
    G = GradedHiggs(F5, (-1,), ((ONE,),))
    report = arakelov_pipeline(G, 0)
    assert report.consistent
    assert report.broken_steps == []
    assert report.symmetry_identified is True


def test_arakelov_over_an_elliptic_base():
    G = GradedHiggs(F5, (0,), ((ZERO,),))
    report = arakelov_pipeline(G, 1)
    assert report.consistent
    assert report.kernel == [0]
    assert report.cokernel_rank == 1
