# tests/test_groupschemes.py
import pytest

from exact_algebra import FieldSpec, Form, matrix_to_ints
from exceptions import (
    FVNotZero,
    InvalidBundle,
    NotConstant,
    NotEquivariant,
    NotLocalLocal,
    NotSaturated,
    NotSlopeZero,
    NotTrivialAmbient,
)
from groupschemes import (
    ConstantGroupDatum,
    DieudonneModule,
    RestrictedLieBundle,
    alpha_filtration,
    compose_constant,
    constancy_descend,
    constant_to_lie_bundle,
    free_slope0_split,
    frobenius_factors,
    graded_pieces,
    is_constant_morphism,
    lie_kernel,
    local_local_test,
    moret_bailly_H,
)
from engine import moret_bailly_lie_map
from sheafmaps import GradedMatrix, Subsheaf

F5 = FieldSpec(5)
F2 = FieldSpec(2)


# ---------------------- DIEUDONNE MODULES ----------------------

def test_alpha_p_is_local_local_with_a_one_step_flag():
    M = DieudonneModule.alpha_p(F5)
    assert local_local_test(M)
    assert alpha_filtration(M) == [[[1]]]
    assert graded_pieces(M) == [(0, 0)]


@pytest.mark.parametrize("build", [DieudonneModule.mu_p, DieudonneModule.constant_z_p])
def test_multiplicative_and_etale_are_not_local_local(build):
    M = build(F5)
    assert not local_local_test(M)
    with pytest.raises(NotLocalLocal) as info:
        alpha_filtration(M)
    assert info.value.exit_code == 2


def test_f_v_must_compose_to_zero():
    with pytest.raises(FVNotZero):
        DieudonneModule.from_ints(F5, [[1]], [[1]])


def test_two_dimensional_flag_starts_at_the_kernel_of_f():
    M = DieudonneModule.from_ints(F2, [[0, 1], [0, 0]], [[0, 0], [0, 0]])
    assert local_local_test(M)
    assert alpha_filtration(M) == [[[1, 0]], [[1, 0], [0, 1]]]
    assert graded_pieces(M) == [(0, 0), (0, 0)]


def test_square_zero_f_equal_to_v():
    N = [[0, 0], [1, 0]]
    M = DieudonneModule.from_ints(F5, N, N)
    assert local_local_test(M)
    flag = alpha_filtration(M)
    assert flag[0] == [[0, 1]]
    assert flag == [[[0, 1]], [[1, 0], [0, 1]]]
    assert graded_pieces(M) == [(0, 0), (0, 0)]


def test_dieudonne_over_f4():
    F4 = FieldSpec(2, 2)
    M = DieudonneModule.from_ints(F4, [[0, 0], [1, 0]], [[0, 0], [0, 0]])
    assert local_local_test(M)
    assert len(alpha_filtration(M)) == 2


# ---------------------- RESTRICTED LIE BUNDLES ----------------------

def test_pmap_must_start_at_the_frobenius_pullback():
    with pytest.raises(InvalidBundle):
        RestrictedLieBundle(GradedMatrix.zero(F5, (1,), (1,)))


def test_kernel_of_a_projection_is_constant():
    f = GradedMatrix(F5, (0, 0), (0, -2), ((Form.constant(F5, 1), Form.zero(F5)), (Form.zero(F5), Form.zero(F5))))
    L1 = RestrictedLieBundle.zero_pmap(F5, (0, 0))
    L2 = RestrictedLieBundle.zero_pmap(F5, (0, -2))
    kernel = lie_kernel(f, L1, L2)
    assert kernel.twists == (0,)
    assert kernel.is_constant
    assert kernel.pmap.is_zero()
    datum = constancy_descend(kernel)
    assert datum.dim == 1
    assert matrix_to_ints(datum.pmat) == [[0]]


def test_non_equivariant_morphism_is_refused():
    f = GradedMatrix.constant(F5, 0, [[1, 0], [0, 0]])
    L1 = RestrictedLieBundle(GradedMatrix.constant(F5, 0, [[1, 0], [0, 1]]))
    L2 = RestrictedLieBundle.zero_pmap(F5, (0, 0))
    with pytest.raises(NotEquivariant):
        lie_kernel(f, L1, L2)


def test_moret_bailly_subgroup_is_not_constant():
    H = moret_bailly_H(5)
    assert H.twists == (-1,)
    assert not H.is_constant
    with pytest.raises(NotConstant):
        constancy_descend(H)
    kernel = lie_kernel(moret_bailly_lie_map(5), RestrictedLieBundle.zero_pmap(F5, (0, 0)),
                        RestrictedLieBundle.zero_pmap(F5, (-5, 1)))
    assert kernel.twists == H.twists


def test_constant_data_round_trip_through_lie_bundles():
    D = ConstantGroupDatum(F5, F5.GF([[0, 1], [0, 0]]))
    assert constancy_descend(constant_to_lie_bundle(D)) == D


def test_constant_morphisms_compose():
    GF = F5.GF
    D = ConstantGroupDatum(F5, GF([[0, 1], [0, 0]]))
    identity = GF.Identity(2)
    assert is_constant_morphism(identity, D, D)
    assert matrix_to_ints(compose_constant(identity, identity, D, D, D)) == [[1, 0], [0, 1]]
    zero = ConstantGroupDatum(F5, GF.Zeros((2, 2)))
    with pytest.raises(NotEquivariant):
        compose_constant(identity, GF([[1, 0], [0, 0]]), ConstantGroupDatum(F5, GF.Identity(2)), zero, zero)


def test_frobenius_factorization_depends_on_the_lie_map():
    assert frobenius_factors(GradedMatrix.zero(F5, (0, 0), (-5, 1)))
    assert not frobenius_factors(moret_bailly_lie_map(5))


# ---------------------- SLOPE-ZERO SUBBUNDLES ----------------------

def test_constant_line_in_the_trivial_plane_splits():
    S = Subsheaf(GradedMatrix.constant(F5, 0, [[1], [2]]))
    split = free_slope0_split(S)
    assert split.rank == 1
    assert matrix_to_ints(split.generators.T) == [[1, 2]]
    assert matrix_to_ints(split.complement) == [[0], [1]]


def test_slope_zero_split_preconditions():
    U, V = Form.U(F5), Form.V(F5)
    with pytest.raises(NotTrivialAmbient):
        free_slope0_split(Subsheaf(GradedMatrix.zero(F5, (0,), (1, 0))))
    with pytest.raises(NotSaturated):
        free_slope0_split(Subsheaf(GradedMatrix(F5, (-2,), (0, 0), ((U * U,), (U * V,)))))
    with pytest.raises(NotSlopeZero):
        free_slope0_split(Subsheaf(moret_bailly_H(5).embedding))
