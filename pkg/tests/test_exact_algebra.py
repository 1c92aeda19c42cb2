# tests/test_exact_algebra.py
import pytest
from hypothesis import assume, given, settings, strategies as st

from exact_algebra import (
    FieldSpec,
    Form,
    RatFunc,
    RatMatrix,
    clear_denominators,
    form_gcd,
    frobenius,
    frobenius_twist,
    poly_det,
    poly_from_ascending,
    poly_kernel,
    poly_matmul,
    poly_rank,
    poly_zero,
    pth_root,
    rat_kernel,
)
from exceptions import AllZero, InvalidField

F5 = FieldSpec(5)


def coeff_lists(max_degree=4):
    return st.integers(0, max_degree).flatmap(
        lambda d: st.lists(st.integers(0, 4), min_size=d + 1, max_size=d + 1)
    )


# ---------------------- FIELDS ----------------------

@pytest.mark.parametrize("p, m", [(4, 1), (1, 1), (5, 0), (9, 2)])
def test_invalid_fields_are_refused(p, m):
    with pytest.raises(InvalidField):
        FieldSpec(p, m)


def test_field_orders():
    assert FieldSpec(5).order == 5
    assert FieldSpec(2, 3).order == 8
    assert FieldSpec(5).modulus() is None
    assert FieldSpec(2, 2).modulus() is not None


def test_frobenius_is_trivial_on_the_prime_field():
    GF = F5.GF
    x = GF([0, 1, 2, 3, 4])
    assert (frobenius(x, F5) == x).all()


def test_frobenius_over_f4_has_order_two():
    F4 = FieldSpec(2, 2)
    x = F4.GF([0, 1, 2, 3])
    once = frobenius(x, F4)
    assert not (once == x).all()
    assert (frobenius(once, F4) == x).all()
    assert (pth_root(once, F4) == x).all()


# ---------------------- FORMS ----------------------

def test_form_coefficients_follow_u_power_descending():
    f = Form.from_coeffs(F5, [1, 2])
    assert f.degree == 1
    assert f.coeffs == [1, 2]
    assert f == Form.U(F5) + Form.V(F5) * 2


def test_zero_form_has_no_degree():
    assert Form.from_coeffs(F5, [0, 0]).is_zero
    assert Form.zero(F5).degree is None
    assert Form.from_coeffs(F5, [6]) == Form.constant(F5, 1)


def test_products_and_u_valuation():
    U, V = Form.U(F5), Form.V(F5)
    assert (U * V).coeffs == [0, 1, 0]
    assert (U * U).u_valuation == 2
    assert V.u_valuation == 0
    assert (U * V).to_text() == "UV"


def test_gcd_of_u_squared_and_uv_is_u():
    U, V = Form.U(F5), Form.V(F5)
    assert form_gcd([U * U, U * V]) == U
    assert form_gcd([U * U, V * V]) == Form.constant(F5, 1)


def test_gcd_of_nothing_raises():
    with pytest.raises(AllZero):
        form_gcd([Form.zero(F5)])


def test_divisibility():
    U, V = Form.U(F5), Form.V(F5)
    assert U.divides(U * V)
    assert not V.divides(U * U)
    assert (U * V).exact_div(U) == V


def test_frobenius_twist_of_a_linear_form():
    f = Form.U(F5) + Form.V(F5)
    twisted = frobenius_twist(f, 1)
    assert twisted.degree == 5
    assert twisted == Form.from_coeffs(F5, [1, 0, 0, 0, 0, 1])


@settings(max_examples=60, deadline=None)
@given(coeff_lists(), coeff_lists())
def test_product_degree_is_additive(a, b):
    f, g = Form.from_coeffs(F5, a), Form.from_coeffs(F5, b)
    product = f * g
    if f.is_zero or g.is_zero:
        assert product.is_zero
    else:
        assert product.degree == f.degree + g.degree


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 3).flatmap(lambda d: st.tuples(
    st.lists(st.integers(0, 4), min_size=d + 1, max_size=d + 1),
    st.lists(st.integers(0, 4), min_size=d + 1, max_size=d + 1),
)))
def test_addition_commutes(pair):
    f, g = Form.from_coeffs(F5, pair[0]), Form.from_coeffs(F5, pair[1])
    assert f + g == g + f
    assert (f - f).is_zero


def test_frobenius_twist_over_f2_and_identity():
    F2 = FieldSpec(2)
    f = Form.U(F2) + Form.V(F2)
    assert frobenius_twist(f, 1) == Form.U(F2) * Form.U(F2) + Form.V(F2) * Form.V(F2)
    assert frobenius_twist(f, 0) == f


def test_gcd_of_a_form_with_itself_is_its_monic_part():
    f = Form.from_coeffs(F5, [3, 1, 2])
    assert form_gcd([f, f]) == f.monic()


TWIST_FIELDS = [FieldSpec(5), FieldSpec(2, 2)]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(TWIST_FIELDS), st.integers(1, 2), coeff_lists(3), coeff_lists(3))
def test_frobenius_twist_is_multiplicative(field, e, a, b):
    a, b = [c % 4 for c in a], [c % 4 for c in b]
    f, g = Form.from_coeffs(field, a), Form.from_coeffs(field, b)
    assert frobenius_twist(f * g, e) == frobenius_twist(f, e) * frobenius_twist(g, e)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(TWIST_FIELDS), st.integers(1, 2), st.integers(0, 3).flatmap(lambda d: st.tuples(
    st.lists(st.integers(0, 3), min_size=d + 1, max_size=d + 1),
    st.lists(st.integers(0, 3), min_size=d + 1, max_size=d + 1),
)))
def test_frobenius_twist_is_additive(field, e, pair):
    f, g = Form.from_coeffs(field, pair[0]), Form.from_coeffs(field, pair[1])
    assert frobenius_twist(f + g, e) == frobenius_twist(f, e) + frobenius_twist(g, e)


@settings(max_examples=60, deadline=None)
@given(coeff_lists(3), coeff_lists(3), coeff_lists(2))
def test_gcd_pulls_out_a_common_factor(a, b, c):
    f, g, h = Form.from_coeffs(F5, a), Form.from_coeffs(F5, b), Form.from_coeffs(F5, c)
    assume(not f.is_zero and not h.is_zero)
    assert form_gcd([f * h, g * h]) == (h * form_gcd([f, g])).monic()


# ---------------------- POLYNOMIAL MATRICES ----------------------

def test_rank_and_kernel_over_k_t():
    t = poly_from_ascending(F5, [0, 1])
    one = poly_from_ascending(F5, [1])
    rows = [[t, t * t], [one, t]]
    assert poly_rank(rows, 2, F5) == 1
    kernel = poly_kernel(rows, 2, F5)
    assert len(kernel) == 1
    product = poly_matmul(rows, [[x] for x in kernel[0]], F5)
    assert all(entry[0] == poly_from_ascending(F5, [0]) for entry in product)


def test_determinant():
    t = poly_from_ascending(F5, [0, 1])
    one = poly_from_ascending(F5, [1])
    assert poly_det([[t, one], [one, t]], F5) == t * t - one


# ---------------------- FUNCTION FIELD ----------------------

def times(M: RatMatrix, vector):
    out = []
    for row in M.entries:
        acc = RatFunc.from_poly(poly_zero(M.field))
        for entry, x in zip(row, vector):
            acc = acc + entry * x
        out.append(acc)
    return out


def test_kernel_of_a_row_with_a_pole():
    t = poly_from_ascending(F5, [0, 1])
    one = poly_from_ascending(F5, [1])
    M = RatMatrix(F5, ((RatFunc.make(one, t), RatFunc.from_poly(one)),), 2)
    kernel = rat_kernel(M)
    assert len(kernel) == 1
    assert all(x.is_zero for x in times(M, kernel[0]))
    assert clear_denominators(kernel[0]) == [t, -one]


def test_clearing_denominators_leaves_a_primitive_vector():
    t = poly_from_ascending(F5, [0, 1])
    one = poly_from_ascending(F5, [1])
    vector = [RatFunc.make(one, t), RatFunc.make(one * 3, t * t)]
    assert clear_denominators(vector) == [t, one * 3]


def test_injective_matrix_has_no_rational_kernel():
    one = poly_from_ascending(F5, [1])
    zero = poly_zero(F5)
    assert rat_kernel(RatMatrix.from_poly_rows(F5, [[one, zero], [zero, one]])) == []


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(coeff_lists(2), min_size=3, max_size=3), min_size=1, max_size=3))
def test_rational_kernel_annihilates_and_has_full_dimension(rows):
    polys = [[poly_from_ascending(F5, entry) for entry in row] for row in rows]
    M = RatMatrix.from_poly_rows(F5, polys, 3)
    kernel = rat_kernel(M)
    assert len(kernel) == 3 - poly_rank(polys, 3, F5)
    for vector in kernel:
        assert all(x.is_zero for x in times(M, vector))
