from __future__ import annotations

from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import KOHN_NIRENBERG, polynomials, real_polynomials
from oracle import bordered_hessian

from crtype.algebra import INF, HermitianPolynomial as H
from crtype.errors import PreconditionError
from crtype.forms import (
    Form,
    bordered_hessian_det,
    complex_hessian,
    d_antiholo,
    d_holo,
    levi_coefficients,
    levi_kernel_dim,
    levi_matrix,
    levi_rank_at,
    levi_slots,
    levi_vanishing_order,
    wedge,
)
from crtype.parser import parse_polynomial as parse


def fn(text, n):
    return Form.function(parse(text, n))


# exterior derivatives

def test_d_of_linear_term():
    assert d_holo(fn("2*Re(z1)", 2)) == Form.dz(1, 2)


def test_sign_anchor():
    f = fn("z2*conj(z2)", 2)
    dz2_dzb2 = wedge(Form.dz(2, 2), Form.dzbar(2, 2))
    assert d_holo(d_antiholo(f)) == dz2_dzb2
    assert d_antiholo(d_holo(f)) == -dz2_dzb2


def test_ddbar_quartic():
    f = fn("abs2(z2)^2", 2)
    want = wedge(Form.dz(2, 2), Form.dzbar(2, 2)).scale(parse("4*z2*conj(z2)", 2))
    assert d_holo(d_antiholo(f)) == want


# wedge

def test_wedge_examples():
    w = wedge(Form.dz(1, 2), Form.dzbar(1, 2))
    assert w.coefficients == {((1,), (1,)): H.constant(2, 1)}
    assert wedge(Form.dz(2, 2), Form.dz(2, 2)).is_zero()


def test_quadric_top_form():
    n = 2
    dr = Form.dz(1, n) + Form.dz(2, n).scale(H.zbar(2, n))
    dbr = Form.dzbar(1, n) + Form.dzbar(2, n).scale(H.z(2, n))
    top = wedge(wedge(dr, dbr), wedge(Form.dz(2, n), Form.dzbar(2, n)))
    # dz1 ^ dzbar1 ^ dz2 ^ dzbar2 = -dz1 ^ dz2 ^ dzbar1 ^ dzbar2 in storage order
    assert top.coefficient((1, 2), (1, 2)) == H.constant(n, -1)


def test_wedge_beyond_top_degree_vanishes():
    a = wedge(Form.dz(1, 1), Form.dzbar(1, 1))
    assert wedge(a, Form.dz(1, 1)).is_zero()


# Levi coefficients

def test_levi_coefficient_examples():
    assert levi_coefficients(parse("2*Re(z1) + abs2(z2)", 2), 1) == [H.constant(2, 1)]
    assert levi_coefficients(parse("2*Re(z1) + abs2(z2)^2", 2), 1) == [parse("4*z2*conj(z2)", 2)]
    assert all(c.is_zero() for c in levi_coefficients(parse(KOHN_NIRENBERG, 3), 1))


def test_levi_coefficient_counts():
    r = parse("2*Re(z1) + abs2(z2)^2 + abs2(z3)^3", 3)
    assert len(levi_coefficients(r, 1)) == 1
    assert len(levi_coefficients(r, 2)) == 9 == len(levi_slots(3, 2))
    assert min(c.vanishing_order() for c in levi_coefficients(r, 2)) == 2


def test_levi_order_examples():
    assert levi_vanishing_order(parse("2*Re(z1) + abs2(z2)", 2), 1) == 0
    assert levi_vanishing_order(parse("2*Re(z1) + abs2(z2)^2", 2), 1) == 2
    assert levi_vanishing_order(parse(KOHN_NIRENBERG, 3), 1) is INF


def test_levi_rejects_bad_q_and_complex_input():
    r = parse("2*Re(z1) + abs2(z2)", 2)
    with pytest.raises(PreconditionError):
        levi_coefficients(r, 2)
    with pytest.raises(PreconditionError):
        levi_coefficients(r, 0)
    with pytest.raises(PreconditionError):
        levi_coefficients(parse("z1 + abs2(z2)", 2), 1)


# bordered Hessian

def test_bordered_hessian_examples():
    c = bordered_hessian_det(parse("2*Re(z1) + abs2(z2)", 2))
    assert c.degree() == 0 and c
    assert bordered_hessian_det(parse("2*Re(z1)", 2)).is_zero()
    assert bordered_hessian_det(parse(KOHN_NIRENBERG, 3)).vanishing_order() is INF


@settings(max_examples=30)
@given(real_polynomials(n=2, max_degree=3))
def test_bordered_hessian_matches_sympy(r):
    assert bordered_hessian_det(r) == bordered_hessian(r)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_levi_to_bordered_constant(n):
    # the constant is -(n-1)! in this orientation
    r = parse("2*Re(z1) + " + " + ".join(f"abs2(z{j})" for j in range(2, n + 1)), n)
    (lc,) = levi_coefficients(r, 1)
    bh = bordered_hessian_det(r)
    assert lc == bh.scale(-factorial(n - 1))


@given(real_polynomials(n=3, max_degree=4))
def test_levi_is_proportional_to_bordered_hessian(r):
    (lc,) = levi_coefficients(r, 1)
    assert lc == bordered_hessian_det(r).scale(-2)


# Levi rank

def test_levi_rank_examples():
    assert levi_rank_at(parse("2*Re(z1) + abs2(z2) + abs2(z3)", 3)) == 2
    r = parse(KOHN_NIRENBERG, 3)
    assert levi_rank_at(r) == 0 and levi_kernel_dim(r) == 2
    assert levi_rank_at(r, (Fraction(-1, 2), 1, 0)) == 1


def test_levi_rank_preconditions():
    r = parse(KOHN_NIRENBERG, 3)
    with pytest.raises(PreconditionError):
        levi_rank_at(r, (1, 0, 0))
    with pytest.raises(PreconditionError):
        levi_rank_at(parse("abs2(z1) - abs2(z2)", 2))


# property suite

def one_forms(n):
    coeffs = st.lists(polynomials(n=n, max_degree=2, max_terms=2), min_size=n, max_size=n)
    return st.tuples(coeffs, coeffs).map(lambda ab: _mixed(n, ab))


def _mixed(n, ab):
    holo = Form(n, 1, 0)
    for j, a in enumerate(ab[0]):
        holo = holo + Form.dz(j + 1, n).scale(a)
    anti = Form(n, 0, 1)
    for j, b in enumerate(ab[1]):
        anti = anti + Form.dzbar(j + 1, n).scale(b)
    return holo, anti


@given(one_forms(3), one_forms(3))
def test_wedge_graded_antisymmetry(x, y):
    for a in x:
        for b in y:
            assert wedge(a, b) == -wedge(b, a)
    two = wedge(x[0], x[1])
    for b in y:
        assert wedge(two, b) == wedge(b, two)


@given(polynomials(n=3))
def test_d_squares_vanish(f):
    w = Form.function(f)
    assert d_holo(d_holo(w)).is_zero()
    assert d_antiholo(d_antiholo(w)).is_zero()
    assert d_holo(d_antiholo(w)) == -d_antiholo(d_holo(w))


@given(one_forms(2))
def test_d_squares_vanish_on_one_forms(x):
    for a in x:
        assert d_holo(d_holo(a)).is_zero()
        assert d_antiholo(d_antiholo(a)).is_zero()
        assert d_holo(d_antiholo(a)) == -d_antiholo(d_holo(a))


@settings(max_examples=60)
@given(real_polynomials(n=3, max_degree=3))
def test_hessian_is_hermitian(r):
    h = complex_hessian(r)
    assert all(h[i][j] == h[j][i].conjugate() for i in range(3) for j in range(3))


@settings(max_examples=60)
@given(real_polynomials(n=3, max_degree=3))
def test_levi_coefficients_conjugation_consistent(r):
    slots = levi_slots(3, 2)
    coeffs = dict(zip(slots, levi_coefficients(r, 2)))
    # conj(dr ^ dbar r ^ ddbar r) = dbar r ^ dr ^ dbar d r = dr ^ dbar r ^ ddbar r
    for (I, J), c in coeffs.items():
        assert c == coeffs[(J, I)].conjugate()


def test_levi_matrix_hermitian_for_kohn_nirenberg():
    assert levi_matrix(parse(KOHN_NIRENBERG, 3)).is_hermitian()
