from __future__ import annotations

import pytest
from hypothesis import given

from conftest import KOHN_NIRENBERG, polynomials

from crtype.algebra import ExactScalar, HermitianPolynomial as H
from crtype.errors import ParseError
from crtype.parser import Func, Neg, Pow, parse_expression, parse_polynomial, serialize


def test_kohn_nirenberg_expands():
    r = parse_polynomial(KOHN_NIRENBERG)
    assert r.n == 3
    assert serialize(r) == (
        "z1 + conj(z1) + z2^2*conj(z2)^2 - z2^2*conj(z3)^3 - z3^3*conj(z2)^2 + z3^3*conj(z3)^3"
    )


def test_zero_and_power_of_real_factor():
    assert parse_polynomial("0").is_zero()
    assert parse_polynomial("abs2(z2)^2") == H.monomial((0, 2), (0, 2))


def test_re_im_abs2_lowering():
    z = H.z(1, 1)
    assert parse_polynomial("Re(z1)") == (z + z.conjugate()) / 2
    assert parse_polynomial("Im(z1)") == (z - z.conjugate()) / ExactScalar(0, 2)
    assert parse_polynomial("abs2(1 + i*z1)") == parse_polynomial("(1 + i*z1)*conj(1 + i*z1)")


def test_precedence():
    assert parse_polynomial("-z1^2") == -(H.z(1, 1) ** 2)
    assert parse_polynomial("2*z1 + 3*z1*z1") == parse_polynomial("3*z1^2 + 2*z1")
    assert parse_polynomial("z1**2") == parse_polynomial("z1^2")
    assert parse_polynomial("{z1 + 1}^2") == parse_polynomial("(z1 + 1)^2")
    node = parse_expression("-z1^2")
    assert isinstance(node, Neg) and isinstance(node.arg, Pow)
    assert isinstance(parse_expression("conj(z2)"), Func)


def test_division_by_constant():
    assert parse_polynomial("z1/2 + z1/2") == H.z(1, 1)
    with pytest.raises(ParseError):
        parse_polynomial("1/z1")
    with pytest.raises(ParseError):
        parse_polynomial("z1/0")


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("z1 + foo", 1, 6),
        ("z1 +\n  * z2", 2, 3),
        ("z1^2^3", 1, 5),
        ("(z1 + z2", 1, 9),
        ("z1 $ z2", 1, 4),
        ("", 1, 1),
    ],
)
def test_errors_carry_positions(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_polynomial(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_variable_beyond_declared_dimension():
    with pytest.raises(ParseError) as info:
        parse_polynomial("z1 + z4", 3)
    assert "exceeds" in info.value.message and info.value.column == 6


def test_complex_coefficient_round_trip():
    p = parse_polynomial("(1/2 - 3*i)*z1*conj(z2) + i*z2 - 2*i")
    assert parse_polynomial(serialize(p), 2) == p


@given(polynomials())
def test_round_trip(p):
    text = serialize(p)
    again = parse_polynomial(text, p.n)
    assert again == p
    assert serialize(again) == text
