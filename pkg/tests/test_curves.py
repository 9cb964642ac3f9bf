from __future__ import annotations

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import DIAGONAL_46, KOHN_NIRENBERG, real_polynomials

from crtype.algebra import INF, ExactScalar, HermitianPolynomial as H
from crtype.curves import (
    LCG,
    CurveJet,
    LinearEmbedding,
    contact_ratio,
    one_type_search,
    pullback,
    q_type_estimate,
    restrict_to_embedding,
)
from crtype.errors import PreconditionError
from crtype.parser import parse_polynomial as parse


def t_power(a, b):
    return H(1, {(a, b): 1})


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_pullback_model(m):
    r = parse(f"2*Re(z1) + abs2(z2)^{m}", 2)
    assert pullback(r, CurveJet.monomial([0, 1])) == t_power(m, m)


def test_pullback_kohn_nirenberg_curve_vanishes():
    r = parse(KOHN_NIRENBERG, 3)
    assert pullback(r, CurveJet.monomial([0, 3, 2])).is_zero()


def test_constant_curve_pulls_back_to_value():
    r = parse("2*Re(z1) + abs2(z2)", 2)
    phi = CurveJet(((), ()), (1, 1))
    assert pullback(r, phi) == H.constant(1, 3)
    with pytest.raises(PreconditionError):
        contact_ratio(r, phi)


def test_contact_ratio_examples():
    assert contact_ratio(parse("2*Re(z1) + abs2(z2)", 2), CurveJet.monomial([0, 1])) == 2
    assert contact_ratio(parse("2*Re(z1) + abs2(z2)^2", 2), CurveJet.monomial([0, 1])) == 4
    assert contact_ratio(parse(KOHN_NIRENBERG, 3), CurveJet.monomial([0, 3, 2])) is INF


def test_curve_constant_term_rejected():
    with pytest.raises(ValueError):
        CurveJet(((1, 1),))


def test_one_type_search_examples():
    res = one_type_search(parse("2*Re(z1) + abs2(z2)^2", 2), degree_bound=1)
    assert res.value == 4 and res.witness.describe() == ["0", "t"]
    res = one_type_search(parse(KOHN_NIRENBERG, 3), degree_bound=3)
    assert res.value is INF and res.witness.describe() == ["0", "t^3", "t^2"]
    assert one_type_search(parse("2*Re(z1) + abs2(z2)", 2)).value == 2


def test_one_type_search_off_origin():
    r = parse("2*Re(z1) + abs2(z2)^2", 2)
    with pytest.raises(PreconditionError):
        one_type_search(r, (1, 0))
    res = one_type_search(r, (ExactScalar(-1, 0) / 2, 1))
    # monomial curves in the given coordinates are transverse here: lower bound only
    assert res.value == 1
    assert res.witness.basepoint[1] == ExactScalar(1)


def test_q_type_examples():
    assert q_type_estimate(parse("2*Re(z1) + abs2(z2) + abs2(z3)", 3), 1).value == 2
    r = parse(DIAGONAL_46, 3)
    assert q_type_estimate(r, 1).value == 6
    assert q_type_estimate(r, 2).value == 4
    with pytest.raises(PreconditionError):
        q_type_estimate(r, 3)


def test_q_type_is_deterministic():
    r = parse(DIAGONAL_46, 3)
    a = q_type_estimate(r, 2, seed=7, trials=4)
    b = q_type_estimate(r, 2, seed=7, trials=4)
    assert a.per_trial == b.per_trial and a.embeddings == b.embeddings


def test_lcg_sequence():
    gen = LCG(0)
    assert gen.next() == 1013904223
    assert gen.next() == (1664525 * 1013904223 + 1013904223) % 2**32
    assert all(-2 <= LCG(s).grid() <= 2 for s in range(50))


def test_embedding_rank_checked():
    with pytest.raises(PreconditionError):
        LinearEmbedding(((1, 2), (2, 4)), (0, 0))


def test_restriction_along_coordinate_plane():
    r = parse(DIAGONAL_46, 3)
    emb = LinearEmbedding(((ExactScalar(1), ExactScalar(0)), (ExactScalar(0), ExactScalar(1)), (ExactScalar(0), ExactScalar(0))), (0, 0, 0))
    assert restrict_to_embedding(r, emb) == parse("2*Re(z1) + abs2(z2)^2", 2)


# invariants

curve_exps = st.lists(st.integers(0, 3), min_size=2, max_size=2).filter(any)


@given(real_polynomials(n=2, max_degree=4), curve_exps, st.integers(1, 3))
def test_ratio_invariant_under_reparametrization(r, exps, k):
    assume(r and not r.constant_term())
    phi = CurveJet.monomial(exps)
    assert contact_ratio(r, phi.reparametrize(k)) == contact_ratio(r, phi)


@pytest.mark.parametrize("text", ["2*Re(z1) + abs2(z2)^2", DIAGONAL_46, "2*Re(z1) + abs2(z2)^2 + abs2(z3)^4"])
def test_search_monotone_in_bounds(text):
    r = parse(text)
    base = one_type_search(r, degree_bound=1).value
    bigger = one_type_search(r, degree_bound=2).value
    wider = one_type_search(r, degree_bound=2, support_bound=2).value
    richer = one_type_search(r, degree_bound=2, coeff_set=(1, -1)).value
    assert base <= bigger <= wider and bigger <= richer


@pytest.mark.parametrize("a, b", [(2, 3), (2, 4), (3, 3)])
def test_finite_determination(a, b):
    r = parse(f"2*Re(z1) + abs2(z2)^{a} + abs2(z3)^{b} + z2^{a}*conj(z2)^{a}*z3*conj(z3)")
    t = 2 * max(a, b)
    assert one_type_search(r).value == one_type_search(r.truncate_degree(t)).value
    assert q_type_estimate(r, 2, trials=4).value == q_type_estimate(r.truncate_degree(t), 2, trials=4).value
