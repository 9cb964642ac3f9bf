from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from crtype.algebra import ExactScalar, HermitianPolynomial
from crtype.parser import parse_polynomial

settings.register_profile(
    "crtype", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("crtype")

KOHN_NIRENBERG = "2*Re(z1) + abs2(z2^2 - z3^3)"
DIAGONAL_46 = "2*Re(z1) + abs2(z2)^2 + abs2(z3)^3"
QUADRIC = "2*Re(z1) + abs2(z2)"
QUARTIC = "2*Re(z1) + abs2(z2)^2"


@pytest.fixture
def parse():
    return parse_polynomial


SMALL = [Fraction(x) for x in (-2, -1, Fraction(-1, 2), Fraction(1, 3), 1, 2)]


def scalars():
    return st.builds(ExactScalar, st.sampled_from(SMALL + [Fraction(0)]), st.sampled_from(SMALL + [Fraction(0)]))


@st.composite
def polynomials(draw, n=None, max_degree=4, max_terms=4):
    n = draw(st.integers(1, 3)) if n is None else n
    count = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(count):
        exps = draw(st.lists(st.integers(0, max_degree), min_size=2 * n, max_size=2 * n))
        while sum(exps) > max_degree:
            k = max(range(2 * n), key=lambda i: exps[i])
            exps[k] -= 1
        terms[tuple(exps)] = draw(scalars())
    return HermitianPolynomial(n, terms)


@st.composite
def real_polynomials(draw, n=None, max_degree=4, max_terms=4):
    p = draw(polynomials(n, max_degree, max_terms))
    return p + p.conjugate()


@st.composite
def points(draw, n):
    return tuple(draw(scalars()) for _ in range(n))
