from __future__ import annotations

from fractions import Fraction

import pytest

from conftest import DIAGONAL_46, KOHN_NIRENBERG, QUADRIC, QUARTIC

from crtype.algebra import INF
from crtype.errors import PreconditionError
from crtype.parser import parse_polynomial as parse
from crtype.verify import (
    boundary_samples,
    choice_independence_check,
    lowest_stratum_scan,
    main_bound_check,
    model_type,
    semicontinuity_scan,
    truncation_invariance_check,
)

F = Fraction


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_tight_family(m):
    rep = main_bound_check(parse(f"2*Re(z1) + abs2(z2)^{m}", 2), 1, t=2 * m, t_source="model")
    assert rep.order == 2 * m - 2 == rep.bound and rep.verdict == "holds" and rep.tight
    assert rep.certification == "verified"


def test_strict_family_example():
    rep = main_bound_check(parse(DIAGONAL_46, 3), 1, t=6, t_source="model")
    assert (rep.order, rep.bound, rep.verdict) == (6, 16, "holds")


def test_infinite_type_inapplicable():
    rep = main_bound_check(parse(KOHN_NIRENBERG, 3), 1)
    assert rep.t is INF and rep.verdict == "inapplicable" and rep.bound is None
    assert rep.trace["witness"] == ["0", "t^3", "t^2"]


def test_searched_t_is_only_consistent():
    rep = main_bound_check(parse(DIAGONAL_46, 3), 2)
    assert rep.t == 4 and rep.certification == "consistent" and rep.verdict == "holds"


def test_model_type_detection():
    r = parse(DIAGONAL_46, 3)
    assert model_type(r, 1) == 6 and model_type(r, 2) == 4
    assert model_type(parse("2*Re(z1) + abs2(z2)^2", 3), 1) is INF
    assert model_type(parse(KOHN_NIRENBERG, 3), 1) is None


def test_bound_check_preconditions():
    r = parse(QUARTIC, 2)
    with pytest.raises(PreconditionError):
        main_bound_check(r, 2)
    with pytest.raises(PreconditionError):
        main_bound_check(r, 1, point=(1, 1))
    with pytest.raises(PreconditionError):
        main_bound_check(r, 1, t_source="asserted")


def test_truncation_identity():
    r = parse(DIAGONAL_46, 3)
    rep = truncation_invariance_check(r, 1, t=6)
    assert rep["invariant"] and [row["degree"] for row in rep["truncations"]] == [6]


def test_truncation_with_higher_perturbation():
    r = parse(DIAGONAL_46 + " + z2^4*conj(z2)^3 + z2^3*conj(z2)^4", 3)
    rep = truncation_invariance_check(r, 1, t=6)
    assert rep["invariant"] and all(row["type"] == 6 for row in rep["truncations"])


def test_truncation_of_infinite_type_input():
    rep = truncation_invariance_check(parse(KOHN_NIRENBERG, 3), 1, t="inf", degrees=[4])
    assert rep["expected_change"] and rep["invariant"] is None
    row = rep["truncations"][0]
    # the surviving |z2|^4 block does not involve z3, so the determinant stays zero
    assert row["order"] is INF and row["verdict"] == "inapplicable"


def test_choice_independence():
    rep = choice_independence_check(parse(KOHN_NIRENBERG, 3), 1, trials=4)
    assert rep["identical"] and rep["reference"] == (1, 4, 6)
    assert choice_independence_check(parse(QUARTIC, 2), trials=4)["reference"] == (1, 4)
    assert choice_independence_check(parse(QUADRIC, 2), trials=2)["reference"] == (1, 2)


def test_boundary_samples_lie_on_hypersurface():
    r = parse(KOHN_NIRENBERG, 3)
    pts = boundary_samples(r, 10, seed=3)
    assert len(pts) == 10 and all(not r.evaluate(p) for p in pts)
    assert pts == boundary_samples(r, 10, seed=3)


def test_lowest_stratum_examples():
    rep = lowest_stratum_scan(parse(DIAGONAL_46, 3), 1, samples=10, seed=0)
    assert rep["minimum"] == (1, 2, 2) and rep["is_lowest"] and rep["levi_finite_at_minimizer"]
    rep = lowest_stratum_scan(parse("2*Re(z1) + abs2(z2) + abs2(z3)", 3), 1, samples=5)
    assert all(row["ctype"] == (1, 2, 2) for row in rep["rows"])
    rep = lowest_stratum_scan(parse(KOHN_NIRENBERG, 3), 1, samples=10, seed=0)
    assert rep["minimum"] == (1, 2, INF) and not rep["is_lowest"] and rep["failures"] == 0


@pytest.mark.parametrize("text", [QUARTIC, DIAGONAL_46, KOHN_NIRENBERG])
def test_semicontinuity_samples(text):
    rep = semicontinuity_scan(parse(text), 1, samples=8, seed=1)
    assert rep["holds"] and rep["violations"] == 0
