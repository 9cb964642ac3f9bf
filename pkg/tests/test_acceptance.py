"""Acceptance criteria 1-7, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py`` (lines are printed even when
output is captured) or directly with ``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import random
import sys
import time
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crtype.algebra import INF, ExactScalar, HermitianPolynomial as H
from crtype.catlin import commutator_multitype
from crtype.curves import CurveJet, one_type_search, pullback, q_type_estimate
from crtype.forms import (
    Form,
    bordered_hessian_det,
    d_antiholo,
    d_holo,
    levi_coefficients,
    levi_rank_at,
    wedge,
)
from crtype.kohn import run as kohn_run
from crtype.parser import parse_polynomial as parse
from crtype.verify import (
    boundary_samples,
    lowest_stratum_scan,
    main_bound_check,
    truncation_invariance_check,
)
from crtype.weights import Weight, is_admissible_weight, lex_compare

KOHN_NIRENBERG = "2*Re(z1) + abs2(z2^2 - z3^3)"
F = Fraction
PROPERTY = settings(max_examples=200, deadline=None, derandomize=True, database=None)


class Criterion:
    """Collects named checks and timing; prints one line and asserts."""

    def __init__(self, number: int, title: str, budget: float):
        self.number, self.title, self.budget = number, title, budget
        self.failures: list[str] = []
        self.notes: list[str] = []

    def check(self, ok: bool, label: str) -> None:
        if not ok:
            self.failures.append(label)

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc is not None:
            self.failures.append(f"{exc_type.__name__}: {exc}")
        if elapsed > self.budget:
            self.failures.append(f"runtime {elapsed:.1f}s exceeds {self.budget:.0f}s")
        status = "PASS" if not self.failures else "FAIL"
        detail = "; ".join(self.failures or self.notes)
        line = f"[acceptance {self.number}] {status} {self.title} ({elapsed:.2f}s)"
        if detail:
            line += f" :: {detail}"
        _emit(line)
        if exc is None:
            assert not self.failures, line
        return False


_CAPSYS = None


def _emit(line: str) -> None:
    if _CAPSYS is not None:
        with _CAPSYS.disabled():
            print(line, flush=True)
    else:
        print(line, flush=True)


@pytest.fixture(autouse=True)
def _uncaptured(capsys):
    global _CAPSYS
    _CAPSYS = capsys
    yield
    _CAPSYS = None


# 1

def test_criterion_1_kohn_nirenberg_origin():
    with Criterion(1, "Kohn-Nirenberg example at the origin", 5.0) as c:
        r = parse(KOHN_NIRENBERG, 3)
        coeffs = levi_coefficients(r, 1)
        c.check(len(coeffs) == 1 and all(x.is_zero() for x in coeffs), "Levi determinant not identically zero")
        phi = CurveJet.monomial([0, 3, 2])
        working = 3 * r.degree() + 1
        c.check(pullback(r, phi, working).is_zero(), "pullback along (0,t^3,t^2) nonzero")
        c.check(pullback(r, phi).is_zero(), "untruncated pullback nonzero")
        res = commutator_multitype(r, 1)
        c.check(res.status == "ok" and res.prefix == (1, 4, 6), f"ctype {res.prefix}")
        c.check(levi_rank_at(r) == 0, "Levi rank at 0 is not 0")
        off = [p for p in boundary_samples(r, 5, seed=0)
               if (p[1] ** 2 - p[2] ** 3)]
        c.check(bool(off), "no off-curve sample")
        ranks = {levi_rank_at(r, p) for p in off}
        c.check(ranks == {1}, f"off-origin ranks {ranks}")
        c.notes.append(f"ctype {tuple(str(x) for x in res.prefix)}, off-origin rank 1 at {len(off)} samples")


# 2

@pytest.mark.parametrize("m0", [1, 2, 3, 4])
def test_criterion_2_tight_family(m0):
    with Criterion(2, f"tight family m0={m0}", 1.0) as c:
        r = parse(f"2*Re(z1) + abs2(z2)^{m0}", 2)
        rep = main_bound_check(r, 1, t=2 * m0, t_source="model")
        c.check(rep.order == 2 * m0 - 2, f"order {rep.order}")
        c.check(rep.bound == 2 * m0 - 2, f"bound {rep.bound}")
        c.check(rep.verdict == "holds" and rep.tight, f"verdict {rep.verdict}")
        c.notes.append(f"order {rep.order} = bound {rep.bound}")


# 3

@pytest.mark.parametrize("a, b", [(2, 3), (2, 4), (3, 3)])
def test_criterion_3_strict_family(a, b):
    with Criterion(3, f"strict family (a,b)=({a},{b})", 5.0) as c:
        r = parse(f"2*Re(z1) + abs2(z2)^{a} + abs2(z3)^{b}", 3)
        one = main_bound_check(r, 1, t=2 * b, t_source="model")
        c.check(one.order == 2 * (a - 1) + 2 * (b - 1), f"q=1 order {one.order}")
        c.check(one.bound == (2 * b - 2) ** 2 and one.verdict == "holds", f"q=1 bound {one.bound}")
        c.check(one_type_search(r).value == 2 * b, "searched 1-type differs from 2b")
        t2 = q_type_estimate(r, 2).value
        c.check(t2 == 2 * a, f"embedding search gave t={t2}")
        two = main_bound_check(r, 2, t_source="searched")
        c.check(two.t == 2 * a, f"q=2 searched t {two.t}")
        c.check(two.order == 2 * (a - 1), f"q=2 min order {two.order}")
        c.check(two.bound == 2 * a - 2 and two.verdict == "holds", f"q=2 bound {two.bound}")
        c.notes.append(f"q=1 {one.order}<={one.bound}; q=2 {two.order}<={two.bound} (t={two.t})")


# 4

def _random_real(rng: random.Random, n: int, max_degree: int = 4) -> H:
    values = [F(-2), F(-1), F(-1, 2), F(1, 3), F(1), F(2)]
    terms = {}
    for _ in range(rng.randint(2, 5)):
        exps = [0] * (2 * n)
        for _ in range(rng.randint(1, max_degree)):
            exps[rng.randrange(2 * n)] += 1
        terms[tuple(exps)] = ExactScalar(rng.choice(values), rng.choice(values + [F(0)]))
    p = H(n, terms)
    return p + p.conjugate()


def _proportionality(batch):
    constant, nonzero = None, 0
    for r in batch:
        (lc,) = levi_coefficients(r, 1)
        bh = bordered_hessian_det(r)
        if lc.vanishing_order() != bh.vanishing_order():
            return None, nonzero, "orders differ"
        if not bh:
            if lc:
                return None, nonzero, "Levi nonzero where bordered determinant vanishes"
            continue
        nonzero += 1
        exps, lead = bh.sorted_terms()[0]
        ratio = lc.coefficient(exps[:r.n], exps[r.n:]) / lead
        if constant is None:
            constant = ratio
        if lc != bh.scale(constant) or ratio != constant:
            return None, nonzero, "ratio not constant"
    return constant, nonzero, ""


def test_criterion_4_oracle_equivalence():
    with Criterion(4, "Levi coefficient vs bordered Hessian", 30.0) as c:
        rng = random.Random(20240611)
        batch3 = [_random_real(rng, 3) for _ in range(20)]
        const, nonzero, why = _proportionality(batch3)
        c.check(const is not None, f"n=3: {why}")
        c.check(nonzero >= 15, f"only {nonzero} nonzero determinants")
        c.check(const == ExactScalar(-factorial(2)), f"n=3 constant {const}")
        batch2 = [_random_real(rng, 2) for _ in range(20)]
        const2, nonzero2, why2 = _proportionality(batch2)
        c.check(const2 is not None and const2 == ExactScalar(-1), f"n=2: {why2 or const2}")
        c.notes.append(f"n=3 constant {const} over {nonzero} nonzero cases; n=2 constant {const2}")


# 5

def test_criterion_5_kohn_chain():
    with Criterion(5, "pre-radical Kohn chain", 5.0) as c:
        quad = kohn_run(parse("2*Re(z1) + abs2(z2)", 2), 1, max_steps=3)
        c.check(quad.terminated and quad.terminated_at == 1, "quadric did not terminate at step 1")
        c.check(quad.witness == H.constant(2, 1), f"witness {quad.witness}")
        quart = kohn_run(parse("2*Re(z1) + abs2(z2)^2", 2), 1, max_steps=3)
        c.check(quart.min_orders[:2] == [2, 1], f"min orders {quart.min_orders}")
        c.check(not quart.terminated, "quartic terminated pre-radical")
        kn = kohn_run(parse(KOHN_NIRENBERG, 3), 1, max_steps=3)
        c.check(not kn.terminated and set(kn.min_orders) == {INF}, f"Kohn-Nirenberg {kn.min_orders}")
        c.notes.append(f"quartic min orders {quart.min_orders}")


# 6

def _polys(n):
    values = st.sampled_from([F(-2), F(-1), F(-1, 2), F(1, 3), F(1), F(2), F(0)])
    scal = st.builds(ExactScalar, values, values)
    exps = st.lists(st.integers(0, 2), min_size=2 * n, max_size=2 * n).filter(lambda e: sum(e) <= 4)
    return st.dictionaries(exps.map(tuple), scal, max_size=4).map(lambda t: H(n, t))


@PROPERTY
@given(_polys(3), _polys(3), st.integers(0, 5))
def _algebra_properties(p, q, k):
    assert (p * q).conjugate() == p.conjugate() * q.conjugate()
    assert (p * q).diff_index(k) == p.diff_index(k) * q + p * q.diff_index(k)
    if p and q:
        assert (p * q).vanishing_order() == p.vanishing_order() + q.vanishing_order()


@PROPERTY
@given(_polys(3), _polys(3), st.integers(1, 3), st.integers(1, 3))
def _forms_properties(f, g, i, j):
    a = Form.dz(i, 3).scale(f) + Form.dz(j, 3).scale(g)
    b = Form.dzbar(i, 3).scale(g) + Form.dzbar(j, 3).scale(f)
    assert wedge(a, b) == -wedge(b, a)
    assert wedge(a, a).is_zero()
    w = Form.function(f)
    assert d_holo(d_holo(w)).is_zero() and d_antiholo(d_antiholo(w)).is_zero()
    assert d_holo(d_holo(a)).is_zero() and d_antiholo(d_antiholo(a)).is_zero()


_ENTRIES = [F(1), F(3, 2), F(2), F(3), F(4), F(6), INF]
_weights = st.lists(st.sampled_from(_ENTRIES), min_size=3, max_size=3).map(
    lambda xs: Weight(tuple(sorted(xs, key=lambda x: (x is INF, 0 if x is INF else x))))
)


@PROPERTY
@given(_weights, _weights, _weights)
def _weight_properties(a, b, c):
    assert lex_compare(a, b) == -lex_compare(b, a)
    assert (lex_compare(a, b) == 0) == (a.entries == b.entries)
    if lex_compare(a, b) <= 0 and lex_compare(b, c) <= 0:
        assert lex_compare(a, c) <= 0
    res = is_admissible_weight(a)
    for k, cert in res.certificates.items():
        assert sum(F(x) / l for x, l in zip(cert, a.entries[:k])) == 1


_MODELS = {
    KOHN_NIRENBERG: (1, 4, 6),
    "2*Re(z1) + abs2(z2)^2": (1, 4),
    "2*Re(z1) + abs2(z2)^2 + abs2(z3)^3": (1, 4, 6),
}


@PROPERTY
@given(st.sampled_from(sorted(_MODELS)), st.integers(0, 2**32 - 1))
def _choice_independence(text, seed):
    res = commutator_multitype(parse(text), 1, rng=random.Random(seed))
    assert res.status == "ok" and res.prefix == _MODELS[text]


_FAMILIES = [("2*Re(z1) + abs2(z2)^{}".format(m), 2 * m, 2) for m in (1, 2, 3)] + [
    ("2*Re(z1) + abs2(z2)^2 + abs2(z3)^3", 6, 3),
    ("2*Re(z1) + abs2(z2)^3 + abs2(z3)^3", 6, 3),
]


@PROPERTY
@given(st.sampled_from(_FAMILIES), st.integers(1, 2), st.integers(0, 2), st.fractions(-3, 3, max_denominator=7).filter(bool))
def _truncation_invariance(family, extra, var, coeff):
    text, t, n = family
    r = parse(text, n)
    j = 2 + var % (n - 1)
    # real perturbation of degree t + extra, strictly above the t-jet
    a = (t + extra) // 2
    b = t + extra - a
    mono = H.monomial(tuple(a if k == j - 1 else 0 for k in range(n)), tuple(b if k == j - 1 else 0 for k in range(n)), coeff)
    pert = r + mono + mono.conjugate()
    rep = truncation_invariance_check(pert, 1, t=t)
    assert rep["invariant"], rep


def test_criterion_6_property_suites():
    with Criterion(6, "property suites (200 cases each)", 120.0) as c:
        for name, prop in (
            ("algebra", _algebra_properties),
            ("forms", _forms_properties),
            ("weights", _weight_properties),
            ("choice independence", _choice_independence),
            ("truncation invariance", _truncation_invariance),
        ):
            t0 = time.perf_counter()
            try:
                prop()
            except Exception as exc:  # report and keep going so every suite is listed
                c.check(False, f"{name}: {type(exc).__name__}: {exc}")
            else:
                c.notes.append(f"{name} {time.perf_counter() - t0:.1f}s")


# 7

def test_criterion_7_lowest_stratum():
    with Criterion(7, "lowest-stratum scan", 30.0) as c:
        diag = parse("2*Re(z1) + abs2(z2)^2 + abs2(z3)^3", 3)
        rep = lowest_stratum_scan(diag, 1, samples=20, seed=0)
        c.check(rep["failures"] == 0, f"{rep['failures']} sample failures")
        c.check(rep["minimum"] == (1, 2, 2) and rep["is_lowest"], f"diagonal minimum {rep['minimum']}")
        c.check(rep["levi_order_at_minimizer"] == 0, f"Levi order {rep['levi_order_at_minimizer']} at minimizer")
        kn = parse(KOHN_NIRENBERG, 3)
        rep2 = lowest_stratum_scan(kn, 1, samples=20, seed=0)
        values = {row["ctype"] for row in rep2["rows"] if row["status"] == "ok"}
        c.check(rep2["failures"] == 0, f"{rep2['failures']} sample failures on the Kohn-Nirenberg example")
        c.check(rep2["minimum"] == (1, 2, INF), f"Kohn-Nirenberg minimum {rep2['minimum']}")
        c.check(values == {(1, 2, INF)}, f"Kohn-Nirenberg off-origin values {values}")
        c.notes.append("diagonal min (1,2,2) with Levi order 0; Kohn-Nirenberg all (1,2,inf)")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
