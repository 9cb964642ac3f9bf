"""Checks of the Levi-determinant order bound and related sample scans.

Every report carries the provenance of the type value it used: a model
value is exact, an asserted value is taken on trust, and a searched value
is only a lower bound, so a passing comparison against it is reported as
"consistent" rather than "verified".
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

from .algebra import INF, ZERO, ExactScalar, HermitianPolynomial, as_scalar
from .catlin import check_graph_form, commutator_multitype
from .curves import one_type_search, q_type_estimate
from .errors import CRTypeError, PreconditionError
from .forms import levi_coefficient_orders
from .weights import Weight, lex_compare

__all__ = [
    "BoundReport",
    "model_type",
    "main_bound_check",
    "truncation_invariance_check",
    "choice_independence_check",
    "boundary_samples",
    "lowest_stratum_scan",
    "semicontinuity_scan",
]

T_SOURCES = ("model", "asserted", "searched")


@dataclass
class BoundReport:
    n: int
    q: int
    t: object
    t_source: str
    roundup: object
    order: object
    coefficient_orders: list
    bound: object
    verdict: str  # "holds" | "fails" | "inapplicable"
    certification: str  # "verified" | "asserted" | "consistent" | "none"
    trace: dict = field(default_factory=dict)

    @property
    def tight(self) -> bool:
        return self.verdict == "holds" and self.order == self.bound


def _point(r: HermitianPolynomial, point) -> tuple:
    pt = tuple(as_scalar(x) for x in point) if point is not None else (ZERO,) * r.n
    if len(pt) != r.n:
        raise PreconditionError(f"point has {len(pt)} coordinates, expected {r.n}")
    if r.evaluate(pt):
        raise PreconditionError("point is not on the hypersurface r = 0")
    return pt


def _check_q(r: HermitianPolynomial, q: int) -> None:
    if not 1 <= q <= r.n - 1:
        raise PreconditionError(f"q must satisfy 1 <= q <= n-1 = {r.n - 1}, got {q}")


def model_type(r: HermitianPolynomial, q: int):
    """Exact q-type of a diagonal model ``2Re z1 + sum c_j |z_j|^(2 m_j)``, else None.

    Each variable z2..zn may carry at most one term ``c (z_j zbar_j)^m`` with
    ``c > 0``; a missing variable contributes INF.
    """
    n = r.n
    _check_q(r, q)
    try:
        P = check_graph_form(r)
    except PreconditionError:
        return None
    orders = {}
    for e, c in P.terms.items():
        if c.im or c.re <= 0:
            return None
        used = [j for j in range(n) if e[j] or e[n + j]]
        if len(used) != 1 or used[0] == 0:
            return None
        j = used[0]
        if e[j] != e[n + j] or j in orders:
            return None
        orders[j] = Fraction(2 * e[j])
    values = [orders.get(j, INF) for j in range(1, n)]
    values.sort(key=lambda v: (v is not INF, -v if v is not INF else 0))
    return values[q - 1]


def _searched_type(r: HermitianPolynomial, q: int, point, budget: dict):
    if q == 1:
        res = one_type_search(r, point, budget.get("degree_bound", 3),
                              budget.get("support_bound", 1), budget.get("coeff_set", (1,)))
        return res.value, {"searched_by": "one_type_search", "curves": res.curves_examined,
                           "witness": res.witness.describe() if res.witness else None}
    res = q_type_estimate(r, q, point, budget.get("trials", 8), budget.get("seed", 0),
                          budget.get("degree_bound", 3), budget.get("support_bound", 1),
                          budget.get("coeff_set", (1,)))
    return res.value, {"searched_by": "q_type_estimate", "trials": res.trials,
                       "per_trial": list(res.per_trial)}


def _bound(t, n: int, q: int):
    if t is INF:
        return None, None
    up = ceil(Fraction(t))
    return up, max(up - 2, 0) ** (n - q)


def main_bound_check(
    r: HermitianPolynomial,
    q: int = 1,
    point=None,
    t=None,
    t_source: str = "searched",
    budget: dict | None = None,
) -> BoundReport:
    """Compare the Levi vanishing order at ``point`` with ``(roundup(t) - 2)^(n-q)``."""
    _check_q(r, q)
    if t_source not in T_SOURCES:
        raise PreconditionError(f"t_source must be one of {T_SOURCES}")
    pt = _point(r, point)
    budget = dict(budget or {})
    trace: dict = {}
    if t is None:
        if t_source == "model":
            t = model_type(r.shift_origin(pt), q)
            if t is None:
                raise PreconditionError("input is not a diagonal model; pass t or use t_source='searched'")
        elif t_source == "searched":
            t, trace = _searched_type(r, q, pt, budget)
        else:
            raise PreconditionError("an asserted t must be supplied")
    elif isinstance(t, str):
        t = INF if t.strip().lower() in ("inf", "infinity") else Fraction(t)
    elif t is not INF:
        t = Fraction(t)
    orders = levi_coefficient_orders(r, q, pt)
    order = min(orders, default=INF)
    up, bound = _bound(t, r.n, q)
    if bound is None:
        verdict, cert = "inapplicable", "none"
    else:
        verdict = "holds" if order is not INF and order <= bound else "fails"
        cert = {"model": "verified", "asserted": "asserted", "searched": "consistent"}[t_source]
    return BoundReport(r.n, q, t, t_source, up, order, orders, bound, verdict, cert, trace)


def truncation_invariance_check(
    r: HermitianPolynomial,
    q: int = 1,
    point=None,
    t=None,
    degrees=None,
    budget: dict | None = None,
) -> dict:
    """Re-run the type search and Levi order on each truncation ``k = roundup(t) .. deg r``.

    For infinite t the caller must pass ``degrees``; changes are then
    reported as expected rather than as failures.
    """
    _check_q(r, q)
    pt = _point(r, point)
    base = r.shift_origin(pt)
    if t is None:
        t = model_type(base, q)
        if t is None:
            raise PreconditionError("t is required for non-model input")
    if isinstance(t, str):
        t = INF if t.strip().lower() in ("inf", "infinity") else Fraction(t)
    finite = t is not INF
    if degrees is None:
        if not finite:
            raise PreconditionError("infinite t needs explicit truncation degrees")
        degrees = range(ceil(Fraction(t)), max(base.degree(), ceil(Fraction(t))) + 1)

    def measure(poly):
        value, _ = _searched_type(poly, q, None, dict(budget or {}))
        rep = main_bound_check(poly, q, None, t if finite else INF, "asserted")
        return {"type": value, "order": rep.order, "verdict": rep.verdict}

    reference = measure(base)
    rows = []
    invariant = True
    for k in degrees:
        rk = base.truncate_degree(k)
        if not rk.is_real_valued():
            raise PreconditionError(f"truncation at {k} is not real-valued")
        got = measure(rk)
        same = got["type"] == reference["type"] and got["verdict"] == reference["verdict"]
        invariant = invariant and same
        rows.append({"degree": k, **got, "unchanged": same,
                     "order_unchanged": got["order"] == reference["order"]})
    return {
        "t": t,
        "reference": reference,
        "truncations": rows,
        "invariant": invariant if finite else None,
        "expected_change": not finite,
    }


def choice_independence_check(
    r: HermitianPolynomial, q: int = 1, point=None, trials: int = 8, seed: int = 0, **kwargs
) -> dict:
    """Run the commutator multitype with ``trials`` randomized tie-breaks."""
    base = commutator_multitype(r, q, point, **kwargs)
    prefixes = []
    for i in range(trials):
        res = commutator_multitype(r, q, point, rng=random.Random(seed + i), **kwargs)
        prefixes.append((res.status, res.prefix))
    reference = (base.status, base.prefix)
    return {
        "reference": base.prefix,
        "status": base.status,
        "trials": trials,
        "seed": seed,
        "prefixes": [p for _, p in prefixes],
        "identical": all(p == reference for p in prefixes),
    }


_OFFSETS = (Fraction(-1), Fraction(-1, 2), Fraction(0), Fraction(1, 2), Fraction(1))


def boundary_samples(r: HermitianPolynomial, samples: int, seed: int = 0, base=None) -> list:
    """Exact points on ``r = 0`` near ``base``: rational offsets in z2..zn, then solve for Re z1.

    Im z1 is kept at its base value.  Points are returned in draw order;
    duplicates are kept so the count always equals ``samples``.
    """
    P = check_graph_form(r)
    n = r.n
    base = tuple(as_scalar(x) for x in base) if base is not None else (ZERO,) * n
    gen = random.Random(seed)
    out = []
    for _ in range(samples):
        zp = [base[j] + ExactScalar(gen.choice(_OFFSETS), gen.choice(_OFFSETS)) for j in range(1, n)]
        val = P.evaluate([ZERO] + zp)
        if val.im:
            raise PreconditionError("P is not real at a sample point")
        z1 = ExactScalar(-val.re / 2, base[0].im)
        out.append((z1, *zp))
    return out


def _scan(r, q, samples, seed, base):
    rows = []
    for pt in boundary_samples(r, samples, seed, base):
        row = {"point": pt}
        try:
            res = commutator_multitype(r, q, pt)
        except CRTypeError as exc:
            row.update(status="error", reason=str(exc))
        else:
            row.update(status=res.status, ctype=res.prefix if res.status == "ok" else None)
        rows.append(row)
    return rows


def lowest_stratum_scan(
    r: HermitianPolynomial, q: int = 1, samples: int = 20, seed: int = 0, base=None
) -> dict:
    """Lexicographic minimum of the commutator multitype over sampled boundary points."""
    _check_q(r, q)
    rows = _scan(r, q, samples, seed, base)
    ok = [row for row in rows if row["status"] == "ok"]
    target = r.n + 1 - q
    lowest = tuple([Fraction(1)] + [Fraction(2)] * (target - 1))
    minimum, at = None, None
    for row in ok:
        if minimum is None or lex_compare(row["ctype"], minimum) < 0:
            minimum, at = row["ctype"], row["point"]
    order = None
    if at is not None:
        order = min(levi_coefficient_orders(r, q, at), default=INF)
    return {
        "samples": samples,
        "seed": seed,
        "rows": rows,
        "failures": len(rows) - len(ok),
        "minimum": minimum,
        "minimizer": at,
        "is_lowest": minimum == lowest,
        "levi_order_at_minimizer": order,
        "levi_finite_at_minimizer": order is not None and order is not INF,
    }


def semicontinuity_scan(
    r: HermitianPolynomial, q: int = 1, samples: int = 20, seed: int = 0, base=None
) -> dict:
    """Check ``C(x) <= C(x0)`` lexicographically for sampled x near the base point."""
    _check_q(r, q)
    x0 = _point(r, base)
    ref = commutator_multitype(r, q, x0)
    rows = _scan(r, q, samples, seed, x0)
    violations = [
        row for row in rows
        if row["status"] == "ok" and lex_compare(Weight(row["ctype"]), Weight(ref.prefix)) > 0
    ]
    return {
        "reference": ref.prefix,
        "samples": samples,
        "seed": seed,
        "rows": rows,
        "violations": len(violations),
        "holds": ref.status == "ok" and not violations,
    }
