"""Boundary systems and the commutator multitype for rigid graph hypersurfaces.

Input is ``r = 2 Re z1 + P(z', conj(z'))`` (after moving the base point to
the origin).  The tangent frame ``G_j = d/dz_j - P_j d/dz_1`` has polynomial
coefficients; kernel fields for later stages are obtained by solving the
linear constraints with a truncated power series (Neumann) inverse.

Truncated objects carry an *exactness degree* ``e``: every stored term of
degree <= e is correct and nothing above e is stored.  Exact polynomials use
``EXACT``.  A value at the origin is trusted only when ``e >= 0``; otherwise
the computation reports itself inconclusive instead of guessing.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import ceil
from typing import Mapping, Sequence

from .algebra import INF, ONE, ZERO, ExactScalar, HermitianPolynomial, as_scalar
from .errors import InconclusiveError, PreconditionError
from .linalg import rank, rref
from .weights import Weight

__all__ = [
    "EXACT",
    "ComplexVectorField",
    "ListSpec",
    "BoundarySystem",
    "MultitypeResult",
    "lie_bracket",
    "graph_tangent_fields",
    "list_eval",
    "c_of_list",
    "kernel_field_ansatz",
    "commutator_multitype",
    "check_graph_form",
]

EXACT = 10**9
I_HALF = ExactScalar(0, Fraction(-1, 2))  # 1/(2i)


# ---------------------------------------------------------------------------
# jets with exactness degree


def _ord(poly: HermitianPolynomial, e: int) -> int:
    """Lower bound for the true vanishing order of a jet."""
    if poly.terms:
        return poly.min_degree()
    return EXACT if e >= EXACT else e + 1


def _trunc(poly: HermitianPolynomial, e: int) -> HermitianPolynomial:
    return poly if e >= EXACT else poly.truncate_degree(e)


def _jmul(a: HermitianPolynomial, ea: int, b: HermitianPolynomial, eb: int, limit: int = EXACT):
    e = min(ea + _ord(b, eb), eb + _ord(a, ea), limit, EXACT)
    if e < 0:
        return HermitianPolynomial.zero(a.n), e
    return a.mul_trunc(b, None if e >= EXACT else e), e


@dataclass(frozen=True, eq=False)
class ComplexVectorField:
    """``sum holo[j] d/dz_j + anti[j] d/dzbar_j`` with polynomial coefficients.

    ``exact`` is the exactness degree of the coefficients (EXACT when they
    are genuine polynomials rather than truncated series).
    """

    holo: tuple[HermitianPolynomial, ...]
    anti: tuple[HermitianPolynomial, ...]
    exact: int = EXACT

    def __post_init__(self):
        if len(self.holo) != len(self.anti):
            raise ValueError("holomorphic and antiholomorphic parts differ in length")
        object.__setattr__(self, "holo", tuple(self.holo))
        object.__setattr__(self, "anti", tuple(self.anti))

    @property
    def n(self) -> int:
        return len(self.holo)

    @classmethod
    def coordinate(cls, j: int, n: int, conj: bool = False) -> "ComplexVectorField":
        zero = HermitianPolynomial.zero(n)
        one = HermitianPolynomial.constant(n, 1)
        comps = [one if k == j - 1 else zero for k in range(n)]
        zeros = [zero] * n
        return cls(tuple(zeros), tuple(comps)) if conj else cls(tuple(comps), tuple(zeros))

    def is_type_10(self) -> bool:
        return all(not c for c in self.anti)

    def conj(self) -> "ComplexVectorField":
        return ComplexVectorField(
            tuple(c.conjugate() for c in self.anti), tuple(c.conjugate() for c in self.holo), self.exact
        )

    def __add__(self, other: "ComplexVectorField") -> "ComplexVectorField":
        e = min(self.exact, other.exact)
        return ComplexVectorField(
            tuple(_trunc(a + b, e) for a, b in zip(self.holo, other.holo)),
            tuple(_trunc(a + b, e) for a, b in zip(self.anti, other.anti)),
            e,
        )

    def __sub__(self, other: "ComplexVectorField") -> "ComplexVectorField":
        return self + other.scale(-1)

    def scale(self, c) -> "ComplexVectorField":
        if isinstance(c, HermitianPolynomial):
            return self.scale_jet(c, EXACT)
        c = as_scalar(c)
        return ComplexVectorField(
            tuple(x.scale(c) for x in self.holo), tuple(x.scale(c) for x in self.anti), self.exact
        )

    def scale_jet(self, c: HermitianPolynomial, ec: int, limit: int = EXACT) -> "ComplexVectorField":
        holo, anti, e = [], [], min(limit, EXACT)
        for x in self.holo:
            p, ep = _jmul(c, ec, x, self.exact, limit)
            holo.append(p)
            e = min(e, ep)
        for x in self.anti:
            p, ep = _jmul(c, ec, x, self.exact, limit)
            anti.append(p)
            e = min(e, ep)
        return ComplexVectorField(
            tuple(_trunc(p, e) for p in holo), tuple(_trunc(p, e) for p in anti), e
        )

    def apply(self, f: HermitianPolynomial, ef: int = EXACT, limit: int = EXACT):
        """``V(f)`` as a jet ``(poly, exactness)``, truncated at ``limit``."""
        n = self.n
        total = HermitianPolynomial.zero(f.n)
        e = min(limit, EXACT)
        ed = ef - 1 if ef < EXACT else EXACT
        for j in range(n):
            for coeff, deriv in ((self.holo[j], f.dz(j + 1)), (self.anti[j], f.dzbar(j + 1))):
                if not coeff and self.exact >= EXACT:
                    continue
                p, ep = _jmul(coeff, self.exact, deriv, ed, limit)
                total = total + p
                e = min(e, ep)
        return _trunc(total, e), e

    def __call__(self, f: HermitianPolynomial) -> HermitianPolynomial:
        return self.apply(f)[0]

    def pair_dr(self, r: HermitianPolynomial, limit: int = EXACT):
        """``dr(V)``: the pairing of the (1,0)-form dr with V."""
        total = HermitianPolynomial.zero(r.n)
        e = min(limit, EXACT)
        for j in range(self.n):
            if not self.holo[j] and self.exact >= EXACT:
                continue
            p, ep = _jmul(r.dz(j + 1), EXACT, self.holo[j], self.exact, limit)
            total = total + p
            e = min(e, ep)
        return _trunc(total, e), e

    def at_origin(self) -> tuple[list[ExactScalar], list[ExactScalar]]:
        return [c.constant_term() for c in self.holo], [c.constant_term() for c in self.anti]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ComplexVectorField):
            return NotImplemented
        return self.holo == other.holo and self.anti == other.anti and self.exact == other.exact

    def __hash__(self) -> int:
        return hash((self.holo, self.anti, self.exact))

    def describe(self) -> dict:
        from .parser import serialize

        out = {}
        for j, c in enumerate(self.holo):
            if c:
                out[f"d/dz{j + 1}"] = serialize(c)
        for j, c in enumerate(self.anti):
            if c:
                out[f"d/dconj(z{j + 1})"] = serialize(c)
        if self.exact < EXACT:
            out["exact_through_degree"] = self.exact
        return out


def lie_bracket(V: ComplexVectorField, W: ComplexVectorField, limit: int = EXACT) -> ComplexVectorField:
    """``[V, W] = V W - W V`` as a first-order operator."""
    if V.n != W.n:
        raise ValueError("dimension mismatch")
    holo, anti, e = [], [], min(limit, EXACT)
    lim = limit + 1 if limit < EXACT else EXACT
    for src, dst in ((zip(V.holo, W.holo), holo), (zip(V.anti, W.anti), anti)):
        for v, w in src:
            a, ea = V.apply(w, W.exact, lim)
            b, eb = W.apply(v, V.exact, lim)
            dst.append(a - b)
            e = min(e, ea, eb)
    return ComplexVectorField(tuple(_trunc(p, e) for p in holo), tuple(_trunc(p, e) for p in anti), e)


# ---------------------------------------------------------------------------
# graph form and frames


def check_graph_form(r: HermitianPolynomial) -> HermitianPolynomial:
    """Return P when ``r = z1 + conj(z1) + P`` with P free of z1, conj(z1)."""
    if not r.is_real_valued():
        raise PreconditionError("defining function must be real-valued")
    n = r.n
    P = r - HermitianPolynomial.z(1, n) - HermitianPolynomial.zbar(1, n)
    if any(e[0] or e[n] for e in P.terms):
        raise PreconditionError(
            "r is not in rigid graph form 2Re(z1) + P(z2..zn); change coordinates so that "
            "z1 enters only through 2Re(z1)"
        )
    return P


def graph_tangent_fields(r: HermitianPolynomial) -> list[ComplexVectorField]:
    """``L_j = d/dz_j - (dP/dz_j) d/dz_1`` for j = 2..n; each kills r identically."""
    P = check_graph_form(r)
    n = r.n
    zero = HermitianPolynomial.zero(n)
    out = []
    for j in range(2, n + 1):
        holo = [zero] * n
        holo[0] = -P.dz(j)
        holo[j - 1] = HermitianPolynomial.constant(n, 1)
        out.append(ComplexVectorField(tuple(holo), (zero,) * n))
    return out


def _combine(coeffs: Sequence[tuple[HermitianPolynomial, int]], fields: Sequence[ComplexVectorField], limit: int):
    total = None
    for (c, ec), fld in zip(coeffs, fields):
        if not c and ec >= EXACT:
            continue
        term = fld.scale_jet(c, ec, limit)
        total = term if total is None else total + term
    return total


def _kernel_coefficients(A: list[list[tuple[HermitianPolynomial, int]]], ncols: int, degree: int):
    """Jets b with ``A b = 0`` near the origin, one per free column.

    Pivot columns come from the reduced echelon form of ``A(0)``; their block
    is inverted by a Neumann series truncated at ``degree``.
    """
    ea = min(e for row in A for _, e in row)
    if ea < 0:
        raise InconclusiveError("constraint jets are not exact at the origin; raise ansatz_degree")
    n = A[0][0][0].n
    A0 = [[p.constant_term() for p, _ in row] for row in A]
    red, pivots = rref(A0)
    if len(pivots) < len(A):
        raise InconclusiveError("constraints are dependent at the point; no kernel frame of the expected rank")
    m = len(pivots)
    C0 = [[A0[i][c] for c in pivots] for i in range(m)]
    inv0 = _const_inverse(C0)
    E = [[(A[i][c][0] - HermitianPolynomial.constant(n, A0[i][c]), A[i][c][1]) for c in pivots] for i in range(m)]
    has_tail = any(p for row in E for p, _ in row)
    e_inv = min(degree, ea) if has_tail else ea
    # M = C0^{-1} E, then inverse = sum_k (-M)^k C0^{-1}
    M = _mat_mul_const_left(inv0, E, n, e_inv)
    inv = [[(HermitianPolynomial.constant(n, inv0[i][j]), EXACT) for j in range(m)] for i in range(m)]
    term = inv
    if has_tail:
        for _ in range(min(degree, e_inv)):
            term = _mat_mul(M, term, n, e_inv)
            term = [[(-p, e) for p, e in row] for row in term]
            if all(not p for row in term for p, _ in row):
                break
            inv = [[(_trunc(a + b, min(ea_, eb_)), min(ea_, eb_)) for (a, ea_), (b, eb_) in zip(r1, r2)] for r1, r2 in zip(inv, term)]
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for k in free:
        col = [A[i][k] for i in range(m)]
        sol = [(HermitianPolynomial.zero(n), EXACT) for _ in range(ncols)]
        sol[k] = (HermitianPolynomial.constant(n, 1), EXACT)
        for idx, pc in enumerate(pivots):
            acc, eacc = HermitianPolynomial.zero(n), EXACT
            for j in range(m):
                p, ep = _jmul(inv[idx][j][0], inv[idx][j][1], col[j][0], col[j][1])
                acc = acc + p
                eacc = min(eacc, ep)
            sol[pc] = (_trunc(-acc, eacc), eacc)
        out.append(sol)
    return out, pivots


def _const_inverse(C: list[list[ExactScalar]]) -> list[list[ExactScalar]]:
    m = len(C)
    aug = [list(row) + [ONE if i == j else ZERO for j in range(m)] for i, row in enumerate(C)]
    red, _ = rref(aug)
    return [row[m:] for row in red]


def _mat_mul_const_left(K, E, n, e_lim):
    m = len(K)
    out = []
    for i in range(m):
        row = []
        for j in range(len(E[0])):
            acc, e = HermitianPolynomial.zero(n), EXACT
            for k in range(len(E)):
                if K[i][k]:
                    acc = acc + E[k][j][0].scale(K[i][k])
                    e = min(e, E[k][j][1])
            e = min(e, e_lim)
            row.append((_trunc(acc, e), e))
        out.append(row)
    return out


def _mat_mul(A, B, n, e_lim):
    out = []
    for i in range(len(A)):
        row = []
        for j in range(len(B[0])):
            acc, e = HermitianPolynomial.zero(n), e_lim
            for k in range(len(B)):
                p, ep = _jmul(A[i][k][0], A[i][k][1], B[k][j][0], B[k][j][1], e_lim)
                acc = acc + p
                e = min(e, ep)
            row.append((_trunc(acc, e), e))
        out.append(row)
    return out


def _levi_block(P: HermitianPolynomial) -> list[list[HermitianPolynomial]]:
    n = P.n
    return [[P.dz(i).dzbar(j) for j in range(2, n + 1)] for i in range(2, n + 1)]


def _principal_subset(C0: list[list[ExactScalar]], p: int) -> tuple[int, ...]:
    size = len(C0)
    for S in combinations(range(size), p):
        if rank([[C0[i][j] for j in S] for i in S]) == p:
            return S
    raise PreconditionError("no nonsingular principal Levi block; the Levi matrix is not Hermitian")


def kernel_field_ansatz(
    r: HermitianPolynomial,
    levi_indices: Sequence[int] = (),
    functions: Sequence[HermitianPolynomial] = (),
    ansatz_degree: int = 6,
    basis: Sequence[ComplexVectorField] | None = None,
) -> list[ComplexVectorField]:
    """Fields ``sum a_j G_j`` killing the given constraints near the origin.

    ``levi_indices`` (coordinate indices >= 2) impose ``ddbar r(L, conj(G_s)) = 0``;
    ``functions`` impose ``L(f) = 0``.  Coefficients are power series
    truncated at ``ansatz_degree``.
    """
    P = check_graph_form(r)
    n = r.n
    frame = list(basis) if basis is not None else graph_tangent_fields(r)
    coeffs = [[(HermitianPolynomial.constant(n, 1) if i == k else HermitianPolynomial.zero(n), EXACT)
               for i in range(len(frame))] for k in range(len(frame))]
    if levi_indices:
        if basis is not None:
            raise ValueError("Levi constraints apply to the graph frame only")
        C = _levi_block(P)
        rows = [[(C[i][s - 2], EXACT) for i in range(n - 1)] for s in levi_indices]
        coeffs, _ = _kernel_coefficients(rows, n - 1, ansatz_degree)
        frame_now = [_combine(c, frame, EXACT) for c in coeffs]
    else:
        frame_now = frame
    for f in functions:
        rows = [[fld.apply(f) for fld in frame_now]]
        sols, _ = _kernel_coefficients(rows, len(frame_now), ansatz_degree)
        frame_now = [_combine(s, frame_now, EXACT) for s in sols]
    return frame_now


# ---------------------------------------------------------------------------
# lists


@dataclass(frozen=True)
class ListSpec:
    """Sequence of symbols ``(k, conj)``: field L_k (or its conjugate)."""

    symbols: tuple[tuple[int, bool], ...]

    def __len__(self) -> int:
        return len(self.symbols)

    def counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for k, _ in self.symbols:
            out[k] = out.get(k, 0) + 1
        return out

    def is_ordered(self, nu: int) -> bool:
        """New field first, then older fields in decreasing index order."""
        ks = [k for k, _ in self.symbols]
        if not ks or ks[0] != nu:
            return False
        return all(a >= b for a, b in zip(ks, ks[1:]))

    def is_admissible(self, nu: int, prior: Mapping[int, Fraction]) -> bool:
        cnt = self.counts()
        if not cnt.get(nu):
            return False
        return sum((Fraction(l) / prior[k] for k, l in cnt.items() if k != nu), Fraction(0)) < 1

    def encoding(self) -> str:
        return ",".join(f"L{k}bar" if c else f"L{k}" for k, c in self.symbols)


def c_of_list(counts: Mapping[int, int], prior: Mapping[int, Fraction], nu: int) -> Fraction:
    """Solve ``sum_{k<nu} l_k/c_k + l_nu/c = 1`` for c."""
    l_new = counts.get(nu, 0)
    if l_new <= 0:
        raise PreconditionError("list does not contain the new field")
    rest = 1 - sum((Fraction(l) / Fraction(prior[k]) for k, l in counts.items() if k != nu), Fraction(0))
    if rest <= 0:
        raise PreconditionError("list is not admissible: old fields already use up the weight")
    return Fraction(l_new) / rest


def _eval_seq(seq: tuple, fields: Mapping, r: HermitianPolynomial, memo: dict, cap: int | None):
    """Jet of ``L^1 ... L^{l-2} dr([L^{l-1}, L^l])`` with suffix memoization."""
    if seq in memo:
        return memo[seq]
    limit = EXACT if cap is None else cap - len(seq)
    if limit < 0:
        limit = 0
    if len(seq) == 2:
        a, b = (_field(fields, s) for s in seq)
        br = lie_bracket(a, b, limit + 1 if limit < EXACT else EXACT)
        out = br.pair_dr(r, limit)
    else:
        inner, e_in = _eval_seq(seq[1:], fields, r, memo, cap)
        out = _field(fields, seq[0]).apply(inner, e_in, limit)
    memo[seq] = out
    return out


def _field(fields: Mapping, sym):
    key, conj = sym
    fld = fields[key]
    return fld.conj() if conj else fld


def list_eval(spec: ListSpec, bindings: Mapping[int, ComplexVectorField], r: HermitianPolynomial) -> HermitianPolynomial:
    """``L^1 ... L^{l-2} dr([L^{l-1}, L^l])`` as a polynomial (exact part of the jet)."""
    if len(spec) < 3:
        raise PreconditionError("lists must have length at least 3")
    memo: dict = {}
    poly, _ = _eval_seq(tuple(spec.symbols), bindings, r, memo, None)
    return poly


# ---------------------------------------------------------------------------
# boundary systems


@dataclass
class BoundarySystem:
    rank: int
    levi_indices: tuple[int, ...]
    functions: dict  # stage index -> HermitianPolynomial (r_nu); 1 -> r
    fields: dict  # stage index -> ComplexVectorField (L_2 .. L_nu)
    lists: dict  # stage index -> ListSpec
    list_fields: dict  # stage index -> field used as the new symbol
    prefix: tuple
    selections: dict = field(default_factory=dict)  # stage -> 'Xf' | 'Xg' | 'Yf' | 'Yg'

    def check(self, r: HermitianPolynomial) -> dict:
        """Re-verify the defining invariants at the origin."""
        report = {}
        for k, fn in self.functions.items():
            if k == 1:
                continue
            val = self.fields[k].apply(fn)[0].constant_term()
            report[f"L{k}(r{k})(0)"] = str(val)
        grads = []
        for k in sorted(self.functions):
            fn = self.functions[k]
            g = [fn.dz(j + 1).constant_term() for j in range(r.n)]
            grads.append([x.re for x in g] + [x.im for x in g])
        report["gradients_independent"] = rank(grads) == len(grads)
        for k, spec in self.lists.items():
            bind = dict(self.fields)
            bind[k] = self.list_fields[k]
            memo: dict = {}
            val = _eval_seq(spec.symbols, bind, r, memo, len(spec))
            report[f"list{k}(0)"] = str(val[0].constant_term()) if val[1] >= 0 else "unknown"
        return report


@dataclass
class MultitypeResult:
    status: str  # "ok" | "inconclusive"
    prefix: tuple  # computed entries (Fractions / INF)
    rank: int
    boundary_system: BoundarySystem
    trace: list
    reason: str = ""
    length_cap: int = 0
    ansatz_degree: int = 0

    @property
    def weight(self) -> Weight | None:
        return Weight(self.prefix) if self.status == "ok" else None


class _Context:
    """Per-input data shared by all choice paths."""

    def __init__(self, r: HermitianPolynomial, q: int, length_cap: int, degree: int):
        self.r = r
        self.n = r.n
        self.q = q
        self.cap = length_cap
        self.degree = degree
        self.P = check_graph_form(r)
        self.graph = graph_tangent_fields(r)
        self.stage_cache: dict = {}


_CONTEXTS: dict = {}
_MAX_CONTEXTS = 16


def _context(r, q, cap, degree) -> _Context:
    from .parser import serialize

    key = (r.n, serialize(r), q, cap, degree)
    ctx = _CONTEXTS.get(key)
    if ctx is None:
        if len(_CONTEXTS) >= _MAX_CONTEXTS:
            _CONTEXTS.pop(next(iter(_CONTEXTS)))
        ctx = _Context(r, q, cap, degree)
        _CONTEXTS[key] = ctx
    return ctx


def _count_vectors(nu: int, prior: Mapping[int, Fraction], cap: int):
    """All admissible ordered count vectors with length in [3, cap], sorted by (c, length)."""
    olds = sorted(prior)
    ranges = [range(0, ceil(prior[k])) for k in olds]
    out = []
    for old in product(*ranges):
        s = sum((Fraction(l) / prior[k] for l, k in zip(old, olds)), Fraction(0))
        if s >= 1:
            continue
        for lnew in range(1, cap + 1):
            length = lnew + sum(old)
            if length > cap:
                break
            if length < 3:
                continue
            counts = dict(zip(olds, old))
            counts[nu] = lnew
            out.append((lnew / (1 - s), length, counts))
    out.sort(key=lambda t: (t[0], t[1], tuple(-t[2][k] for k in sorted(t[2], reverse=True))))
    return out


def _uncovered_below(nu: int, prior: Mapping[int, Fraction], cap: int, bound) -> list:
    """Admissible count vectors with c < bound whose length exceeds cap."""
    olds = sorted(prior)
    ranges = [range(0, ceil(prior[k])) for k in olds]
    bad = []
    for old in product(*ranges):
        s = sum((Fraction(l) / prior[k] for l, k in zip(old, olds)), Fraction(0))
        if s >= 1:
            continue
        if bound is INF:
            # every length is relevant; anything beyond the cap is uncovered
            bad.append(dict(zip(olds, old)))
            break
        max_new = ceil(bound * (1 - s)) - 1
        if max_new >= 1 and max_new + sum(old) > cap and max(3, 1 + sum(old)) <= max_new + sum(old):
            counts = dict(zip(olds, old))
            counts[nu] = max_new
            bad.append(counts)
    return bad


def _symbol_lists(counts: Mapping[int, int], nu: int):
    blocks = [(nu, counts[nu])] + [(k, counts[k]) for k in sorted(counts, reverse=True) if k != nu and counts[k]]
    per_block = [list(product((False, True), repeat=l)) for _, l in blocks]
    for choice in product(*per_block):
        seq = []
        for (k, _), flags in zip(blocks, choice):
            seq.extend((k, c) for c in flags)
        yield tuple(seq)


@dataclass
class _StageResult:
    nu: int
    c: object  # Fraction | INF | None
    status: str
    ties: list  # (cand index, ListSpec)
    candidates: list
    evaluated: list
    info: dict


def _run_stage(ctx: _Context, nu: int, basis, old_fields, prior, trace_all: bool) -> _StageResult:
    r = ctx.r
    cands = list(basis) + [a + b for a, b in combinations(basis, 2)]
    evaluated = []
    memo: dict = {}
    fields = dict(old_fields)
    for i, fld in enumerate(cands):
        fields[("new", i)] = fld
    found_c, ties = None, []
    levels = _count_vectors(nu, prior, ctx.cap)
    idx = 0
    while idx < len(levels):
        c_level = levels[idx][0]
        level = []
        while idx < len(levels) and levels[idx][0] == c_level:
            level.append(levels[idx])
            idx += 1
        for _, length, counts in level:
            for ci in range(len(cands)):
                for seq in _symbol_lists(counts, nu):
                    key = tuple((("new", ci) if k == nu else k, cj) for k, cj in seq)
                    jet, e = _eval_seq(key, fields, r, memo, ctx.cap)
                    spec = ListSpec(seq)
                    if e < 0:
                        raise InconclusiveError(
                            f"stage {nu}: jets too short to evaluate {spec.encoding()}; raise ansatz_degree"
                        )
                    val = jet.constant_term()
                    if trace_all or val:
                        evaluated.append({"field": ci, "list": spec.encoding(), "c": str(c_level), "value": str(val)})
                    if val:
                        ties.append((ci, spec))
        if ties:
            found_c = c_level
            break
    info = {"lists_evaluated": sum(1 for _ in memo), "candidates": len(cands)}
    if found_c is not None:
        bad = _uncovered_below(nu, prior, ctx.cap, found_c)
        if bad:
            return _StageResult(nu, None, "inconclusive", ties, cands, evaluated,
                                dict(info, reason=f"lists with smaller c exceed length_cap={ctx.cap}"))
        ties.sort(key=lambda t: (len(t[1]), t[1].encoding(), t[0]))
        return _StageResult(nu, found_c, "ok", ties, cands, evaluated, info)
    ok, why = _case_one_certificate(ctx, nu, basis, old_fields, prior)
    if ok:
        return _StageResult(nu, INF, "ok", [], cands, evaluated, dict(info, certificate=why))
    return _StageResult(nu, None, "inconclusive", [], cands, evaluated, dict(info, reason=why))


def _case_one_certificate(ctx: _Context, nu, basis, old_fields, prior) -> tuple[bool, str]:
    """Show every admissible list vanishes for every field in the kernel bundle.

    Each list is a string of new-field derivatives applied to a base function:
    a Levi pairing involving the new field, or the value of an admissible
    list of old fields.  Levi pairings are tensorial, so it is enough that
    they vanish for all basis pairs; old-list values must be killed by every
    basis field and its conjugate.  All checks are on jets exact through at
    least ``length_cap``.
    """
    r = ctx.r
    need = ctx.cap
    syms = []
    for b in basis:
        syms.extend([b, b.conj()])
    olds = []
    for k, fld in old_fields.items():
        olds.extend([fld, fld.conj()])
    for a, b in list(combinations(syms, 2)) + [(a, o) for a in syms for o in olds]:
        val, e = lie_bracket(a, b).pair_dr(r)
        if e < need:
            return False, f"Levi pairing jets exact only through degree {e} < {need}; raise ansatz_degree"
        if val:
            return False, f"no nonvanishing list up to length_cap={ctx.cap} and no vanishing certificate"
    # old-field lists of length >= 2 that are admissible on their own
    order = sorted(old_fields, reverse=True)
    ranges = [range(0, ceil(prior[k])) for k in order]
    memo: dict = {}
    for cnt in product(*ranges):
        if sum(cnt) < 2 or sum((Fraction(l) / prior[k] for l, k in zip(cnt, order)), Fraction(0)) >= 1:
            continue
        blocks = [(k, l) for k, l in zip(order, cnt) if l]
        for flags in product(*[list(product((False, True), repeat=l)) for _, l in blocks]):
            seq = tuple((k, c) for (k, _), fl in zip(blocks, flags) for c in fl)
            g, eg = _eval_seq(seq, old_fields, r, memo, None)
            for s in syms:
                val, e = s.apply(g, eg)
                if e < need:
                    return False, f"old-list jets exact only through degree {e} < {need}; raise ansatz_degree"
                if val:
                    return False, f"no nonvanishing list up to length_cap={ctx.cap} and no vanishing certificate"
    return True, "all base functions vanish identically along the kernel bundle (jet-exact)"


def _f_and_g(cands, spec: ListSpec, ci: int, old_fields, r):
    """Real and imaginary parts of the list with its first entry removed, plus the four tests."""
    fields = dict(old_fields)
    nu = spec.symbols[0][0]
    fields[nu] = cands[ci]
    memo: dict = {}
    F, eF = _eval_seq(spec.symbols[1:], fields, r, memo, None)
    f = _trunc(F.real_part(), eF)
    g = _trunc(F.imag_part(), eF)
    first = _field(fields, spec.symbols[0])
    X = (first + first.conj()).scale(Fraction(1, 2))
    Y = (first - first.conj()).scale(I_HALF)
    tests = []
    for name, V, h in (("Xf", X, f), ("Xg", X, g), ("Yf", Y, f), ("Yg", Y, g)):
        val, e = V.apply(h, eF, 0)
        tests.append((name, val.constant_term() if e >= 0 else None))
    return f, g, eF, tests


ESCALATIONS = 3


def commutator_multitype(
    r: HermitianPolynomial,
    q: int = 1,
    point=None,
    length_cap: int | None = None,
    ansatz_degree: int | None = None,
    rng: random.Random | None = None,
    trace_all: bool = False,
) -> MultitypeResult:
    """Commutator multitype prefix ``(c_1, ..., c_{n+1-q})`` with its boundary system.

    Deterministic by default (smallest symbol encoding among ties, first
    nonzero of Xf, Xg, Yf, Yg); pass ``rng`` for randomized choices.  With
    the default ansatz degree, a result blocked only by jet exactness is
    retried with the degree raised by ``length_cap``, at most ``ESCALATIONS``
    times.
    """
    state = rng.getstate() if rng is not None else None
    res = _commutator_multitype(r, q, point, length_cap, ansatz_degree, rng, trace_all)
    if ansatz_degree is not None:
        return res
    degree = res.ansatz_degree
    for _ in range(ESCALATIONS):
        if res.status != "inconclusive" or "raise ansatz_degree" not in res.reason:
            break
        degree += res.length_cap
        if rng is not None:
            rng.setstate(state)  # same choices, larger jets
        res = _commutator_multitype(r, q, point, length_cap, degree, rng, trace_all)
    return res


def _commutator_multitype(r, q, point, length_cap, ansatz_degree, rng, trace_all) -> MultitypeResult:
    n = r.n
    if not 1 <= q <= n - 1:
        raise PreconditionError(f"q must satisfy 1 <= q <= n-1 = {n - 1}, got {q}")
    if point is not None and any(as_scalar(x) for x in point):
        if r.evaluate(point):
            raise PreconditionError("point is not on the hypersurface r = 0")
        r = r.shift_origin(point)
    elif r.constant_term():
        raise PreconditionError("the origin is not on the hypersurface r = 0")
    P = check_graph_form(r)
    target = n + 1 - q
    cap = length_cap if length_cap is not None else max(r.degree(), 3)
    C = _levi_block(P)
    C0 = [[x.constant_term() for x in row] for row in C]
    p = rank(C0) if C0 else 0
    stages_left = max(1, target - (p + 1))
    degree = ansatz_degree if ansatz_degree is not None else cap * stages_left
    ctx = _context(r, q, cap, degree)

    prefix = [Fraction(1)] + [Fraction(2)] * p
    S = _principal_subset(C0, p) if p else ()
    levi_idx = tuple(s + 2 for s in S)
    trace = [{"stage": "levi", "rank": p, "levi_indices": list(levi_idx)}]
    fields = {k + 2: ctx.graph[s] for k, s in enumerate(S)}
    system = BoundarySystem(p, levi_idx, {1: r}, dict(fields), {}, {}, (), {})

    def done(status, reason=""):
        pre = tuple(prefix[:target])
        system.prefix = pre
        return MultitypeResult(status, pre, p, system, trace, reason, cap, degree)

    if p + 1 >= target:
        return done("ok")

    key = ("basis",)
    if key not in ctx.stage_cache:
        try:
            ctx.stage_cache[key] = kernel_field_ansatz(r, levi_idx, (), degree)
        except InconclusiveError as exc:
            ctx.stage_cache[key] = exc
    basis = ctx.stage_cache[key]
    if isinstance(basis, InconclusiveError):
        return done("inconclusive", str(basis))
    old_fields: dict = {}
    prior: dict = {}
    path: list = []
    for nu in range(p + 2, target + 1):
        skey = ("stage", tuple(path))
        if skey not in ctx.stage_cache:
            try:
                ctx.stage_cache[skey] = _run_stage(ctx, nu, basis, old_fields, prior, trace_all)
            except InconclusiveError as exc:
                ctx.stage_cache[skey] = exc
        st = ctx.stage_cache[skey]
        if isinstance(st, InconclusiveError):
            trace.append({"stage": nu, "status": "inconclusive", "reason": str(st)})
            return done("inconclusive", str(st))
        entry = {"stage": nu, "status": st.status, "c": str(st.c) if st.c is not None else None,
                 "candidates": len(st.candidates), "evaluated": st.evaluated, **st.info}
        trace.append(entry)
        if st.status != "ok":
            return done("inconclusive", st.info.get("reason", ""))
        if st.c is INF:
            prefix.extend([INF] * (target - len(prefix)))
            return done("ok")
        prefix.append(st.c)
        tie_index = 0 if rng is None else rng.randrange(len(st.ties))
        ci, spec = st.ties[tie_index]
        entry["chosen"] = {"field": ci, "list": spec.encoding(), "ties": len(st.ties)}
        ckey = ("choice", tuple(path), tie_index)
        if ckey not in ctx.stage_cache:
            ctx.stage_cache[ckey] = _f_and_g(st.candidates, spec, ci, old_fields, r)
        f, g, e_nu, tests = ctx.stage_cache[ckey]
        valid = [t for t in tests if t[1]]
        if not valid:
            reason = "none of Xf, Xg, Yf, Yg is nonzero at the point (jets too short)"
            trace.append({"stage": nu, "status": "inconclusive", "reason": reason})
            return done("inconclusive", reason)
        pick = (valid[0] if rng is None else rng.choice(valid))[0]
        r_nu = f if pick.endswith("f") else g
        entry["selection"] = pick
        entry["tests"] = {name: (str(v) if v is not None else "unknown") for name, v in tests}
        L_nu = st.candidates[ci]
        system.functions[nu] = r_nu
        system.fields[nu] = L_nu
        system.lists[nu] = ListSpec(tuple((k, c) for k, c in spec.symbols))
        system.list_fields[nu] = L_nu
        system.selections[nu] = pick
        old_fields[nu] = L_nu
        prior[nu] = st.c
        path.append((tie_index, pick))
        if nu == target:
            break
        bkey = ("basis", tuple(path))
        if bkey not in ctx.stage_cache:
            try:
                ctx.stage_cache[bkey] = kernel_field_ansatz(r, (), (r_nu,), degree, basis=basis)
            except InconclusiveError as exc:
                ctx.stage_cache[bkey] = exc
        basis = ctx.stage_cache[bkey]
        if isinstance(basis, InconclusiveError):
            trace.append({"stage": nu + 1, "status": "inconclusive", "reason": str(basis)})
            return done("inconclusive", str(basis))
    return done("ok")
