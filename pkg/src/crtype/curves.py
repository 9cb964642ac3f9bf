"""Order of contact of holomorphic curves with a real hypersurface.

Curves are polynomial jets ``t -> basepoint + phi(t)`` with ``phi(0) = 0``.
Pullbacks are polynomials in ``t`` and ``conj(t)``, stored as one-variable
:class:`HermitianPolynomial` objects.  The searches here return certified
lower bounds (each value is realized by an explicit witness curve), never
upper bounds.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import gcd
from typing import Iterable, Iterator, Sequence

from .algebra import INF, ZERO, ExactScalar, HermitianPolynomial, as_scalar
from .errors import PreconditionError
from .linalg import nullspace, rank, rref

__all__ = [
    "CurveJet",
    "LinearEmbedding",
    "TypeSearchResult",
    "QTypeResult",
    "LCG",
    "pullback",
    "contact_ratio",
    "one_type_search",
    "q_type_estimate",
    "restrict_to_embedding",
]


@dataclass(frozen=True)
class CurveJet:
    """``components[j][k]`` is the coefficient of ``t^k`` in coordinate j (k >= 1 used)."""

    components: tuple[tuple[ExactScalar, ...], ...]
    basepoint: tuple[ExactScalar, ...] = ()

    def __post_init__(self):
        comps = tuple(tuple(as_scalar(c) for c in comp) for comp in self.components)
        for comp in comps:
            if comp and comp[0]:
                raise ValueError("curve components must have zero constant term")
        base = tuple(as_scalar(x) for x in self.basepoint) or (ZERO,) * len(comps)
        if len(base) != len(comps):
            raise ValueError("basepoint dimension does not match the components")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "basepoint", base)

    @classmethod
    def monomial(cls, exponents: Sequence[int], coeffs: Sequence | None = None, basepoint=()) -> "CurveJet":
        """Curve ``(c_1 t^e_1, ..., c_m t^e_m)``; exponent 0 means the zero component."""
        coeffs = coeffs or [1] * len(exponents)
        comps = []
        for e, c in zip(exponents, coeffs):
            comp = [ZERO] * (e + 1)
            if e:
                comp[e] = as_scalar(c)
            comps.append(tuple(comp) if e else ())
        return cls(tuple(comps), tuple(basepoint))

    @property
    def m(self) -> int:
        return len(self.components)

    def order(self):
        """Lowest power of t over all components; INF for the constant curve."""
        orders = [k for comp in self.components for k, c in enumerate(comp) if c]
        return min(orders, default=INF)

    def component_polynomial(self, j: int) -> HermitianPolynomial:
        return HermitianPolynomial(1, {(k, 0): c for k, c in enumerate(self.components[j]) if c})

    def reparametrize(self, k: int) -> "CurveJet":
        """The curve ``phi(t^k)``."""
        comps = []
        for comp in self.components:
            new = [ZERO] * ((len(comp) - 1) * k + 1) if comp else []
            for e, c in enumerate(comp):
                if c:
                    new[e * k] = c
            comps.append(tuple(new))
        return CurveJet(tuple(comps), self.basepoint)

    def describe(self) -> list[str]:
        from .parser import serialize

        out = []
        for j in range(self.m):
            text = serialize(self.component_polynomial(j)).replace("z1", "t")
            out.append(text)
        return out


def pullback(r: HermitianPolynomial, phi: CurveJet, max_degree: int | None = None) -> HermitianPolynomial:
    """``r(basepoint + phi(t))`` as a polynomial in t, conj(t), optionally truncated."""
    if phi.m != r.n:
        raise PreconditionError(f"curve lives in C^{phi.m}, r in C^{r.n}")
    base = r.shift_origin(phi.basepoint)
    images = [phi.component_polynomial(j) for j in range(phi.m)]
    return base.substitute(images, max_degree=max_degree)


def contact_ratio(r: HermitianPolynomial, phi: CurveJet, max_degree: int | None = None):
    """``ord(phi^* r) / ord(phi)``; INF when the pullback vanishes identically."""
    order = phi.order()
    if order is INF:
        raise PreconditionError("contact ratio is undefined for a constant curve")
    pulled = pullback(r, phi, max_degree)
    ordp = pulled.vanishing_order()
    if ordp is INF:
        return INF
    return Fraction(ordp, order)


@dataclass
class TypeSearchResult:
    value: object  # Fraction or INF
    witness: CurveJet | None
    curves_examined: int
    working_degree: int


def _component_options(degree_bound: int, support_bound: int, coeffs: Sequence[ExactScalar]) -> list[tuple]:
    """Every component polynomial allowed by the bounds, zero first."""
    opts: list[tuple] = [()]
    for size in range(1, support_bound + 1):
        for support in combinations(range(1, degree_bound + 1), size):
            for cs in product(coeffs, repeat=size):
                comp = [ZERO] * (support[-1] + 1)
                for e, c in zip(support, cs):
                    comp[e] = c
                opts.append(tuple(comp))
    return opts


def _iter_curves(m: int, options: list[tuple], basepoint) -> Iterator[CurveJet]:
    for combo in product(options, repeat=m):
        if all(not c for c in combo):
            continue
        exps = [k for comp in combo for k, c in enumerate(comp) if c]
        if len(exps) > 1 and gcd(*exps) > 1:
            continue  # phi(t^k) of a listed curve: same ratio
        yield CurveJet(combo, basepoint)


def one_type_search(
    r: HermitianPolynomial,
    point=None,
    degree_bound: int = 3,
    support_bound: int = 1,
    coeff_set: Iterable = (1,),
) -> TypeSearchResult:
    """Best contact ratio over a finite family of curve jets through ``point``.

    The value is a lower bound for the 1-type realized by ``witness``;
    INF is returned as soon as a curve with identically vanishing pullback
    is found.
    """
    n = r.n
    point = tuple(as_scalar(x) for x in point) if point is not None else (ZERO,) * n
    if r.evaluate(point):
        raise PreconditionError("point is not on the hypersurface r = 0")
    coeffs = []
    for c in coeff_set:
        c = as_scalar(c)
        if c and c not in coeffs:
            coeffs.append(c)
    if not coeffs:
        raise PreconditionError("coefficient set must contain a nonzero scalar")
    work = degree_bound * max(r.degree(), 1) + 1
    base = r.shift_origin(point)
    options = _component_options(degree_bound, support_bound, coeffs)
    best, witness, count = None, None, 0
    origin = (ZERO,) * n
    for phi in _iter_curves(n, options, origin):
        count += 1
        ratio = contact_ratio(base, phi, work)
        if best is None or ratio > best:
            best, witness = ratio, phi
            if ratio is INF:
                break
    if witness is not None:
        witness = CurveJet(witness.components, point)
    return TypeSearchResult(best, witness, count, work)


class LCG:
    """Linear congruential generator (Numerical Recipes constants), mod 2^32."""

    A, C, M = 1664525, 1013904223, 2**32

    def __init__(self, seed: int):
        self.state = seed % self.M

    def next(self) -> int:
        self.state = (self.A * self.state + self.C) % self.M
        return self.state

    def grid(self, low: int = -2, high: int = 2) -> int:
        """Uniform-ish draw from ``low..high`` using the high bits."""
        return low + (self.next() >> 16) % (high - low + 1)

    def below(self, k: int) -> int:
        return (self.next() >> 16) % k


@dataclass(frozen=True)
class LinearEmbedding:
    """``w -> basepoint + matrix @ w`` from C^k into C^n (columns independent)."""

    matrix: tuple[tuple[ExactScalar, ...], ...]  # n rows, k columns
    basepoint: tuple[ExactScalar, ...]

    def __post_init__(self):
        cols = list(zip(*self.matrix))
        if rank(cols) != len(cols):
            raise PreconditionError("embedding columns are linearly dependent")

    @property
    def k(self) -> int:
        return len(self.matrix[0])

    def columns(self) -> list[tuple[ExactScalar, ...]]:
        return [tuple(col) for col in zip(*self.matrix)]


def restrict_to_embedding(r: HermitianPolynomial, emb: LinearEmbedding) -> HermitianPolynomial:
    """Pull r back to C^k along the embedding (origin maps to the basepoint)."""
    k = emb.k
    base = r.shift_origin(emb.basepoint)
    images = []
    for row in emb.matrix:
        img = HermitianPolynomial.zero(k)
        for i, c in enumerate(row):
            if c:
                img = img + HermitianPolynomial.z(i + 1, k).scale(c)
        images.append(img)
    return base.substitute(images)


def adapted_embedding(r: HermitianPolynomial, cols: Sequence[Sequence[ExactScalar]], point) -> LinearEmbedding:
    """Re-basis the span of ``cols`` as ``[w1, K...]``.

    ``K`` is the reduced echelon basis of the part of the span killed by the
    holomorphic linear part ``l`` of r at ``point``; ``w1`` satisfies
    ``l(w1) = 1``.  This makes complex-tangential monomial curves reachable.
    """
    n = r.n
    basis, _ = rref(cols)
    basis = [row for row in basis if any(row)]
    grad = [r.dz(j + 1).evaluate(point) for j in range(n)]
    ell = [sum((g * v for g, v in zip(grad, row)), ZERO) for row in basis]
    if all(not x for x in ell):
        new_cols = basis
    else:
        coeffs = nullspace([ell])
        kernel = [[sum((c * b[j] for c, b in zip(vec, basis)), ZERO) for j in range(n)] for vec in coeffs]
        kernel, pivots = rref(kernel) if kernel else ([], [])
        kernel = [row for row in kernel if any(row)]
        first = next(i for i, x in enumerate(ell) if x)
        w1 = [x / ell[first] for x in basis[first]]
        for row, p in zip(kernel, pivots):
            if w1[p]:
                f = w1[p]
                w1 = [a - f * b for a, b in zip(w1, row)]
        new_cols = [w1] + kernel
    matrix = tuple(tuple(col[j] for col in new_cols) for j in range(n))
    return LinearEmbedding(matrix, tuple(point))


@dataclass
class QTypeResult:
    value: object
    trials: int
    redraws: int
    per_trial: list = field(default_factory=list)
    embeddings: list = field(default_factory=list)


def q_type_estimate(
    r: HermitianPolynomial,
    q: int,
    point=None,
    trials: int = 8,
    seed: int = 0,
    degree_bound: int = 3,
    support_bound: int = 1,
    coeff_set: Iterable = (1,),
) -> QTypeResult:
    """Minimum over seeded random (n-q+1)-planes of the searched 1-type.

    Heuristic: neither a certified upper nor lower bound for the q-type in
    general, exact on diagonal sum-of-powers models.
    """
    n = r.n
    if not 1 <= q <= n - 1:
        raise PreconditionError(f"q must satisfy 1 <= q <= n-1 = {n - 1}, got {q}")
    point = tuple(as_scalar(x) for x in point) if point is not None else (ZERO,) * n
    k = n - q + 1
    gen = LCG(seed)
    coeff_set = tuple(coeff_set)
    best, per_trial, embeddings, redraws = None, [], [], 0
    for _ in range(trials):
        while True:
            cols = [[ExactScalar(gen.grid(), gen.grid()) for _ in range(n)] for _ in range(k)]
            if rank(cols) == k:
                break
            redraws += 1
        emb = adapted_embedding(r, cols, point)
        restricted = restrict_to_embedding(r, emb)
        res = one_type_search(restricted, None, degree_bound, support_bound, coeff_set)
        per_trial.append(res.value)
        embeddings.append(emb)
        if best is None or res.value < best:
            best = res.value
    return QTypeResult(best, trials, redraws, per_trial, embeddings)
