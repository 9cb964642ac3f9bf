"""Differential forms with polynomial coefficients and Levi-determinant data.

A :class:`Form` of bidegree ``(p, q)`` is stored in the basis
``dz_I ^ dzbar_J`` with all holomorphic differentials first and 1-based,
strictly increasing index tuples.  Exterior derivatives act on the left:
``d(f dz_I ^ dzbar_J) = df ^ dz_I ^ dzbar_J``, which gives
``ddbar(z2 * conj(z2)) = dz2 ^ dzbar2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

from .algebra import INF, ExactScalar, HermitianPolynomial, as_scalar
from .errors import PreconditionError
from .linalg import poly_det, rank

__all__ = [
    "Form",
    "LeviMatrix",
    "d_holo",
    "d_antiholo",
    "wedge",
    "levi_coefficients",
    "levi_slots",
    "levi_vanishing_order",
    "levi_coefficient_orders",
    "bordered_hessian_det",
    "levi_matrix",
    "levi_rank_at",
    "levi_kernel_dim",
]

Slot = tuple[tuple[int, ...], tuple[int, ...]]


def _merge_sorted(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, tuple[int, ...]] | None:
    """Sign and sorted concatenation of two increasing tuples; None if they overlap."""
    if set(a) & set(b):
        return None
    inversions = sum(1 for x in a for y in b if x > y)
    return (-1 if inversions % 2 else 1), tuple(sorted(a + b))


@dataclass(frozen=True)
class Form:
    n: int
    p: int
    q: int
    coefficients: Mapping[Slot, HermitianPolynomial] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (I, J), c in self.coefficients.items():
            I, J = tuple(I), tuple(J)
            if len(I) != self.p or len(J) != self.q:
                raise ValueError(f"slot {(I, J)} does not have bidegree ({self.p},{self.q})")
            if list(I) != sorted(set(I)) or list(J) != sorted(set(J)):
                raise ValueError(f"slot {(I, J)} is not strictly increasing")
            if c:
                clean[(I, J)] = c
        object.__setattr__(self, "coefficients", clean)

    @classmethod
    def function(cls, f: HermitianPolynomial) -> "Form":
        return cls(f.n, 0, 0, {((), ()): f})

    @classmethod
    def dz(cls, j: int, n: int) -> "Form":
        return cls(n, 1, 0, {((j,), ()): HermitianPolynomial.constant(n, 1)})

    @classmethod
    def dzbar(cls, j: int, n: int) -> "Form":
        return cls(n, 0, 1, {((), (j,)): HermitianPolynomial.constant(n, 1)})

    @property
    def degree(self) -> int:
        return self.p + self.q

    def is_zero(self) -> bool:
        return not self.coefficients

    def coefficient(self, I: Sequence[int], J: Sequence[int]) -> HermitianPolynomial:
        return self.coefficients.get((tuple(I), tuple(J)), HermitianPolynomial.zero(self.n))

    def slots(self) -> list[Slot]:
        return sorted(self.coefficients)

    def _check(self, other: "Form") -> None:
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        if (other.p, other.q) != (self.p, self.q) and other.coefficients and self.coefficients:
            raise ValueError("cannot add forms of different bidegree")

    def __add__(self, other: "Form") -> "Form":
        self._check(other)
        if not self.coefficients:
            return other
        out = dict(self.coefficients)
        for k, c in other.coefficients.items():
            out[k] = out[k] + c if k in out else c
        return Form(self.n, self.p, self.q, out)

    def __neg__(self) -> "Form":
        return Form(self.n, self.p, self.q, {k: -c for k, c in self.coefficients.items()})

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def scale(self, f) -> "Form":
        if isinstance(f, HermitianPolynomial):
            return Form(self.n, self.p, self.q, {k: c * f for k, c in self.coefficients.items()})
        s = as_scalar(f)
        return Form(self.n, self.p, self.q, {k: c.scale(s) for k, c in self.coefficients.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        if self.n != other.n:
            return False
        if not self.coefficients and not other.coefficients:
            return True
        return (self.p, self.q) == (other.p, other.q) and self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash((self.n, self.p, self.q, frozenset(self.coefficients.items())))

    def map_coefficients(self, fn) -> "Form":
        return Form(self.n, self.p, self.q, {k: fn(c) for k, c in self.coefficients.items()})

    def __xor__(self, other: "Form") -> "Form":
        return wedge(self, other)


def wedge(omega: Form, eta: Form) -> Form:
    """Graded wedge product, result re-sorted into the holomorphic-first basis."""
    if omega.n != eta.n:
        raise ValueError("dimension mismatch")
    n = omega.n
    p, q = omega.p + eta.p, omega.q + eta.q
    if p > n or q > n:
        return Form(n, min(p, n), min(q, n))
    out: dict[Slot, HermitianPolynomial] = {}
    for (I1, J1), c1 in omega.coefficients.items():
        for (I2, J2), c2 in eta.coefficients.items():
            mi = _merge_sorted(I1, I2)
            if mi is None:
                continue
            mj = _merge_sorted(J1, J2)
            if mj is None:
                continue
            # move dz_{I2} left across dzbar_{J1}
            sign = mi[0] * mj[0] * (-1 if (len(J1) * len(I2)) % 2 else 1)
            prod = c1 * c2
            if sign < 0:
                prod = -prod
            key = (mi[1], mj[1])
            out[key] = out[key] + prod if key in out else prod
    return Form(n, p, q, out)


def d_holo(omega: Form) -> Form:
    """Exterior holomorphic derivative; bidegree (p, q) -> (p + 1, q)."""
    n = omega.n
    out: dict[Slot, HermitianPolynomial] = {}
    for (I, J), c in omega.coefficients.items():
        for j in range(1, n + 1):
            if j in I:
                continue
            dc = c.dz(j)
            if not dc:
                continue
            sign, I2 = _merge_sorted((j,), I)
            term = dc if sign > 0 else -dc
            key = (I2, J)
            out[key] = out[key] + term if key in out else term
    return Form(n, omega.p + 1, omega.q, out)


def d_antiholo(omega: Form) -> Form:
    """Exterior antiholomorphic derivative; bidegree (p, q) -> (p, q + 1)."""
    n = omega.n
    out: dict[Slot, HermitianPolynomial] = {}
    hop = -1 if omega.p % 2 else 1  # dzbar_j passes the holomorphic block
    for (I, J), c in omega.coefficients.items():
        for j in range(1, n + 1):
            if j in J:
                continue
            dc = c.dzbar(j)
            if not dc:
                continue
            sign, J2 = _merge_sorted((j,), J)
            term = dc if sign * hop > 0 else -dc
            key = (I, J2)
            out[key] = out[key] + term if key in out else term
    return Form(n, omega.p, omega.q + 1, out)


def _check_real(r: HermitianPolynomial) -> None:
    if not r.is_real_valued():
        raise PreconditionError("defining function must be real-valued")


def _check_q(n: int, q: int) -> None:
    if not 1 <= q <= n - 1:
        raise PreconditionError(f"q must satisfy 1 <= q <= n-1 = {n - 1}, got {q}")


def levi_slots(n: int, q: int) -> list[Slot]:
    """Canonical slot order for the coefficients of the Levi-determinant form."""
    k = n - q + 1
    idx = list(combinations(range(1, n + 1), k))
    return [(I, J) for I in idx for J in idx]


def levi_form(r: HermitianPolynomial, q: int, extra: Sequence[HermitianPolynomial] = ()) -> Form:
    """``d f_1 ^ ... ^ d f_j ^ dr ^ dbar r ^ (ddbar r)^(n-q-j)`` with d the holomorphic part."""
    n = r.n
    j = len(extra)
    power = n - q - j
    if power < 0:
        raise PreconditionError("too many gradient factors for this q")
    dr = d_holo(Form.function(r))
    dbr = d_antiholo(Form.function(r))
    omega = Form.function(HermitianPolynomial.constant(n, 1))
    for f in extra:
        omega = wedge(omega, d_holo(Form.function(f)))
    omega = wedge(wedge(omega, dr), dbr)
    if power:
        levi = d_holo(dbr)
        for _ in range(power):
            omega = wedge(omega, levi)
    return omega


def form_coefficients(omega: Form, n: int, q: int) -> list[HermitianPolynomial]:
    """Coefficients in the paired orientation dz_i1 ^ dzbar_j1 ^ dz_i2 ^ ...

    The stored (holomorphic-first) coefficient differs from the paired one by
    the sign of the shuffle, (-1)^(k(k-1)/2) for k pairs.
    """
    k = n - q + 1
    flip = -1 if (k * (k - 1) // 2) % 2 else 1
    out = []
    for I, J in levi_slots(n, q):
        c = omega.coefficient(I, J)
        out.append(-c if flip < 0 else c)
    return out


def levi_coefficients(r: HermitianPolynomial, q: int) -> list[HermitianPolynomial]:
    """All coefficients of ``dr ^ dbar r ^ (ddbar r)^(n-q)`` in slot order.

    Zero coefficients are included so the list has ``C(n, n-q+1)^2`` entries;
    for ``q = 1`` it has exactly one.
    """
    _check_real(r)
    _check_q(r.n, q)
    return form_coefficients(levi_form(r, q), r.n, q)


def levi_coefficient_orders(r: HermitianPolynomial, q: int, point=None) -> list:
    base = r if point is None else r.shift_origin(point)
    return [c.vanishing_order() for c in levi_coefficients(base, q)]


def levi_vanishing_order(r: HermitianPolynomial, q: int, point=None):
    """Minimum vanishing order over all Levi coefficients; INF if all vanish."""
    return min(levi_coefficient_orders(r, q, point), default=INF)


def complex_hessian(r: HermitianPolynomial) -> list[list[HermitianPolynomial]]:
    n = r.n
    return [[r.dz(i).dzbar(j) for j in range(1, n + 1)] for i in range(1, n + 1)]


def bordered_hessian_det(r: HermitianPolynomial) -> HermitianPolynomial:
    """``det [[0, dbar r], [d r, complex Hessian]]`` by cofactor expansion."""
    _check_real(r)
    n = r.n
    zero = HermitianPolynomial.zero(n)
    hess = complex_hessian(r)
    rows = [[zero] + [r.dzbar(j) for j in range(1, n + 1)]]
    for i in range(1, n + 1):
        rows.append([r.dz(i)] + hess[i - 1])
    return poly_det(rows)


@dataclass(frozen=True)
class LeviMatrix:
    """Levi form on the frame ``L_j = r_1 d/dz_j - r_j d/dz_1``, j = 2..n.

    Here ``r_j`` is the derivative of r in z_j; the frame is tangent to every
    level set of r and spans the complex tangent space where ``r_1 != 0``.
    """

    entries: list[list[HermitianPolynomial]]
    frame: list[list[HermitianPolynomial]]

    def at(self, point) -> list[list[ExactScalar]]:
        return [[e.evaluate(point) for e in row] for row in self.entries]

    def is_hermitian(self) -> bool:
        m = len(self.entries)
        return all(
            self.entries[i][j] == self.entries[j][i].conjugate() for i in range(m) for j in range(m)
        )


def levi_matrix(r: HermitianPolynomial) -> LeviMatrix:
    _check_real(r)
    n = r.n
    zero = HermitianPolynomial.zero(n)
    r1 = r.dz(1)
    grads = [r.dz(j) for j in range(1, n + 1)]
    frame = []
    for j in range(2, n + 1):
        v = [zero] * n
        v[0] = -grads[j - 1]
        v[j - 1] = r1
        frame.append(v)
    hess = complex_hessian(r)
    entries = []
    for u in frame:
        row = []
        for w in frame:
            total = zero
            for a in range(n):
                if not u[a]:
                    continue
                for b in range(n):
                    if w[b] and hess[a][b]:
                        total = total + u[a] * hess[a][b] * w[b].conjugate()
            row.append(total)
        entries.append(row)
    return LeviMatrix(entries, frame)


def _levi_at(r: HermitianPolynomial, point) -> list[list[ExactScalar]]:
    _check_real(r)
    n = r.n
    point = [as_scalar(x) for x in point] if point is not None else [as_scalar(0)] * n
    if r.evaluate(point):
        raise PreconditionError("point is not on the hypersurface r = 0")
    if not r.dz(1).evaluate(point):
        raise PreconditionError("dr/dz1 vanishes at the point; no graph-position tangent frame")
    return levi_matrix(r).at(point)


def levi_rank_at(r: HermitianPolynomial, point=None) -> int:
    """Rank of the Levi form on the complex tangent space at ``point``."""
    m = _levi_at(r, point)
    return rank(m) if m else 0


def levi_kernel_dim(r: HermitianPolynomial, point=None) -> int:
    return r.n - 1 - levi_rank_at(r, point)
