"""Exact arithmetic kernel: Gaussian-rational scalars and polynomials in z, z-bar.

A :class:`HermitianPolynomial` in ``n`` complex variables stores a sparse map
from exponent tuples ``alpha + beta`` (length ``2n``: holomorphic exponents
followed by antiholomorphic ones) to :class:`ExactScalar` coefficients.
Nothing here ever touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from itertools import product
from math import factorial
from typing import Iterable, Iterator, Mapping, Sequence, Union

__all__ = [
    "INF",
    "ExactScalar",
    "HermitianPolynomial",
    "conjugate",
    "partial_derivative",
    "vanishing_order",
    "truncate_degree",
    "shift_origin",
    "as_scalar",
    "parse_rational",
]


@total_ordering
class _Infinity:
    """Sentinel for an infinite order/weight entry.

    Compares above every integer and rational. Arithmetic is rejected on
    purpose: an infinite vanishing order is an outcome, not a number.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __eq__(self, other) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("crtype.INF")

    def __lt__(self, other) -> bool:
        if other is self:
            return False
        if isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __gt__(self, other) -> bool:
        if other is self:
            return False
        if isinstance(other, (int, Fraction)):
            return True
        return NotImplemented

    def __ge__(self, other) -> bool:
        if other is self or isinstance(other, (int, Fraction)):
            return True
        return NotImplemented

    def __le__(self, other) -> bool:
        if other is self:
            return True
        if isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def _reject(self, *_args):
        raise TypeError("arithmetic with INF is not defined")

    __add__ = __radd__ = __sub__ = __rsub__ = _reject
    __mul__ = __rmul__ = __truediv__ = __rtruediv__ = __pow__ = _reject
    __neg__ = _reject


INF = _Infinity()


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, an integer, or a finite decimal into a Fraction."""
    return Fraction(text.strip())


class ExactScalar:
    """Gaussian rational ``re + i*im`` with Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> "ExactScalar":
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    def __repr__(self) -> str:
        return f"ExactScalar({self})"

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re} {sign} {abs(self.im)}*i)"

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def __eq__(self, other) -> bool:
        if isinstance(other, ExactScalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __neg__(self) -> "ExactScalar":
        return ExactScalar._raw(-self.re, -self.im)

    def __add__(self, other) -> "ExactScalar":
        other = as_scalar(other)
        return ExactScalar._raw(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other) -> "ExactScalar":
        other = as_scalar(other)
        return ExactScalar._raw(self.re - other.re, self.im - other.im)

    def __rsub__(self, other) -> "ExactScalar":
        return as_scalar(other) - self

    def __mul__(self, other) -> "ExactScalar":
        if not isinstance(other, ExactScalar):
            if isinstance(other, (int, Fraction)):
                return ExactScalar._raw(self.re * other, self.im * other)
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return ExactScalar._raw(a * c, b)
        return ExactScalar._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ExactScalar":
        other = as_scalar(other)
        den = other.re * other.re + other.im * other.im
        if not den:
            raise ZeroDivisionError("division by zero scalar")
        num = self * other.conj()
        return ExactScalar._raw(num.re / den, num.im / den)

    def __rtruediv__(self, other) -> "ExactScalar":
        return as_scalar(other) / self

    def __pow__(self, k: int) -> "ExactScalar":
        if k < 0:
            return (ExactScalar(1) / self) ** (-k)
        out = ExactScalar._raw(Fraction(1), Fraction(0))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "ExactScalar":
        return ExactScalar._raw(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im


ScalarLike = Union[ExactScalar, int, Fraction]

ZERO = ExactScalar._raw(Fraction(0), Fraction(0))
ONE = ExactScalar._raw(Fraction(1), Fraction(0))
I_UNIT = ExactScalar._raw(Fraction(0), Fraction(1))


def as_scalar(value) -> ExactScalar:
    if isinstance(value, ExactScalar):
        return value
    if isinstance(value, (int, Fraction)):
        return ExactScalar._raw(Fraction(value), Fraction(0))
    if isinstance(value, str):
        return ExactScalar(parse_rational(value))
    raise TypeError(f"cannot interpret {value!r} as an exact scalar")


def _sort_key(exps: tuple) -> tuple:
    return (sum(exps), tuple(-e for e in exps))


class HermitianPolynomial:
    """Sparse polynomial in ``z_1..z_n`` and ``conj(z_1)..conj(z_n)``.

    Instances are treated as immutable; every operation returns a new object.
    Variables are 0-indexed internally (``z_1`` is index 0).
    """

    __slots__ = ("n", "terms", "_hash", "_dcache")

    def __init__(self, n: int, terms: Mapping[tuple, ScalarLike] | None = None):
        self.n = n
        clean: dict[tuple, ExactScalar] = {}
        if terms:
            width = 2 * n
            for exps, c in terms.items():
                exps = tuple(exps)
                if len(exps) != width:
                    raise ValueError(f"exponent tuple {exps} does not match n={n}")
                c = as_scalar(c)
                if c:
                    clean[exps] = c
        self.terms = clean
        self._hash = None
        self._dcache = None

    @classmethod
    def _from_clean(cls, n: int, terms: dict) -> "HermitianPolynomial":
        obj = object.__new__(cls)
        obj.n = n
        obj.terms = terms
        obj._hash = None
        obj._dcache = None
        return obj

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "HermitianPolynomial":
        return cls._from_clean(n, {})

    @classmethod
    def constant(cls, n: int, c: ScalarLike) -> "HermitianPolynomial":
        c = as_scalar(c)
        return cls._from_clean(n, {(0,) * (2 * n): c} if c else {})

    @classmethod
    def z(cls, j: int, n: int) -> "HermitianPolynomial":
        """The coordinate ``z_j`` (1-indexed)."""
        exps = [0] * (2 * n)
        exps[j - 1] = 1
        return cls._from_clean(n, {tuple(exps): ONE})

    @classmethod
    def zbar(cls, j: int, n: int) -> "HermitianPolynomial":
        exps = [0] * (2 * n)
        exps[n + j - 1] = 1
        return cls._from_clean(n, {tuple(exps): ONE})

    @classmethod
    def monomial(cls, alpha: Sequence[int], beta: Sequence[int], c: ScalarLike = 1) -> "HermitianPolynomial":
        n = len(alpha)
        return cls(n, {tuple(alpha) + tuple(beta): c})

    # basic protocol -----------------------------------------------------
    def __repr__(self) -> str:
        from .parser import serialize

        return f"HermitianPolynomial(n={self.n}, {serialize(self)!r})"

    def __str__(self) -> str:
        from .parser import serialize

        return serialize(self)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, HermitianPolynomial):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Fraction, ExactScalar)):
            return self == HermitianPolynomial.constant(self.n, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self) -> list[tuple[tuple, ExactScalar]]:
        """Terms in canonical graded-lexicographic order."""
        return sorted(self.terms.items(), key=lambda kv: _sort_key(kv[0]))

    def __iter__(self) -> Iterator[tuple[tuple, ExactScalar]]:
        return iter(self.sorted_terms())

    def __len__(self) -> int:
        return len(self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def min_degree(self):
        return min((sum(e) for e in self.terms), default=INF)

    def coefficient(self, alpha: Sequence[int], beta: Sequence[int]) -> ExactScalar:
        return self.terms.get(tuple(alpha) + tuple(beta), ZERO)

    def constant_term(self) -> ExactScalar:
        return self.terms.get((0,) * (2 * self.n), ZERO)

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "HermitianPolynomial":
        if isinstance(other, HermitianPolynomial):
            if other.n != self.n:
                raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")
            return other
        return HermitianPolynomial.constant(self.n, other)

    def __add__(self, other) -> "HermitianPolynomial":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return HermitianPolynomial._from_clean(self.n, out)

    __radd__ = __add__

    def __neg__(self) -> "HermitianPolynomial":
        return HermitianPolynomial._from_clean(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "HermitianPolynomial":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "HermitianPolynomial":
        return self._coerce(other) - self

    def scale(self, c: ScalarLike) -> "HermitianPolynomial":
        c = as_scalar(c)
        if not c:
            return HermitianPolynomial.zero(self.n)
        return HermitianPolynomial._from_clean(self.n, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other) -> "HermitianPolynomial":
        if isinstance(other, (int, Fraction, ExactScalar)):
            return self.scale(other)
        if not isinstance(other, HermitianPolynomial):
            return NotImplemented
        return self.mul_trunc(other, None)

    __rmul__ = __mul__

    def mul_trunc(self, other: "HermitianPolynomial", max_degree: int | None) -> "HermitianPolynomial":
        """Product keeping only terms of total degree <= max_degree (None: all)."""
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")
        a, b = self.terms, other.terms
        if not a or not b:
            return HermitianPolynomial.zero(self.n)
        out: dict[tuple, ExactScalar] = {}
        if max_degree is None:
            items_b = list(b.items())
            for ea, ca in a.items():
                for eb, cb in items_b:
                    e = tuple(x + y for x, y in zip(ea, eb))
                    v = out.get(e)
                    out[e] = ca * cb if v is None else v + ca * cb
        else:
            items_b = [(eb, cb, sum(eb)) for eb, cb in b.items()]
            for ea, ca in a.items():
                da = sum(ea)
                if da > max_degree:
                    continue
                room = max_degree - da
                for eb, cb, db in items_b:
                    if db > room:
                        continue
                    e = tuple(x + y for x, y in zip(ea, eb))
                    v = out.get(e)
                    out[e] = ca * cb if v is None else v + ca * cb
        return HermitianPolynomial._from_clean(self.n, {e: c for e, c in out.items() if c})

    def __truediv__(self, c) -> "HermitianPolynomial":
        c = as_scalar(c)
        return self.scale(ExactScalar(1) / c)

    def __pow__(self, k: int) -> "HermitianPolynomial":
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = HermitianPolynomial.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    # calculus and structure ----------------------------------------------
    def conjugate(self) -> "HermitianPolynomial":
        n = self.n
        return HermitianPolynomial._from_clean(
            n, {e[n:] + e[:n]: c.conj() for e, c in self.terms.items()}
        )

    def is_real_valued(self) -> bool:
        return self.conjugate() == self

    def real_part(self) -> "HermitianPolynomial":
        return (self + self.conjugate()).scale(Fraction(1, 2))

    def imag_part(self) -> "HermitianPolynomial":
        return (self - self.conjugate()).scale(ExactScalar(0, Fraction(-1, 2)))

    def diff_index(self, k: int) -> "HermitianPolynomial":
        """Derivative with respect to raw slot ``k`` in ``0..2n-1`` (memoized)."""
        if self._dcache is None:
            self._dcache = {}
        hit = self._dcache.get(k)
        if hit is not None:
            return hit
        out = {}
        for e, c in self.terms.items():
            m = e[k]
            if m:
                ne = e[:k] + (m - 1,) + e[k + 1:]
                out[ne] = c * m
        result = HermitianPolynomial._from_clean(self.n, out)
        self._dcache[k] = result
        return result

    def dz(self, j: int) -> "HermitianPolynomial":
        """Wirtinger derivative d/dz_j (1-indexed)."""
        return self.diff_index(j - 1)

    def dzbar(self, j: int) -> "HermitianPolynomial":
        return self.diff_index(self.n + j - 1)

    def partial_derivative(self, alpha: Sequence[int], beta: Sequence[int]) -> "HermitianPolynomial":
        orders = tuple(alpha) + tuple(beta)
        if len(orders) != 2 * self.n:
            raise ValueError("multi-index length does not match dimension")
        out = {}
        for e, c in self.terms.items():
            if any(x < d for x, d in zip(e, orders)):
                continue
            coeff = 1
            for x, d in zip(e, orders):
                if d:
                    coeff *= factorial(x) // factorial(x - d)
            out[tuple(x - d for x, d in zip(e, orders))] = c * coeff
        return HermitianPolynomial._from_clean(self.n, out)

    def truncate_degree(self, k: int) -> "HermitianPolynomial":
        return HermitianPolynomial._from_clean(
            self.n, {e: c for e, c in self.terms.items() if sum(e) <= k}
        )

    def homogeneous_part(self, k: int) -> "HermitianPolynomial":
        return HermitianPolynomial._from_clean(
            self.n, {e: c for e, c in self.terms.items() if sum(e) == k}
        )

    def evaluate(self, point: Sequence[ScalarLike]) -> ExactScalar:
        pts = [as_scalar(x) for x in point]
        if len(pts) != self.n:
            raise ValueError(f"point has {len(pts)} coordinates, expected {self.n}")
        vals = pts + [x.conj() for x in pts]
        cache: dict[tuple[int, int], ExactScalar] = {}
        total = ZERO
        for e, c in self.terms.items():
            term = c
            for k, m in enumerate(e):
                if m:
                    key = (k, m)
                    pw = cache.get(key)
                    if pw is None:
                        pw = vals[k] ** m
                        cache[key] = pw
                    term = term * pw
            total = total + term
        return total

    def substitute(
        self,
        holo: Sequence["HermitianPolynomial"],
        anti: Sequence["HermitianPolynomial"] | None = None,
        max_degree: int | None = None,
    ) -> "HermitianPolynomial":
        """Replace ``z_j -> holo[j]`` and ``conj(z_j) -> anti[j]``.

        ``anti`` defaults to the conjugates of ``holo``. The images may live
        in a different dimension; the result has their dimension.
        """
        if len(holo) != self.n:
            raise ValueError("need one image per variable")
        if anti is None:
            anti = [h.conjugate() for h in holo]
        images = list(holo) + list(anti)
        m = images[0].n if images else self.n
        powers: dict[tuple[int, int], HermitianPolynomial] = {}

        def power(k: int, e: int) -> HermitianPolynomial:
            key = (k, e)
            if key not in powers:
                if e == 1:
                    powers[key] = images[k]
                else:
                    powers[key] = power(k, e - 1).mul_trunc(images[k], max_degree)
            return powers[key]

        total = HermitianPolynomial.zero(m)
        for e, c in self.terms.items():
            term = HermitianPolynomial.constant(m, c)
            for k, x in enumerate(e):
                if x:
                    term = term.mul_trunc(power(k, x), max_degree)
                    if not term:
                        break
            total = total + term
        return total

    def shift_origin(self, point: Sequence[ScalarLike]) -> "HermitianPolynomial":
        pts = [as_scalar(x) for x in point]
        if len(pts) != self.n:
            raise ValueError(f"point has {len(pts)} coordinates, expected {self.n}")
        if all(not x for x in pts):
            return self
        n = self.n
        holo = [HermitianPolynomial.z(j + 1, n) + pts[j] for j in range(n)]
        anti = [HermitianPolynomial.zbar(j + 1, n) + pts[j].conj() for j in range(n)]
        return self.substitute(holo, anti)

    def vanishing_order(self, point: Sequence[ScalarLike] | None = None):
        p = self if point is None else self.shift_origin(point)
        return p.min_degree()

    def variables_used(self) -> set[int]:
        """1-indexed complex variables appearing (holomorphically or not)."""
        n = self.n
        used = set()
        for e in self.terms:
            for j in range(n):
                if e[j] or e[n + j]:
                    used.add(j + 1)
        return used

    def embed(self, n: int) -> "HermitianPolynomial":
        """Same polynomial viewed in ``n >= self.n`` variables."""
        if n < self.n:
            raise ValueError("cannot embed into a smaller dimension")
        pad = (0,) * (n - self.n)
        m = self.n
        return HermitianPolynomial._from_clean(
            n, {e[:m] + pad + e[m:] + pad: c for e, c in self.terms.items()}
        )

    def leading_term(self) -> tuple[tuple, ExactScalar]:
        return self.sorted_terms()[0]

    def normalized(self) -> "HermitianPolynomial":
        """Scalar multiple whose first canonical coefficient is 1."""
        if not self.terms:
            return self
        _, c = self.leading_term()
        return self.scale(ExactScalar(1) / c)


# functional wrappers ------------------------------------------------------
def conjugate(p: HermitianPolynomial) -> HermitianPolynomial:
    return p.conjugate()


def partial_derivative(p: HermitianPolynomial, alpha: Sequence[int], beta: Sequence[int]) -> HermitianPolynomial:
    """Iterated Wirtinger derivative ``D^alpha Dbar^beta p``."""
    return p.partial_derivative(alpha, beta)


def vanishing_order(p: HermitianPolynomial, point: Sequence[ScalarLike] | None = None):
    """Lowest total degree at ``point`` (default origin); INF for zero."""
    return p.vanishing_order(point)


def truncate_degree(p: HermitianPolynomial, k: int) -> HermitianPolynomial:
    return p.truncate_degree(k)


def shift_origin(p: HermitianPolynomial, point: Sequence[ScalarLike]) -> HermitianPolynomial:
    """Substitute ``z -> z + point`` so that ``point`` becomes the origin."""
    return p.shift_origin(point)


def monomials(n: int, max_degree: int) -> Iterable[tuple]:
    """All exponent tuples of length ``2n`` with total degree <= max_degree."""
    for exps in product(range(max_degree + 1), repeat=2 * n):
        if sum(exps) <= max_degree:
            yield exps
