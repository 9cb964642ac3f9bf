"""Weights: nondecreasing tuples of rationals >= 1 or INF, ordered lexicographically."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Sequence

from .algebra import INF, HermitianPolynomial

__all__ = [
    "Weight",
    "AdmissibilityResult",
    "DistinguishedResult",
    "MultitypeBound",
    "lex_compare",
    "is_admissible_weight",
    "is_distinguished",
    "multitype_lower_bound",
    "weighted_degree",
]


def _entry(x):
    if x is INF:
        return INF
    if isinstance(x, str):
        return INF if x.strip().lower() in ("inf", "infinity", "∞") else Fraction(x)
    if isinstance(x, float):
        raise TypeError("weights are exact; pass a Fraction or string, not a float")
    return Fraction(x)


@dataclass(frozen=True, order=False)
class Weight:
    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(_entry(x) for x in self.entries))

    @classmethod
    def of(cls, *entries) -> "Weight":
        return cls(tuple(entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, k):
        return self.entries[k]

    def __lt__(self, other: "Weight") -> bool:
        return lex_compare(self, other) < 0

    def __le__(self, other: "Weight") -> bool:
        return lex_compare(self, other) <= 0

    def __gt__(self, other: "Weight") -> bool:
        return lex_compare(self, other) > 0

    def __ge__(self, other: "Weight") -> bool:
        return lex_compare(self, other) >= 0

    def is_nondecreasing(self) -> bool:
        return all(a >= 1 for a in self.entries) and all(
            a <= b for a, b in zip(self.entries, self.entries[1:])
        )

    def as_strings(self) -> list[str]:
        return [str(x) for x in self.entries]

    def __str__(self) -> str:
        return "(" + ", ".join(self.as_strings()) + ")"


def lex_compare(a: Weight | Sequence, b: Weight | Sequence) -> int:
    """-1, 0 or 1; the first differing entry decides and INF exceeds every rational."""
    a = a if isinstance(a, Weight) else Weight(tuple(a))
    b = b if isinstance(b, Weight) else Weight(tuple(b))
    if len(a) != len(b):
        raise ValueError("weights of different length are not comparable")
    for x, y in zip(a.entries, b.entries):
        if x == y:
            continue
        return -1 if x < y else 1
    return 0


@dataclass
class AdmissibilityResult:
    valid: bool
    certificates: dict = field(default_factory=dict)  # k (1-based) -> tuple of a_j
    failing_k: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.valid


def _certificate(lams: Sequence[Fraction], strict: bool) -> tuple[int, ...] | None:
    """Integers a_1..a_k with sum a_j/lam_j = 1, a_j <= lam_j; a_k ascending, then lex."""
    caps = [floor(x) for x in lams]
    low = 1 if strict else 0
    for last in range(1, caps[-1] + 1):
        rest = 1 - Fraction(last) / lams[-1]
        if rest < 0:
            break
        found = _fill(lams[:-1], caps[:-1], rest, low)
        if found is not None:
            return found + (last,)
    return None


def _fill(lams, caps, target: Fraction, low: int):
    if not lams:
        return () if target == 0 else None
    if target < 0:
        return None
    for a in range(low, caps[0] + 1):
        t = target - Fraction(a) / lams[0]
        if t < 0:
            break
        tail = _fill(lams[1:], caps[1:], t, low)
        if tail is not None:
            return (a,) + tail
    return None


def is_admissible_weight(weight: Weight | Sequence, strict: bool = False) -> AdmissibilityResult:
    """Check monotonicity and the integer reciprocal-sum condition for each finite entry.

    The default convention requires ``a_j >= 0`` with ``a_k > 0``; ``strict``
    requires every ``a_j > 0``.
    """
    w = weight if isinstance(weight, Weight) else Weight(tuple(weight))
    for j, x in enumerate(w.entries):
        if x < 1:
            return AdmissibilityResult(False, {}, j + 1, f"entry {j + 1} is below 1")
        if j and w.entries[j - 1] > x:
            return AdmissibilityResult(False, {}, j + 1, f"entry {j + 1} breaks monotonicity")
    certs = {}
    for k in range(1, len(w) + 1):
        if w.entries[k - 1] is INF:
            continue
        cert = _certificate(w.entries[:k], strict)
        if cert is None:
            return AdmissibilityResult(False, certs, k, f"no integer certificate for k={k}")
        certs[k] = cert
    return AdmissibilityResult(True, certs)


def weighted_degree(exps: tuple, weight: Weight, n: int) -> Fraction:
    total = Fraction(0)
    for j in range(n):
        lam = weight.entries[j]
        d = exps[j] + exps[n + j]
        if d and lam is not INF:
            total += Fraction(d) / lam
    return total


@dataclass
class DistinguishedResult:
    distinguished: bool
    witness_alpha: tuple | None = None
    witness_beta: tuple | None = None

    def __bool__(self) -> bool:
        return self.distinguished


def is_distinguished(r: HermitianPolynomial, weight: Weight | Sequence) -> DistinguishedResult:
    """Every derivative at 0 of weighted order below 1 must vanish.

    For a polynomial these derivatives are the coefficients times factorials,
    so it suffices to scan the stored terms; the first offender in canonical
    order is reported.
    """
    w = weight if isinstance(weight, Weight) else Weight(tuple(weight))
    n = r.n
    if len(w) != n:
        raise ValueError(f"weight has {len(w)} entries, expected {n}")
    for exps, _ in r.sorted_terms():
        if weighted_degree(exps, w, n) < 1:
            return DistinguishedResult(False, tuple(exps[:n]), tuple(exps[n:]))
    return DistinguishedResult(True)


@dataclass
class MultitypeBound:
    weight: Weight
    capped: tuple  # 1-based positions where a value above the cap stays distinguished
    entry_cap: Fraction
    candidates: int

    @property
    def is_capped(self) -> bool:
        return bool(self.capped)


def _candidates(cap: Fraction, max_den: int) -> list:
    vals = {Fraction(a, b) for b in range(1, max_den + 1) for a in range(b, floor(cap * b) + 1)}
    return [INF] + sorted(vals, reverse=True)


def multitype_lower_bound(
    r: HermitianPolynomial, entry_cap=None, strict: bool = False
) -> MultitypeBound:
    """Lexicographically largest admissible distinguished weight on a finite grid.

    Entries range over ``a/b`` with ``b <= deg r`` and ``1 <= a/b <= entry_cap``
    plus INF.  A position that settles on the cap while some larger finite
    value would still be distinguished is flagged as capped: the true entry
    may be larger than reported, never smaller.
    """
    n = r.n
    deg = max(r.degree(), 1)
    cap = Fraction(entry_cap) if entry_cap is not None else Fraction(max(deg, 2))
    cands = _candidates(cap, deg)

    def feasible(prefix: list) -> bool:
        fill = prefix + [prefix[-1]] * (n - len(prefix))
        w = Weight(tuple(fill))
        if not is_admissible_weight(w, strict):
            return False
        return is_distinguished(r, w).distinguished

    def search(prefix: list):
        if len(prefix) == n:
            return prefix
        lower = prefix[-1] if prefix else Fraction(1)
        for v in cands:
            if v < lower:
                break
            trial = prefix + [v]
            if feasible(trial):
                done = search(trial)
                if done is not None:
                    return done
        return None

    found = search([])
    if found is None:
        raise ValueError("no admissible distinguished weight on the grid; r(0) may be nonzero")
    capped = tuple(
        j + 1 for j, v in enumerate(found) if v == cap and _sup_entry(r, found[:j], n) > cap
    )
    return MultitypeBound(Weight(tuple(found)), capped, cap, len(cands))


def _sup_entry(r: HermitianPolynomial, prefix: list, n: int):
    """Largest v keeping ``prefix + (v, ..., v)`` distinguished (INF if unbounded)."""
    k = len(prefix)
    best = INF
    for exps in r.terms:
        pre = sum(
            (Fraction(exps[j] + exps[n + j]) / prefix[j] for j in range(k) if prefix[j] is not INF),
            Fraction(0),
        )
        tail = sum(exps[j] + exps[n + j] for j in range(k, n))
        if pre >= 1 or not tail:
            continue
        bound = tail / (1 - pre)
        if best is INF or bound < best:
            best = bound
    return best
