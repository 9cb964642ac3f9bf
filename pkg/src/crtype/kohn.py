"""Pre-radical Kohn algorithm for subelliptic multipliers.

Generators accumulate from the Levi-determinant coefficients and then from
coefficients of ``df_1 ^ ... ^ df_j ^ dr ^ dbar r ^ (ddbar r)^(n-q-j)``.
The real radical is not computed; a closure hook accepts user-supplied
members together with a monomial-dominance certificate.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .algebra import INF, ZERO, HermitianPolynomial, as_scalar
from .errors import PreconditionError
from .forms import form_coefficients, levi_coefficients, levi_form, levi_slots

__all__ = [
    "MultiplierGenerators",
    "RadicalCertificate",
    "KohnReport",
    "step1",
    "step_next",
    "contains_unit_at",
    "apply_radical_hook",
    "run",
]


@dataclass
class MultiplierGenerators:
    """Generators of the k-th multiplier ideal with a provenance tag each.

    Tags are dicts: ``{"kind": "defining"}``, ``{"kind": "levi", "slot": ...}``,
    ``{"kind": "wedge", "sources": (i, ...), "slot": ...}`` with source
    indices into the generator list at the time of creation, or
    ``{"kind": "radical", "power": m, "dominated_by": i}``.
    """

    step: int
    generators: list = field(default_factory=list)
    provenance: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.generators)

    def copy(self, step: int | None = None) -> "MultiplierGenerators":
        return MultiplierGenerators(
            self.step if step is None else step, list(self.generators), list(self.provenance)
        )

    def keys(self) -> set:
        return {g.normalized() for g in self.generators}

    def _add(self, g: HermitianPolynomial, tag: dict, seen: set) -> bool:
        if not g.terms:
            return False
        key = g.normalized()
        if key in seen:
            return False
        seen.add(key)
        self.generators.append(g)
        self.provenance.append(tag)
        return True

    def min_order(self, point=None):
        """Minimum vanishing order over generators other than r itself."""
        orders = [
            g.vanishing_order(point)
            for g, tag in zip(self.generators, self.provenance)
            if tag["kind"] != "defining"
        ]
        return min(orders, default=INF)

    def recompute(self, index: int, r: HermitianPolynomial, q: int) -> HermitianPolynomial:
        """Rebuild generator ``index`` from its provenance tag."""
        tag = self.provenance[index]
        kind = tag["kind"]
        if kind == "defining":
            return r
        slots = levi_slots(r.n, q)
        if kind == "levi":
            return levi_coefficients(r, q)[slots.index(tag["slot"])]
        if kind == "wedge":
            fs = [self.generators[i] for i in tag["sources"]]
            coeffs = _wedge_coefficients(r, q, fs)
            return coeffs[_wedge_slots(r.n, q, len(fs)).index(tag["slot"])]
        if kind == "radical":
            return self.generators[index]
        raise ValueError(f"unknown provenance kind {kind!r}")


def _check(r: HermitianPolynomial, q: int) -> None:
    if not r.is_real_valued():
        raise PreconditionError("defining function must be real-valued")
    if not 1 <= q <= r.n - 1:
        raise PreconditionError(f"q must satisfy 1 <= q <= n-1 = {r.n - 1}, got {q}")


def _wedge_slots(n: int, q: int, j: int) -> list:
    holo = list(combinations(range(1, n + 1), n - q + 1))
    anti = list(combinations(range(1, n + 1), n - q + 1 - j))
    return [(I, J) for I in holo for J in anti]


def _wedge_coefficients(r: HermitianPolynomial, q: int, fs: Sequence[HermitianPolynomial]) -> list:
    omega = levi_form(r, q, extra=fs)
    if not fs:
        return form_coefficients(omega, r.n, q)
    return [omega.coefficient(I, J) for I, J in _wedge_slots(r.n, q, len(fs))]


def step1(r: HermitianPolynomial, q: int) -> MultiplierGenerators:
    """``{r}`` together with the nonzero Levi-determinant coefficients."""
    _check(r, q)
    gens = MultiplierGenerators(1)
    seen: set = set()
    gens._add(r, {"kind": "defining"}, seen)
    for slot, c in zip(levi_slots(r.n, q), levi_coefficients(r, q)):
        gens._add(c, {"kind": "levi", "slot": slot}, seen)
    return gens


def step_next(
    gens: MultiplierGenerators, r: HermitianPolynomial, q: int, j_max: int | None = None
) -> MultiplierGenerators:
    """Append wedge coefficients for every j-subset of generators, ``1 <= j <= j_max``.

    Repeated factors are skipped because ``df ^ df = 0``.  New generators are
    kept only if they are not a scalar multiple of an existing one.
    """
    _check(r, q)
    n = r.n
    j_max = n - q if j_max is None else j_max
    if not 0 <= j_max <= n - q:
        raise PreconditionError(f"j_max must lie in 0..n-q = {n - q}")
    out = gens.copy(gens.step + 1)
    seen = gens.keys()
    current = list(gens.generators)
    for j in range(1, j_max + 1):
        for idx in combinations(range(len(current)), j):
            fs = [current[i] for i in idx]
            coeffs = _wedge_coefficients(r, q, fs)
            for slot, c in zip(_wedge_slots(n, q, j), coeffs):
                out._add(c, {"kind": "wedge", "sources": idx, "slot": slot}, seen)
    return out


def contains_unit_at(gens: MultiplierGenerators, point=None) -> tuple[bool, HermitianPolynomial | None]:
    """Whether some generator is nonzero at ``point``; the first such is the witness."""
    if not gens.generators:
        return False, None
    n = gens.generators[0].n
    point = tuple(as_scalar(x) for x in point) if point is not None else (ZERO,) * n
    for g in gens.generators:
        if g.evaluate(point):
            return True, g
    return False, None


@dataclass(frozen=True)
class RadicalCertificate:
    """Claim ``|g|^power <= bound * |f|`` near the base point, with f a generator index.

    Verified only by monomial dominance: f must be a single monomial and every
    term of ``g^power`` must carry at least f's modulus exponent in each
    variable, with the coefficient sum controlled by ``bound``.
    """

    g: HermitianPolynomial
    power: int
    dominated_by: int
    bound: Fraction

    def verify(self, gens: MultiplierGenerators, point=None) -> bool:
        if self.power < 1 or not 0 <= self.dominated_by < len(gens):
            return False
        f = gens.generators[self.dominated_by]
        g = self.g
        if point is not None:
            f, g = f.shift_origin(point), g.shift_origin(point)
        if len(f.terms) != 1:
            return False
        (fe, fc), = f.terms.items()
        n = f.n
        need = [fe[j] + fe[n + j] for j in range(n)]
        gm = g ** self.power
        total = Fraction(0)
        for e, c in gm.terms.items():
            if any(e[j] + e[n + j] < need[j] for j in range(n)):
                return False
            total += abs(c.re) + abs(c.im)
        return Fraction(self.bound) * max(abs(fc.re), abs(fc.im)) >= total


def apply_radical_hook(
    gens: MultiplierGenerators, certificates: Sequence[RadicalCertificate], point=None
) -> tuple[MultiplierGenerators, list[bool]]:
    """Add each certified radical member; returns the new list and per-certificate verdicts."""
    out = gens.copy()
    seen = out.keys()
    verdicts = []
    for cert in certificates:
        ok = cert.verify(gens, point)
        verdicts.append(ok)
        if ok:
            out._add(cert.g, {"kind": "radical", "power": cert.power, "dominated_by": cert.dominated_by}, seen)
    return out, verdicts


@dataclass
class KohnReport:
    q: int
    terminated: bool
    terminated_at: int | None
    witness: HermitianPolynomial | None
    steps: list  # per step: {"step", "generators", "min_order", "unit"}
    final: MultiplierGenerators

    @property
    def min_orders(self) -> list:
        return [s["min_order"] for s in self.steps]


def run(
    r: HermitianPolynomial,
    q: int = 1,
    point=None,
    max_steps: int = 3,
    j_max: int | None = None,
    radical: Sequence[RadicalCertificate] = (),
) -> KohnReport:
    """Iterate until a generator is a unit at ``point`` or ``max_steps`` is reached.

    Computation happens in coordinates centred at ``point``; radical
    certificates are expressed in those coordinates as well.
    """
    _check(r, q)
    if point is not None:
        if r.evaluate(point):
            raise PreconditionError("point is not on the hypersurface r = 0")
        r = r.shift_origin(point)
    gens = step1(r, q)
    steps = []
    witness = None
    terminated_at = None
    for k in range(1, max_steps + 1):
        if k > 1:
            gens = step_next(gens, r, q, j_max)
        if radical:
            gens, _ = apply_radical_hook(gens, radical)
        unit, w = contains_unit_at(gens)
        steps.append({"step": k, "generators": len(gens), "min_order": gens.min_order(), "unit": unit})
        if unit:
            witness, terminated_at = w, k
            break
    return KohnReport(q, terminated_at is not None, terminated_at, witness, steps, gens)
