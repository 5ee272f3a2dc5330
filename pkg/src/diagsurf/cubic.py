"""Closed-form local solubility for diagonal cubic surfaces over Q_p.

Coefficient vectors are classified by the equivalence relation on valuation
vectors generated by permutations, common shifts and per-coordinate changes
by multiples of 3; the five classes delta_1..delta_5 each carry a solubility
criterion in terms of the unit parts.  Everything here is exact integer
arithmetic; the brute-force search in :mod:`diagsurf.search` serves as the
independent oracle for every rule in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from math import isqrt

from .padic import build_prime_table, is_cube_unit, val_and_unit


@dataclass(frozen=True)
class ValVec:
    """A p-adic valuation 4-vector."""

    v: tuple[int, int, int, int]

    @property
    def weight(self) -> int:
        return sum(self.v)


@dataclass(frozen=True)
class DeltaClass:
    id: int
    representative: tuple[int, int, int, int]

    @property
    def name(self) -> str:
        return f"delta_{self.id}"


DELTA_CLASSES: tuple[DeltaClass, ...] = (
    DeltaClass(1, (0, 0, 0, 0)),
    DeltaClass(2, (0, 0, 0, 1)),
    DeltaClass(3, (0, 0, 0, 2)),
    DeltaClass(4, (0, 0, 1, 1)),
    DeltaClass(5, (0, 0, 1, 2)),
)

_REP_TO_CLASS = {c.representative: c for c in DELTA_CLASSES}


@dataclass(frozen=True)
class TransformRecord:
    """The moves that took a valuation vector to its class representative.

    Applied in order: subtract mod3_first (multiples of 3, per coordinate),
    add the common shift, subtract mod3_second, then permute so that slot i
    of the representative holds original coordinate permutation[i].
    """

    mod3_first: tuple[int, int, int, int]
    shift: int
    mod3_second: tuple[int, int, int, int]
    permutation: tuple[int, int, int, int]


def valuation_class(v: tuple[int, int, int, int] | ValVec) -> tuple[DeltaClass, TransformRecord]:
    """Class of a valuation vector, with the normalising transform.

    Exactly one of the shifts 0, 1, 2 lands the sorted mod-3 reduction on a
    class representative; this is checked exhaustively in the test-suite
    against the brute-force closure of the equivalence relation.
    """
    vv = v.v if isinstance(v, ValVec) else tuple(v)
    first = tuple(x % 3 for x in vv)
    drop1 = tuple(x - f for x, f in zip(vv, first))
    for s in (0, 1, 2):
        raw = tuple(f + s for f in first)
        second = tuple(x % 3 for x in raw)
        order = tuple(sorted(range(4), key=lambda i: (second[i], i)))
        key = tuple(second[i] for i in order)
        cls = _REP_TO_CLASS.get(key)
        if cls is not None:
            return cls, TransformRecord(
                mod3_first=drop1,
                shift=s,
                mod3_second=tuple(r - t for r, t in zip(raw, second)),
                permutation=order,
            )
    raise AssertionError(f"no representative reached from {vv}")


@dataclass(frozen=True)
class NormalizedCubic:
    """A cubic coefficient vector reduced to its class representative shape.

    The surface with coefficients p^rep[i] * units[i] (slot order) is
    Q_p-equisoluble with the input surface.
    """

    klass: DeltaClass
    units: tuple[int, int, int, int]
    transform: TransformRecord
    p: int

    def representative_coeffs(self) -> tuple[int, int, int, int]:
        rep = self.klass.representative
        return tuple(u * self.p**r for u, r in zip(self.units, rep))


def normalize_cubic(a: tuple[int, int, int, int], p: int) -> NormalizedCubic:
    """Carry a coefficient vector to representative form, tracking units.

    The equivalence moves (equation scaling by powers of p, absorbing p^3
    into a variable, permuting coordinates) never touch unit parts, so the
    slot units are the original signed units carried through the permutation.
    """
    if any(ai == 0 for ai in a):
        raise ValueError("zero coefficient: the fiber is a cone, not a cubic surface")
    vals = []
    units = []
    for ai in a:
        v, u = val_and_unit(ai, p)
        vals.append(v)
        units.append(u)
    cls, rec = valuation_class(tuple(vals))
    slot_units = tuple(units[i] for i in rec.permutation)
    return NormalizedCubic(klass=cls, units=slot_units, transform=rec, p=p)


@lru_cache(maxsize=1)
def q3_bad_set() -> frozenset[tuple[int, int, int, int]]:
    """The 48 residue vectors mod 9 marking insoluble delta_3 surfaces at p=3.

    Closure of (1,2,4,0) under permutations of the first three slots,
    negation of any coordinate mod 9, and common unit scaling of the first
    three slots.
    """
    seen: set[tuple[int, int, int, int]] = set()
    frontier = {(1, 2, 4, 0)}
    units9 = (1, 2, 4, 5, 7, 8)
    while frontier:
        nxt: set[tuple[int, int, int, int]] = set()
        for t in frontier:
            if t in seen:
                continue
            seen.add(t)
            a0, a1, a2, a3 = t
            for q in permutations((a0, a1, a2)):
                nxt.add((q[0], q[1], q[2], a3))
            for i in range(4):
                lst = list(t)
                lst[i] = (-lst[i]) % 9
                nxt.add(tuple(lst))
            for u in units9:
                nxt.add(((a0 * u) % 9, (a1 * u) % 9, (a2 * u) % 9, a3))
        frontier = nxt - seen
    return frozenset(seen)


@lru_cache(maxsize=1)
def _bad_triples() -> frozenset[tuple[int, int, int]]:
    return frozenset(t[:3] for t in q3_bad_set())


def cubic_soluble_at(a: tuple[int, int, int, int], p: int) -> bool:
    """Whether a0*x0^3 + ... + a3*x3^3 = 0 has a Q_p-point, in closed form."""
    if any(ai == 0 for ai in a):
        raise ValueError("zero coefficient")
    if p % 3 == 2:
        return True
    nc = normalize_cubic(tuple(int(x) for x in a), p)
    cid = nc.klass.id
    u = nc.units
    if p == 3:
        if cid != 3:
            return True
        triple = (u[0] % 9, u[1] % 9, u[2] % 9)
        return triple not in _bad_triples()
    if cid in (1, 2, 3):
        return True
    if cid == 4:
        r01 = (-u[1] * pow(u[0], p - 2, p)) % p
        r23 = (-u[3] * pow(u[2], p - 2, p)) % p
        return is_cube_unit(r01, p) or is_cube_unit(r23, p)
    r01 = (-u[0] * pow(u[1], p - 2, p)) % p
    return is_cube_unit(r01, p)


_FACTOR_TABLE_LIMIT = 1 << 17


@lru_cache(maxsize=4)
def _factor_table(limit: int):
    return build_prime_table(limit)


def _coeff_prime_factors(values: tuple[int, ...]) -> set[int]:
    biggest = max(abs(v) for v in values)
    limit = max(_FACTOR_TABLE_LIMIT, isqrt(biggest) + 1)
    table = _factor_table(limit)
    out: set[int] = set()
    for v in values:
        if abs(v) > 1:
            out.update(p for p, _ in table.factor(v))
    return out


def cubic_els(a: tuple[int, int, int, int]) -> tuple[bool, list[int]]:
    """Everywhere-locally-soluble test for a primitive integer vector.

    Zero coefficients make the fiber a cone with a rational vertex, counted
    soluble.  Solubility over R is automatic (odd degree), and only p = 3 and
    primes p = 1 mod 3 dividing a coefficient can obstruct, so the test set
    is finite.  Returns the verdict and the list of failing primes.
    """
    a = tuple(int(x) for x in a)
    if all(ai == 0 for ai in a):
        raise ValueError("zero vector does not name a surface")
    if any(ai == 0 for ai in a):
        return True, []
    relevant = [3] + sorted(
        p for p in _coeff_prime_factors(a) if p % 3 == 1
    )
    failing = [p for p in relevant if not cubic_soluble_at(a, p)]
    return not failing, failing
