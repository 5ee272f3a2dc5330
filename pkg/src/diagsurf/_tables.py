"""Lookup tables backing the height-scan kernels.

Per-value valuations, unit parts, cubic-residue characters, quartic verdict
tables and large-prime factor slots are all precomputed here in plain Python
so both the numba and the numpy kernel paths consume identical data.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement, permutations

import numpy as np

from .cubic import _bad_triples
from .padic import build_prime_table, val_and_unit
from .quartic import ALWAYS_TESTED_PRIMES, _unit_modulus, quartic_soluble_at


@dataclass(frozen=True)
class CubicScanTables:
    height: int
    primes: np.ndarray          # primes = 1 mod 3 up to height
    v3: np.ndarray              # 3-adic valuation of 0..height (0 at 0)
    u9: np.ndarray              # unit part mod 9 of positive values
    vp: np.ndarray              # (n_primes, height+1) valuations
    up: np.ndarray              # (n_primes, height+1) unit parts mod p
    is_cube: np.ndarray         # (n_primes, max_p) cubic-residue indicator
    inv: np.ndarray             # (n_primes, max_p) inverses mod p
    bad3: np.ndarray            # 729 bools: insoluble unit triples mod 9


def build_cubic_tables(height: int) -> CubicScanTables:
    table = build_prime_table(max(height, 7))
    primes = [int(p) for p in table.primes if p % 3 == 1 and p <= height]
    n = len(primes)
    maxp = max(primes) if primes else 1
    v3 = np.zeros(height + 1, dtype=np.int16)
    u9 = np.zeros(height + 1, dtype=np.int16)
    vp = np.zeros((n, height + 1), dtype=np.int16)
    up = np.zeros((n, height + 1), dtype=np.int32)
    for val in range(1, height + 1):
        v, u = val_and_unit(val, 3)
        v3[val] = v
        u9[val] = u % 9
        for i, p in enumerate(primes):
            v, u = val_and_unit(val, p)
            vp[i, val] = v
            up[i, val] = u % p
    is_cube = np.zeros((n, maxp), dtype=bool)
    inv = np.zeros((n, maxp), dtype=np.int32)
    for i, p in enumerate(primes):
        cubes = {pow(x, 3, p) for x in range(1, p)}
        for u in range(1, p):
            is_cube[i, u] = u in cubes
            inv[i, u] = pow(u, p - 2, p)
    bad3 = np.zeros(729, dtype=bool)
    for t in _bad_triples():
        bad3[t[0] * 81 + t[1] * 9 + t[2]] = True
    return CubicScanTables(
        height=height,
        primes=np.asarray(primes, dtype=np.int64),
        v3=v3,
        u9=u9,
        vp=vp,
        up=up,
        is_cube=is_cube,
        inv=inv,
        bad3=bad3,
    )


@dataclass(frozen=True)
class QuarticScanTables:
    height: int
    primes: np.ndarray       # all primes tested unconditionally or dividing values
    always: np.ndarray       # bool per prime: tested even when dividing nothing
    cls: np.ndarray          # (n_primes, 2*height+1) class index of value-height..height
    n_cls: np.ndarray        # classes per prime
    verdict: np.ndarray      # concatenated flat verdict tables
    offset: np.ndarray       # per-prime offset into verdict


def build_quartic_tables(height: int, node_budget: int | None = None) -> QuarticScanTables:
    from .search import DEFAULT_NODE_BUDGET

    budget = node_budget or DEFAULT_NODE_BUDGET
    table = build_prime_table(max(height, 29))
    primes = sorted(
        set(ALWAYS_TESTED_PRIMES) | {int(p) for p in table.primes if p <= height}
    )
    always = np.array([p in ALWAYS_TESTED_PRIMES for p in primes], dtype=bool)
    n = len(primes)
    cls = np.full((n, 2 * height + 1), -1, dtype=np.int32)
    n_cls = np.zeros(n, dtype=np.int64)
    verdict_parts = []
    offsets = np.zeros(n, dtype=np.int64)
    pos = 0
    for i, p in enumerate(primes):
        m = _unit_modulus(p)
        classes: dict[tuple[int, int], int] = {}
        reps: list[tuple[int, int]] = []
        for val in range(-height, height + 1):
            if val == 0:
                continue
            v, u = val_and_unit(val, p)
            key = (v % 4, u % m)
            if key not in classes:
                classes[key] = len(reps)
                reps.append(key)
            cls[i, val + height] = classes[key]
        k = len(reps)
        n_cls[i] = k
        vt = np.zeros(k * k * k * k, dtype=bool)
        for combo in combinations_with_replacement(range(k), 4):
            coeffs = tuple(reps[c][1] * p ** reps[c][0] for c in combo)
            sol = quartic_soluble_at(coeffs, p, budget)
            for perm in set(permutations(combo)):
                idx = ((perm[0] * k + perm[1]) * k + perm[2]) * k + perm[3]
                vt[idx] = sol
        verdict_parts.append(vt)
        offsets[i] = pos
        pos += vt.size
    return QuarticScanTables(
        height=height,
        primes=np.asarray(primes, dtype=np.int64),
        always=always,
        cls=cls,
        n_cls=n_cls,
        verdict=np.concatenate(verdict_parts) if verdict_parts else np.zeros(0, bool),
        offset=offsets,
    )


_MAX_LARGE_FACTORS = 3


@dataclass(frozen=True)
class SieveScanTables:
    height: int
    min_prime: int
    spf: np.ndarray        # smallest prime factor of 0..height
    lp: np.ndarray         # (height+1, 3) primes > min_prime dividing the value
    le: np.ndarray         # (height+1, 3) matching exponents
    ln: np.ndarray         # number of such primes per value


def build_sieve_tables(height: int, min_prime: int) -> SieveScanTables:
    table = build_prime_table(max(height, 3))
    lp = np.zeros((height + 1, _MAX_LARGE_FACTORS), dtype=np.int64)
    le = np.zeros((height + 1, _MAX_LARGE_FACTORS), dtype=np.int64)
    ln = np.zeros(height + 1, dtype=np.int64)
    for val in range(2, height + 1):
        cnt = 0
        for p, e in table.factor(val):
            if p > min_prime:
                if cnt >= _MAX_LARGE_FACTORS:
                    raise ValueError(
                        f"{val} has more than {_MAX_LARGE_FACTORS} prime factors above {min_prime}"
                    )
                lp[val, cnt] = p
                le[val, cnt] = e
                cnt += 1
        ln[val] = cnt
    spf = np.zeros(height + 1, dtype=np.int64)
    spf[2 : height + 1] = table.spf[2 : height + 1]
    return SieveScanTables(
        height=height, min_prime=min_prime, spf=spf, lp=lp, le=le, ln=ln
    )


def mobius_projective_count(height: int) -> int:
    """Number of points of P^3(Q) with height <= given bound, by inclusion-exclusion
    over the content d: primitive nonzero vectors in the box come in +-pairs."""
    if height < 1:
        raise ValueError("height must be >= 1")
    mu = np.ones(height + 1, dtype=np.int64)
    primes = build_prime_table(height).primes if height >= 2 else np.array([], dtype=np.int64)
    for p in primes:
        p = int(p)
        mu[p::p] *= -1
        sq = p * p
        if sq <= height:
            mu[sq::sq] = 0
    total = 0
    for d in range(1, height + 1):
        if mu[d]:
            side = 2 * (height // d) + 1
            total += int(mu[d]) * (side**4 - 1)
    assert total % 2 == 0
    return total // 2
