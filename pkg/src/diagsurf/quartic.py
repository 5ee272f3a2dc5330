"""Local solubility and Monte Carlo densities for diagonal quartic surfaces.

No closed-form criterion is used: the complete search of
:mod:`diagsurf.search` is the decision procedure.  Verdicts are cached on a
canonical key built from the invariances of the problem (permuting
coordinates, scaling the equation, scaling a variable by a unit, absorbing
p^4 into a variable), which collapses the Monte Carlo workload to a few
thousand distinct searches per prime.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as iter_product
from math import sqrt

import numpy as np

from .padic import sample_zp_batch, val_and_unit
from .search import DEFAULT_NODE_BUDGET, search_diagonal
from .cubic import _coeff_prime_factors

# Value reported in the literature for the archimedean factor.  It disagrees
# with the literal sign-pattern computation below (7/8); reports surface both.
SIGMA_INFTY_REFERENCE = Fraction(3, 4)

# Smooth quartic surfaces over F_p always carry points once p >= 23 (Weil
# bounds with b_2 = 22), and smooth points lift, so primes above this bound
# only need testing when they divide a coefficient.
ALWAYS_TESTED_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23)

_INITIAL_DIGITS = {2: 30, 3: 20}
_DEFAULT_DIGITS = 12


class UndecidedError(RuntimeError):
    """The point search exhausted its budget even after escalation."""


def quartic_soluble_real(a: tuple[int, int, int, int]) -> bool:
    """A nonzero real solution exists iff the coefficients mix signs."""
    if any(ai == 0 for ai in a):
        raise ValueError("zero coefficient")
    return any(ai > 0 for ai in a) and any(ai < 0 for ai in a)


def _unit_modulus(p: int) -> int:
    # fourth powers of units are exactly the units = 1 mod 16 when p = 2,
    # and the lifts of fourth powers mod p when p is odd
    return 16 if p == 2 else p


def _canonical_key(a: tuple[int, int, int, int], p: int) -> tuple:
    """Canonical form of a coefficient vector under the solubility invariances."""
    m = _unit_modulus(p)
    vals = []
    ucls = []
    for ai in a:
        v, u = val_and_unit(ai, p)
        vals.append(v % 4)
        ucls.append(u % m)
    best = None
    for s in range(4):
        rs = [(v + s) % 4 for v in vals]
        for i in range(4):
            lam = pow(ucls[i], -1, m)
            cand = tuple(sorted((rv, (lam * u) % m) for rv, u in zip(rs, ucls)))
            if best is None or cand < best:
                best = cand
    return best


@lru_cache(maxsize=1 << 20)
def _cached_verdict(p: int, key: tuple, node_budget: int) -> bool:
    rep = tuple(u * p**v for v, u in key)
    v = search_diagonal(4, rep, p, node_budget)
    if v.is_exhausted:
        v = search_diagonal(4, rep, p, node_budget * 10)
    if v.is_exhausted:
        raise UndecidedError(f"node budget exhausted for {rep} at p={p}")
    return v.is_soluble


def quartic_soluble_at(
    a: tuple[int, int, int, int], p: int, node_budget: int = DEFAULT_NODE_BUDGET
) -> bool:
    """Whether the quartic has a Q_p-point, by complete search with escalation."""
    if any(ai == 0 for ai in a):
        raise ValueError("zero coefficient")
    return _cached_verdict(p, _canonical_key(tuple(int(x) for x in a), p), node_budget)


def quartic_els(
    a: tuple[int, int, int, int], node_budget: int = DEFAULT_NODE_BUDGET
) -> bool:
    """Everywhere-locally-soluble test for a primitive integer vector.

    Cones (a zero coefficient) count soluble; otherwise the real place plus
    the primes up to 23 and the prime divisors of the coefficients decide.
    """
    a = tuple(int(x) for x in a)
    if all(ai == 0 for ai in a):
        raise ValueError("zero vector does not name a surface")
    if any(ai == 0 for ai in a):
        return True
    if not quartic_soluble_real(a):
        return False
    primes = set(ALWAYS_TESTED_PRIMES)
    primes.update(_coeff_prime_factors(a))
    for p in sorted(primes):
        if not quartic_soluble_at(a, p, node_budget):
            return False
    return True


def sigma_infty_quartic() -> Fraction:
    """Archimedean density from the literal sign-pattern decomposition.

    The height-1 region is the cube [-1,1]^4 of volume 2^4; each sign orthant
    contributes equally, and an orthant is soluble exactly when its pattern
    mixes signs.  The reference value SIGMA_INFTY_REFERENCE differs; callers
    report both rather than silently preferring either.
    """
    soluble_orthants = 0
    for signs in iter_product((1, -1), repeat=4):
        if any(s > 0 for s in signs) and any(s < 0 for s in signs):
            soluble_orthants += 1
    return Fraction(soluble_orthants, 16)


@dataclass(frozen=True)
class McEstimate:
    p: int
    samples: int
    soluble_fraction: float
    stderr: float
    undecided_fraction: float
    seed: int
    precision_schedule: dict


def _valuations_units(values: np.ndarray, p: int, k: int, m: int):
    """Vectorised (valuation, unit mod m, undecided) for residues mod p^k."""
    v = np.zeros(values.shape, dtype=np.int64)
    rest = values.copy()
    for _ in range(k):
        mask = (rest != 0) & (rest % p == 0)
        if not mask.any():
            break
        rest[mask] //= p
        v[mask] += 1
    undecided = values == 0
    # unit class needs headroom: v + digits(m) <= k
    head = 4 if p == 2 else 1
    undecided |= v > k - head
    u = rest % m
    return v, u, undecided


def mc_sigma_p_quartic(p: int, samples: int, seed: int) -> McEstimate:
    """Monte Carlo estimate of the Q_p-soluble volume of Z_p^4.

    Fully deterministic in (p, samples, seed): the sampler is a pure counter
    function, undecided samples escalate to doubled precision once, and all
    aggregation is over integer counts in index order.
    """
    if samples < 1000:
        raise ValueError("need at least 1000 samples")
    if p >= 60:
        raise ValueError("Monte Carlo sampling supports p < 60")
    k0 = _INITIAL_DIGITS.get(p, _DEFAULT_DIGITS)
    m = _unit_modulus(p)
    idx = np.arange(samples, dtype=np.int64)
    coords_v = []
    coords_u = []
    undecided = np.zeros(samples, dtype=bool)
    escalations = 0
    for c in range(4):
        values = sample_zp_batch(p, k0, seed, idx * 4 + c)
        v, u, und = _valuations_units(values, p, k0, m)
        if und.any():
            escalations += 1
            k1 = min(2 * k0, _max_digits(p))
            sub = np.flatnonzero(und)
            values2 = sample_zp_batch(p, k1, seed, sub * 4 + c)
            v2, u2, und2 = _valuations_units(values2, p, k1, m)
            v[sub] = v2
            u[sub] = u2
            und[sub] = und2
        coords_v.append(v)
        coords_u.append(u)
        undecided |= und
    codes = [
        ((coords_v[c] % 4) * m + coords_u[c]).astype(np.int64) for c in range(4)
    ]
    stacked = np.sort(np.stack(codes, axis=1), axis=1)
    keys = (
        stacked[:, 0]
        | (stacked[:, 1] << 16)
        | (stacked[:, 2] << 32)
        | (stacked[:, 3] << 48)
    )
    keys = np.where(undecided, np.int64(-1), keys)
    unique_keys = np.unique(keys)
    verdicts = np.zeros(unique_keys.shape, dtype=bool)
    for pos, key in enumerate(unique_keys):
        key = int(key)
        if key < 0:
            continue
        rep = []
        for shift in (0, 16, 32, 48):
            code = (key >> shift) & 0xFFFF
            v, u = divmod(code, m)
            rep.append(int(u) * p ** int(v))
        verdicts[pos] = quartic_soluble_at((rep[0], rep[1], rep[2], rep[3]), p)
    where = np.searchsorted(unique_keys, keys)
    soluble = int((verdicts[where] & ~undecided).sum())
    decided = int((~undecided).sum())
    n_undecided = samples - decided
    frac = soluble / decided if decided else float("nan")
    return McEstimate(
        p=p,
        samples=samples,
        soluble_fraction=frac,
        stderr=sqrt(frac * (1.0 - frac) / samples),
        undecided_fraction=n_undecided / samples,
        seed=seed,
        precision_schedule={
            "initial_digits": k0,
            "escalated_digits": min(2 * k0, _max_digits(p)),
            "escalations_used": escalations,
        },
    )


def _max_digits(p: int) -> int:
    k = 1
    while p ** (k + 1) < 2**62:
        k += 1
    return k
