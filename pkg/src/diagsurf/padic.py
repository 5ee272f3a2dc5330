"""Integer and p-adic primitives: valuations, cubic residues, prime sieves,
and deterministic counter-based sampling of Z_p.

Everything here is pure and reentrant.  A PrimeTable is immutable after
construction and can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MASK64 = 0xFFFF_FFFF_FFFF_FFFF
_GOLDEN = 0x9E3779B97F4A7C15
_STREAM = 0xD1B54A32D192ED03


class InfiniteValuationError(ValueError):
    """Raised when a valuation of 0 is requested."""


def val_and_unit(n: int, p: int) -> tuple[int, int]:
    """Split n as p^v * u with p not dividing u.

    n must be nonzero; v_p(0) is infinite and the caller has to treat zero
    coefficients separately.
    """
    if n == 0:
        raise InfiniteValuationError("valuation of 0 is infinite")
    if p < 2:
        raise ValueError(f"p must be prime, got {p}")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def is_cube_unit(u: int, p: int) -> bool:
    """Whether the unit u is a cube mod p (equivalently in Z_p*), for p = 1 mod 3.

    For p = 2 mod 3 every unit is a cube and callers short-circuit; requesting
    the test there is a contract violation.
    """
    if p % 3 != 1:
        raise ValueError(f"cubic residue test requires p = 1 mod 3, got p={p}")
    if u % p == 0:
        raise ValueError(f"{u} is not a unit mod {p}")
    return pow(u % p, (p - 1) // 3, p) == 1


@dataclass(frozen=True)
class PrimeTable:
    """Smallest-prime-factor sieve up to ``limit`` plus the ordered prime list."""

    limit: int
    spf: np.ndarray      # spf[n] = least prime factor of n, 2 <= n <= limit
    primes: np.ndarray   # ascending primes <= limit

    def is_prime(self, n: int) -> bool:
        if n < 2 or n > self.limit:
            raise ValueError(f"{n} outside table range 2..{self.limit}")
        return int(self.spf[n]) == n

    def factor(self, n: int) -> list[tuple[int, int]]:
        """Prime factorisation of |n| as (prime, exponent) pairs, ascending.

        Values above the table limit fall back to trial division by the
        sieved primes, so anything below limit**2 factors completely.
        """
        n = abs(n)
        if n <= 1:
            return []
        out: list[tuple[int, int]] = []
        spf = self.spf
        while 1 < n <= self.limit:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        if n > 1:
            for p in self.primes:
                p = int(p)
                if p * p > n:
                    break
                if n % p == 0:
                    e = 0
                    while n % p == 0:
                        n //= p
                        e += 1
                    out.append((p, e))
            if n > 1:
                if n > self.limit * self.limit:
                    raise ValueError(
                        f"cofactor {n} exceeds limit^2; table too small to certify primality"
                    )
                out.append((n, 1))
            out.sort()
        return out


def build_prime_table(limit: int) -> PrimeTable:
    """Sieve smallest prime factors for 2..limit."""
    if limit < 2:
        raise ValueError(f"limit must be >= 2, got {limit}")
    spf = np.zeros(limit + 1, dtype=np.int32)
    spf[2::2] = 2
    n = 3
    while n * n <= limit:
        if spf[n] == 0:
            sl = spf[n * n :: 2 * n]
            sl[sl == 0] = n
        n += 2
    odd = np.arange(3, limit + 1, 2, dtype=np.int32)
    unmarked = odd[spf[3::2] == 0]
    spf[unmarked] = unmarked
    primes = np.flatnonzero(spf == np.arange(limit + 1, dtype=np.int32))
    primes = primes[primes >= 2]
    return PrimeTable(limit=limit, spf=spf, primes=primes.astype(np.int64))


@dataclass(frozen=True)
class PadicResidue:
    """An element of Z_p known to k digits: 0 <= value < p^k."""

    p: int
    k: int
    value: int

    def valuation(self) -> int | None:
        """Exact valuation if determined by the known digits, else None (value = 0)."""
        if self.value == 0:
            return None
        v, _ = val_and_unit(self.value, self.p)
        return v


def _mix64(z: int) -> int:
    """splitmix64 finaliser; full-period avalanche on 64-bit counters."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def digit_stream(p: int, seed: int, index: int, k: int) -> list[int]:
    """The first k base-p digits of the sample at (seed, index).

    Pure function of its arguments: digit j only depends on (seed, index, j),
    so extending precision never changes digits already drawn.
    """
    base = _mix64((seed & _MASK64) ^ ((index * _GOLDEN) & _MASK64))
    return [_mix64(base ^ ((j * _STREAM) & _MASK64)) % p for j in range(k)]


def sample_zp(p: int, k: int, seed: int, index: int) -> PadicResidue:
    """Haar-uniform sample of Z_p truncated to k digits, as a pure function
    of (seed, index).  Thread-schedule independent by construction."""
    if k < 1:
        raise ValueError(f"precision k must be >= 1, got {k}")
    value = 0
    pk = 1
    for d in digit_stream(p, seed, index, k):
        value += d * pk
        pk *= p
    return PadicResidue(p=p, k=k, value=value)


def sample_zp_batch(p: int, k: int, seed: int, indices: np.ndarray) -> np.ndarray:
    """Vectorised sample_zp over an int64 array of indices.

    Bit-identical to the scalar path: same mixing, same digit order.
    Requires p^k < 2^63.
    """
    if p ** k >= 2 ** 63:
        raise ValueError(f"p^k = {p}^{k} overflows int64")
    idx = np.asarray(indices, dtype=np.uint64)
    base = idx * np.uint64(_GOLDEN)
    base ^= np.uint64(seed & _MASK64)
    z = base.copy()
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    base = z ^ (z >> np.uint64(31))
    value = np.zeros(idx.shape, dtype=np.int64)
    pk = 1
    with np.errstate(over="ignore"):
        for j in range(k):
            z = base ^ np.uint64((j * _STREAM) & _MASK64)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
            z = z ^ (z >> np.uint64(31))
            value += (z % np.uint64(p)).astype(np.int64) * pk
            pk *= p
    return value
