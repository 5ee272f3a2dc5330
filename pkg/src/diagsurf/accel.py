"""Kernel backend selection: numba JIT by default, pure numpy on demand.

Set DIAGSURF_NUMBA=0 to force the numpy fallback (or run without numba
installed).  Both backends produce identical integer counts; the benchmark
script compares their speed.
"""

from __future__ import annotations

import os

import numpy as np

from ._tables import CubicScanTables, QuarticScanTables, SieveScanTables

_ENV_FLAG = "DIAGSURF_NUMBA"
_use_numba = os.environ.get(_ENV_FLAG, "1") != "0"
_numba = None
if _use_numba:
    try:
        import numba as _numba
        from . import _kernels_numba as _impl
    except ImportError:
        _use_numba = False
        _numba = None
if not _use_numba:
    from . import _kernels_numpy as _impl  # noqa: F811


def backend_name() -> str:
    return "numba" if _use_numba else "numpy"


def set_threads(n: int | None) -> None:
    """Cap worker threads; never changes numerical output."""
    if n is None or not _use_numba:
        return
    cap = _numba.config.NUMBA_NUM_THREADS
    _numba.set_num_threads(max(1, min(n, cap)))


def cubic_scan(tables: CubicScanTables) -> tuple[int, int, int]:
    total, soluble, cones = _impl.cubic_scan(
        tables.height,
        tables.primes,
        tables.v3,
        tables.u9,
        tables.vp,
        tables.up,
        tables.is_cube,
        tables.inv,
        tables.bad3,
    )
    return int(total), int(soluble), int(cones)


def quartic_scan(tables: QuarticScanTables) -> tuple[int, int, int]:
    total, soluble, cones = _impl.quartic_scan(
        tables.height,
        tables.primes,
        tables.always,
        tables.cls,
        tables.n_cls,
        tables.verdict,
        tables.offset,
    )
    return int(total), int(soluble), int(cones)


def sieve_counts(tables: SieveScanTables) -> tuple[np.ndarray, np.ndarray]:
    """Exact projective (totals, failures) indexed by height 1..Bmax."""
    Bmax = tables.height
    if _use_numba:
        slab_a = []
        slab_b = []
        for ai in range(1, Bmax + 1):
            for b in range(-ai, ai + 1):
                slab_a.append(ai)
                slab_b.append(b)
        slab_a = np.asarray(slab_a, dtype=np.int64)
        slab_b = np.asarray(slab_b, dtype=np.int64)
        # deterministic shuffle so static prange chunks carry even work
        perm = np.random.default_rng(0).permutation(len(slab_a))
        slab_a = slab_a[perm]
        slab_b = slab_b[perm]
        acc = _impl.sieve_scan(
            Bmax, slab_a, slab_b, tables.lp, tables.le, tables.ln, tables.spf
        )
        totals_w = np.zeros(Bmax + 1, dtype=np.int64)
        fails_w = np.zeros(Bmax + 1, dtype=np.int64)
        np.add.at(totals_w, slab_a, acc[:, 0])
        np.add.at(fails_w, slab_a, acc[:, 1])
        if (totals_w % 2).any() or (fails_w % 2).any():
            raise AssertionError("folded weights must be even")
        return totals_w // 2, fails_w // 2
    totals, fails = _impl.sieve_scan_heights(
        Bmax, tables.min_prime, tables.lp, tables.le, tables.ln
    )
    return _strip_zero(totals), _strip_zero(fails)


def _strip_zero(arr: np.ndarray) -> np.ndarray:
    out = arr.copy()
    out[0] = 0
    return out
