"""Pure-numpy fallbacks for the height-scan kernels.

Same outputs as :mod:`diagsurf._kernels_numba`, computed by direct
vectorised enumeration of canonical points (no sign folding, no permutation
weights), which makes them an independent check of the folded counting in
the numba path.  Intended for small heights and for environments without a
working numba.
"""

from __future__ import annotations

import numpy as np


def _lead_slabs(B: int):
    """Yield (x0, x1) pairs covering all canonical representatives.

    Canonical means first nonzero coordinate positive; each yielded pair
    stands for the plane of points (x0, x1, x2, x3) with x2, x3 free, except
    the fully-led slabs handled separately by the caller.
    """
    for x0 in range(1, B + 1):
        for x1 in range(-B, B + 1):
            yield x0, x1
    for x1 in range(1, B + 1):
        yield 0, x1


def _plane(B: int):
    x2, x3 = np.meshgrid(
        np.arange(-B, B + 1, dtype=np.int64),
        np.arange(-B, B + 1, dtype=np.int64),
        indexing="ij",
    )
    return x2.ravel(), x3.ravel()


def _tail_points(B: int):
    """Canonical points with x0 = x1 = 0."""
    pts = [(0, 0, x2, x3) for x2 in range(1, B + 1) for x3 in range(-B, B + 1)]
    pts.append((0, 0, 0, 1))
    return pts


def _cubic_plane_soluble(x0, x1, x2, x3, t):
    """Vectorised everywhere-locally-soluble mask; coordinates all nonzero."""
    n = x2.shape[0]
    ok = np.ones(n, dtype=bool)
    a = (x0, x1, x2, x3)
    babs = [np.abs(np.broadcast_to(np.asarray(c, dtype=np.int64), (n,))) for c in a]
    neg = [np.broadcast_to(np.asarray(c, dtype=np.int64), (n,)) < 0 for c in a]
    # p = 3
    m = [t.v3[b] % 3 for b in babs]
    cid, resid = _class_mask(m)
    d3 = cid == 3
    if d3.any():
        code = np.zeros(n, dtype=np.int64)
        for i in range(4):
            u = t.u9[babs[i]].astype(np.int64)
            u = np.where(neg[i], (9 - u) % 9, u)
            code = np.where(d3 & (resid[i] == 0), code * 9 + u, code)
        ok &= ~(d3 & t.bad3[code])
    # primes = 1 mod 3
    for pi in range(len(t.primes)):
        p = int(t.primes[pi])
        vv = [t.vp[pi, b].astype(np.int64) for b in babs]
        relevant = (vv[0] > 0) | (vv[1] > 0) | (vv[2] > 0) | (vv[3] > 0)
        if not relevant.any():
            continue
        cid, resid = _class_mask([v % 3 for v in vv])
        need = relevant & (cid >= 4)
        if not need.any():
            continue
        uu = []
        for i in range(4):
            u = t.up[pi, babs[i]].astype(np.int64)
            uu.append(np.where(neg[i], (p - u) % p, u))
        ux = np.zeros(n, dtype=np.int64)
        uy = np.zeros(n, dtype=np.int64)
        uz = np.ones(n, dtype=np.int64)
        uw = np.ones(n, dtype=np.int64)
        got_x = np.zeros(n, dtype=bool)
        got_z = np.zeros(n, dtype=bool)
        for i in range(4):
            r0 = resid[i] == 0
            take_y = r0 & got_x
            take_x = r0 & ~got_x
            ux = np.where(take_x, uu[i], ux)
            uy = np.where(take_y, uu[i], uy)
            got_x |= r0
            r1 = resid[i] == 1
            take_w = r1 & got_z
            take_z = r1 & ~got_z
            uz = np.where(take_z, uu[i], uz)
            uw = np.where(take_w, uu[i], uw)
            got_z |= r1
        ux = np.where(need, ux, 1)
        uy = np.where(need, uy, 1)
        ratio1 = (p - (uy * t.inv[pi, ux]) % p) % p
        ratio2 = (p - (uw * t.inv[pi, uz]) % p) % p
        cube1 = t.is_cube[pi, ratio1]
        cube2 = t.is_cube[pi, ratio2]
        sol = np.where(cid == 4, cube1 | cube2, cube1)
        ok &= ~need | sol
    return ok


def _class_mask(m):
    """Vectorised class id plus shifted residues for mod-3 valuations."""
    n = m[0].shape[0] if hasattr(m[0], "shape") else 1
    cid = np.zeros(n, dtype=np.int64)
    resid = [np.zeros(n, dtype=np.int64) for _ in range(4)]
    undecided = np.ones(n, dtype=bool)
    for s in range(3):
        r = [(mi + s) % 3 for mi in m]
        c0 = sum((ri == 0).astype(np.int64) for ri in r)
        c1 = sum((ri == 1).astype(np.int64) for ri in r)
        c2 = 4 - c0 - c1
        found = np.select(
            [
                c0 == 4,
                (c0 == 3) & (c1 == 1),
                (c0 == 3) & (c2 == 1),
                (c0 == 2) & (c1 == 2),
                (c0 == 2) & (c1 == 1) & (c2 == 1),
            ],
            [1, 2, 3, 4, 5],
            default=0,
        )
        take = undecided & (found > 0)
        cid = np.where(take, found, cid)
        for i in range(4):
            resid[i] = np.where(take, r[i], resid[i])
        undecided &= found == 0
    return cid, resid


def cubic_scan(B, primes, v3, u9, vp, up, is_cube, inv, bad3):
    from ._tables import CubicScanTables

    t = CubicScanTables(B, primes, v3, u9, vp, up, is_cube, inv, bad3)
    x2, x3 = _plane(B)
    total = 0
    soluble = 0
    cones = 0
    for x0, x1 in _lead_slabs(B):
        if x0 == 0:
            g2 = np.gcd(np.gcd(x1, np.abs(x2)), np.abs(x3))
            prim = g2 == 1
            cnt = int(prim.sum())
            total += cnt
            soluble += cnt
            cones += cnt
            continue
        g1 = np.gcd(x0, abs(x1))
        prim = np.gcd(np.gcd(g1, np.abs(x2)), np.abs(x3)) == 1
        total += int(prim.sum())
        zero = (x1 == 0) | (x2 == 0) | (x3 == 0)
        ncone = int((prim & zero).sum())
        cones += ncone
        soluble += ncone
        live = prim & ~zero
        if live.any():
            sol = _cubic_plane_soluble(x0, x1, x2[live], x3[live], t)
            soluble += int(sol.sum())
    for pt in _tail_points(B):
        x0, x1, x2s, x3s = pt
        if np.gcd(x2s, abs(x3s)) == 1:
            total += 1
            soluble += 1
            cones += 1
    return np.array([total, soluble, cones], dtype=np.int64)


def _quartic_plane_soluble(x0, x1, x2, x3, B, t):
    n = x2.shape[0]
    a = [
        np.broadcast_to(np.asarray(c, dtype=np.int64), (n,)) for c in (x0, x1, x2, x3)
    ]
    pos = np.zeros(n, dtype=bool)
    neg = np.zeros(n, dtype=bool)
    for c in a:
        pos |= c > 0
        neg |= c < 0
    ok = pos & neg
    for pi in range(len(t.primes)):
        p = int(t.primes[pi])
        if not t.always[pi]:
            relevant = np.zeros(n, dtype=bool)
            for c in a:
                relevant |= c % p == 0
            if not relevant.any():
                continue
        else:
            relevant = np.ones(n, dtype=bool)
        k = int(t.n_cls[pi])
        idx = np.zeros(n, dtype=np.int64)
        for c in a:
            idx = idx * k + t.cls[pi, c + B]
        verdict = t.verdict[int(t.offset[pi]) + idx]
        ok &= ~relevant | verdict
    return ok


def quartic_scan(B, primes, always, cls, n_cls, verdict, offset):
    from ._tables import QuarticScanTables

    t = QuarticScanTables(B, primes, always, cls, n_cls, verdict, offset)
    x2, x3 = _plane(B)
    total = 0
    soluble = 0
    cones = 0
    for x0, x1 in _lead_slabs(B):
        if x0 == 0:
            g2 = np.gcd(np.gcd(x1, np.abs(x2)), np.abs(x3))
            prim = g2 == 1
            cnt = int(prim.sum())
            total += cnt
            soluble += cnt
            cones += cnt
            continue
        g1 = np.gcd(x0, abs(x1))
        prim = np.gcd(np.gcd(g1, np.abs(x2)), np.abs(x3)) == 1
        total += int(prim.sum())
        zero = (x1 == 0) | (x2 == 0) | (x3 == 0)
        ncone = int((prim & zero).sum())
        cones += ncone
        soluble += ncone
        live = prim & ~zero
        if live.any():
            sol = _quartic_plane_soluble(x0, x1, x2[live], x3[live], B, t)
            soluble += int(sol.sum())
    for pt in _tail_points(B):
        _, _, x2s, x3s = pt
        if np.gcd(x2s, abs(x3s)) == 1:
            total += 1
            soluble += 1
            cones += 1
    return np.array([total, soluble, cones], dtype=np.int64)


def sieve_scan_heights(Bmax, min_prime, lp, le, ln):
    """(height, total, failures) rows by direct enumeration; heights 1..Bmax.

    Complements the folded numba kernel: canonical points, one at a time,
    vectorised over the (x2, x3) plane.
    """
    vtab = {}
    primes = [
        p
        for p in range(min_prime + 1, Bmax + 1)
        if all(p % q for q in range(2, int(p**0.5) + 1)) and p > 1
    ]
    for p in primes:
        col = np.zeros(Bmax + 1, dtype=np.int64)
        for val in range(1, Bmax + 1):
            v = 0
            x = val
            while x % p == 0:
                x //= p
                v += 1
            col[val] = v
        vtab[p] = col
    x2, x3 = _plane(Bmax)
    a2 = np.abs(x2)
    a3 = np.abs(x3)
    totals = np.zeros(Bmax + 1, dtype=np.int64)
    fails = np.zeros(Bmax + 1, dtype=np.int64)
    for x0, x1 in _lead_slabs(Bmax):
        g1 = np.gcd(x0, abs(x1))
        prim = np.gcd(np.gcd(g1, a2), a3) == 1
        if not prim.any():
            continue
        h = np.maximum(max(abs(x0), abs(x1)), np.maximum(a2, a3))
        zero = (min(abs(x0), abs(x1)) == 0) | (x2 == 0) | (x3 == 0)
        s = x0 + x1 + x2 + x3
        transverse = np.zeros(x2.shape[0], dtype=bool)
        base0 = vtab_get(vtab, primes, abs(x0))
        base1 = vtab_get(vtab, primes, abs(x1))
        for pi, p in enumerate(primes):
            tv = base0[pi] + base1[pi] + vtab[p][a2] + vtab[p][a3]
            transverse |= (tv == 1) & (s % p != 0)
        failing = prim & (zero | ~transverse)
        np.add.at(totals, h[prim], 1)
        np.add.at(fails, h[failing], 1)
    for pt in _tail_points(Bmax):
        _, _, x2s, x3s = pt
        if np.gcd(x2s, abs(x3s)) != 1:
            continue
        h = max(abs(x2s), abs(x3s))
        totals[h] += 1
        fails[h] += 1  # a zero coordinate makes the product form vanish
    return totals, fails


def vtab_get(vtab, primes, val):
    return [int(vtab[p][val]) for p in primes]
