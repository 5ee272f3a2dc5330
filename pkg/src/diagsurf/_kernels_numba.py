"""numba implementations of the height-scan inner loops.

These kernels only count; all reductions are exact integer sums, so results
are independent of the thread count and schedule.  The pure-numpy fallbacks
in :mod:`diagsurf._kernels_numpy` compute the same quantities by independent
enumeration and the test-suite pins the two against each other.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange


@njit(cache=True)
def _gcd2(a, b):
    while b:
        a, b = b, a % b
    return a


@njit(cache=True)
def _cubic_class(m0, m1, m2, m3):
    """Class id and shifted residues for valuations already reduced mod 3."""
    for s in range(3):
        r0 = (m0 + s) % 3
        r1 = (m1 + s) % 3
        r2 = (m2 + s) % 3
        r3 = (m3 + s) % 3
        c0 = (r0 == 0) + (r1 == 0) + (r2 == 0) + (r3 == 0)
        c1 = (r0 == 1) + (r1 == 1) + (r2 == 1) + (r3 == 1)
        c2 = 4 - c0 - c1
        if c0 == 4:
            return 1, r0, r1, r2, r3
        if c0 == 3 and c1 == 1:
            return 2, r0, r1, r2, r3
        if c0 == 3 and c2 == 1:
            return 3, r0, r1, r2, r3
        if c0 == 2 and c1 == 2:
            return 4, r0, r1, r2, r3
        if c0 == 2 and c1 == 1 and c2 == 1:
            return 5, r0, r1, r2, r3
    return 0, 0, 0, 0, 0


@njit(cache=True)
def _cubic_point_soluble(a0, a1, a2, a3, primes, v3, u9, vp, up, is_cube, inv, bad3):
    """Everywhere-locally-soluble check for a point with nonzero coordinates."""
    b0 = abs(a0)
    b1 = abs(a1)
    b2 = abs(a2)
    b3 = abs(a3)
    # p = 3
    cid, r0, r1, r2, r3 = _cubic_class(
        v3[b0] % 3, v3[b1] % 3, v3[b2] % 3, v3[b3] % 3
    )
    if cid == 3:
        code = 0
        for i in range(4):
            if i == 0:
                r, b, neg = r0, b0, a0 < 0
            elif i == 1:
                r, b, neg = r1, b1, a1 < 0
            elif i == 2:
                r, b, neg = r2, b2, a2 < 0
            else:
                r, b, neg = r3, b3, a3 < 0
            if r == 0:
                u = u9[b]
                if neg:
                    u = (9 - u) % 9
                code = code * 9 + u
        if bad3[code]:
            return False
    # primes = 1 mod 3 dividing a coefficient
    for t in range(len(primes)):
        if vp[t, b0] == 0 and vp[t, b1] == 0 and vp[t, b2] == 0 and vp[t, b3] == 0:
            continue
        p = primes[t]
        cid, r0, r1, r2, r3 = _cubic_class(
            vp[t, b0] % 3, vp[t, b1] % 3, vp[t, b2] % 3, vp[t, b3] % 3
        )
        if cid <= 3:
            continue
        ux = -1
        uy = -1
        uz = -1
        uw = -1
        for i in range(4):
            if i == 0:
                r, b, neg = r0, b0, a0 < 0
            elif i == 1:
                r, b, neg = r1, b1, a1 < 0
            elif i == 2:
                r, b, neg = r2, b2, a2 < 0
            else:
                r, b, neg = r3, b3, a3 < 0
            u = up[t, b]
            if neg:
                u = (p - u) % p
            if r == 0:
                if ux < 0:
                    ux = u
                else:
                    uy = u
            elif r == 1:
                if uz < 0:
                    uz = u
                else:
                    uw = u
        ratio = (p - (uy * inv[t, ux]) % p) % p
        ok = is_cube[t, ratio]
        if cid == 4 and not ok:
            ratio = (p - (uw * inv[t, uz]) % p) % p
            ok = is_cube[t, ratio]
        if not ok:
            return False
    return True


@njit(cache=True)
def _count_zero_lead_slab(B):
    """Canonical primitive points with x0 = 0 (all are cones): count them."""
    total = np.int64(0)
    # (0, x1, x2, x3), x1 >= 1
    for x1 in range(1, B + 1):
        for x2 in range(-B, B + 1):
            g2 = _gcd2(x1, abs(x2))
            if g2 == 1:
                total += 2 * B + 1
            else:
                for x3 in range(-B, B + 1):
                    if _gcd2(g2, abs(x3)) == 1:
                        total += 1
    # (0, 0, x2, x3), x2 >= 1
    for x2 in range(1, B + 1):
        for x3 in range(-B, B + 1):
            if _gcd2(x2, abs(x3)) == 1:
                total += 1
    # (0, 0, 0, 1)
    total += 1
    return total


@njit(cache=True, parallel=True)
def cubic_scan(B, primes, v3, u9, vp, up, is_cube, inv, bad3):
    """Counts (total, soluble, cones) over canonical points of height <= B."""
    acc = np.zeros((B + 1, 3), dtype=np.int64)
    for x0 in prange(1, B + 1):
        tot = np.int64(0)
        sol = np.int64(0)
        cone = np.int64(0)
        for x1 in range(-B, B + 1):
            g1 = _gcd2(x0, abs(x1))
            for x2 in range(-B, B + 1):
                g2 = _gcd2(g1, abs(x2))
                for x3 in range(-B, B + 1):
                    if g2 != 1 and _gcd2(g2, abs(x3)) != 1:
                        continue
                    tot += 1
                    if x1 == 0 or x2 == 0 or x3 == 0:
                        cone += 1
                        sol += 1
                    elif _cubic_point_soluble(
                        x0, x1, x2, x3, primes, v3, u9, vp, up, is_cube, inv, bad3
                    ):
                        sol += 1
        acc[x0, 0] = tot
        acc[x0, 1] = sol
        acc[x0, 2] = cone
    zeros = _count_zero_lead_slab(B)
    acc[0, 0] = zeros
    acc[0, 1] = zeros
    acc[0, 2] = zeros
    out = np.zeros(3, dtype=np.int64)
    for i in range(B + 1):
        out[0] += acc[i, 0]
        out[1] += acc[i, 1]
        out[2] += acc[i, 2]
    return out


@njit(cache=True)
def _quartic_point_soluble(a0, a1, a2, a3, B, primes, always, cls, n_cls, verdict, offset):
    """Local solubility at every relevant prime for nonzero coordinates."""
    pos0 = (a0 > 0) or (a1 > 0) or (a2 > 0) or (a3 > 0)
    neg0 = (a0 < 0) or (a1 < 0) or (a2 < 0) or (a3 < 0)
    if not (pos0 and neg0):
        return False
    for t in range(len(primes)):
        p = primes[t]
        if not always[t]:
            if a0 % p != 0 and a1 % p != 0 and a2 % p != 0 and a3 % p != 0:
                continue
        n = n_cls[t]
        c0 = cls[t, a0 + B]
        c1 = cls[t, a1 + B]
        c2 = cls[t, a2 + B]
        c3 = cls[t, a3 + B]
        idx = ((c0 * n + c1) * n + c2) * n + c3
        if not verdict[offset[t] + idx]:
            return False
    return True


@njit(cache=True, parallel=True)
def quartic_scan(B, primes, always, cls, n_cls, verdict, offset):
    """Counts (total, soluble, cones) over canonical points of height <= B."""
    acc = np.zeros((B + 1, 3), dtype=np.int64)
    for x0 in prange(1, B + 1):
        tot = np.int64(0)
        sol = np.int64(0)
        cone = np.int64(0)
        for x1 in range(-B, B + 1):
            g1 = _gcd2(x0, abs(x1))
            for x2 in range(-B, B + 1):
                g2 = _gcd2(g1, abs(x2))
                for x3 in range(-B, B + 1):
                    if g2 != 1 and _gcd2(g2, abs(x3)) != 1:
                        continue
                    tot += 1
                    if x1 == 0 or x2 == 0 or x3 == 0:
                        cone += 1
                        sol += 1
                    elif _quartic_point_soluble(
                        x0, x1, x2, x3, B, primes, always, cls, n_cls, verdict, offset
                    ):
                        sol += 1
        acc[x0, 0] = tot
        acc[x0, 1] = sol
        acc[x0, 2] = cone
    zeros = _count_zero_lead_slab(B)
    acc[0, 0] = zeros
    acc[0, 1] = zeros
    acc[0, 2] = zeros
    out = np.zeros(3, dtype=np.int64)
    for i in range(B + 1):
        out[0] += acc[i, 0]
        out[1] += acc[i, 1]
        out[2] += acc[i, 2]
    return out


@njit(cache=True)
def _merge_large(primes_out, exps_out, n, lp, le, ln, val):
    """Merge the large-prime factors of val into the (primes_out, exps_out) slots."""
    for t in range(ln[val]):
        p = lp[val, t]
        e = le[val, t]
        found = False
        for s in range(n):
            if primes_out[s] == p:
                exps_out[s] += e
                found = True
                break
        if not found:
            primes_out[n] = p
            exps_out[n] = e
            n += 1
    return n


@njit(cache=True, parallel=True)
def sieve_scan(Bmax, slab_a, slab_b, lp, le, ln, spf):
    """Transversality failure counts for the coordinate-product instance.

    Enumerates sign-folded sorted 4-tuples (a <= b <= c <= d, a = -height,
    tuple lexicographically <= its negated mirror) with permutation weights.
    Row k of the result holds (sum of weights, sum of failing weights) for
    slab k = (slab_a[k], slab_b[k]); every point in slab k has height exactly
    slab_a[k].  True projective counts are half the accumulated weights.
    """
    acc = np.zeros((len(slab_a), 2), dtype=np.int64)
    for k in prange(len(slab_a)):
        ai = slab_a[k]
        b = slab_b[k]
        a = -ai
        ab = abs(a)
        bb = abs(b)
        gab = _gcd2(ab, bb)
        sab = a + b
        # large primes of |a| and |b| merged once per slab
        base_p = np.zeros(6, dtype=np.int64)
        base_e = np.zeros(6, dtype=np.int64)
        nbase = _merge_large(base_p, base_e, 0, lp, le, ln, ab)
        nbase = _merge_large(base_p, base_e, nbase, lp, le, ln, bb)
        tp = np.zeros(9, dtype=np.int64)
        te = np.zeros(9, dtype=np.int64)
        qf = np.zeros(8, dtype=np.int64)
        tot = np.int64(0)
        fail = np.int64(0)
        eq_ab = a == b
        for c in range(b, ai + 1):
            cb = abs(c)
            g3 = _gcd2(gab, cb)
            s3 = sab + c
            for s in range(nbase):
                tp[s] = base_p[s]
                te[s] = base_e[s]
            ntp = _merge_large(tp, te, nbase, lp, le, ln, cb)
            zero3 = ab == 0 or bb == 0 or cb == 0
            eq_bc = b == c
            if eq_ab and eq_bc:
                w_gt = 4
                w_eq = 1
            elif eq_ab:
                w_gt = 12
                w_eq = 6
            elif eq_bc:
                w_gt = 12
                w_eq = 4
            else:
                w_gt = 24
                w_eq = 12
            # primitivity: prime factors of g3 (g3 <= Bmax)
            nq = 0
            if g3 > 1:
                g = g3
                while g > 1:
                    q = spf[g]
                    qf[nq] = q
                    nq += 1
                    while g % q == 0:
                        g //= q
            neg_c = -c
            for d in range(c, ai + 1):
                if d == ai:
                    if b < neg_c:
                        factor = 2
                    elif b > neg_c:
                        break
                    else:
                        factor = 1
                else:
                    factor = 2
                db = abs(d)
                if g3 == 0:
                    if db != 1:
                        continue
                elif g3 > 1:
                    ok = True
                    for s in range(nq):
                        if db % qf[s] == 0:
                            ok = False
                            break
                    if not ok:
                        continue
                w = factor * (w_eq if d == c else w_gt)
                tot += w
                if zero3 or d == 0:
                    fail += w
                    continue
                ssum = s3 + d
                good = False
                for s in range(ntp):
                    if te[s] == 1:
                        p = tp[s]
                        if d % p != 0 and ssum % p != 0:
                            good = True
                            break
                if not good:
                    for t in range(ln[db]):
                        if le[db, t] != 1:
                            continue
                        p = lp[db, t]
                        seen = False
                        for s in range(ntp):
                            if tp[s] == p:
                                seen = True
                                break
                        if not seen and ssum % p != 0:
                            good = True
                            break
                if not good:
                    fail += w
        acc[k, 0] = tot
        acc[k, 1] = fail
    return acc
