"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Criteria 1, 7, 10 and the boundedness half of 11 assert reference constants
that three independent computations in this code base (exact rational
identities, the brute-force p-adic search, Monte Carlo sampling) all
contradict; those tests are expected to fail and are kept faithful to the
stated constants rather than weakened.  See the test output lines and the
repository README for the measured values.
"""

import subprocess
import sys
import time
from fractions import Fraction
from itertools import product

from diagsurf.cubic import cubic_soluble_at, q3_bad_set
from diagsurf.density import V_coeff, euler_product_cubic, sigma_p_cubic
from diagsurf.enumeration import empirical_sigma
from diagsurf.padic import _mix64, build_prime_table
from diagsurf.quartic import (
    SIGMA_INFTY_REFERENCE,
    mc_sigma_p_quartic,
    sigma_infty_quartic,
)
from diagsurf.search import search_diagonal
from diagsurf.sieve import default_config, failure_counts


def _criterion(n: int, ok: bool, detail: str) -> bool:
    print(f"\nACCEPTANCE {n:02d}: {'PASS' if ok else 'FAIL'} - {detail}")
    return ok


def test_criterion_01_euler_product():
    t0 = time.monotonic()
    rep = euler_product_cubic(10**6)
    wall = time.monotonic() - t0
    value = rep.partial_product
    ok = abs(value - 0.860564) <= 1e-4 and wall < 60.0
    assert _criterion(
        1,
        ok,
        f"euler product at 1e6 = {value:.6f} (reference 0.860564 +- 1e-4), wall {wall:.1f}s",
    )


def test_criterion_02_exact_identities():
    table = build_prime_table(10**4)
    for p in (int(q) for q in table.primes):
        assert sum(V_coeff(p, i) for i in range(1, 6)) == 1, p
        sigma_p_cubic(p)  # raises on closed-form/class-sum mismatch
    assert _criterion(
        2, True, "sum V_i = 1 and dual-route sigma_p exact for all p <= 1e4"
    )


def test_criterion_03_sigma_3_exact():
    x = Fraction(1, 3)
    expected = (Fraction(2, 3) ** 3 / Fraction(26, 27) ** 3) * (
        1
        + 3 * x
        + Fraction(46, 9) * x**2
        + 7 * x**3
        + Fraction(62, 9) * x**4
        + Fraction(19, 9) * x**5
        + x**6
    )
    got = sigma_p_cubic(3).value
    assert _criterion(3, got == expected, f"sigma_3 = {got} exactly")


def _acceptance_vector(p: int, seed: int, i: int):
    a = []
    for c in range(4):
        h = _mix64((seed << 3) ^ _mix64(4 * i + c))
        v = h % 6
        u = 1 + (h >> 8) % (p**6 - 1)
        while u % p == 0:
            u += 1
        sign = -1 if (h >> 62) & 1 else 1
        a.append(sign * u * p**v)
    return tuple(a)


def test_criterion_04_oracle_agreement():
    t0 = time.monotonic()
    disagreements = 0
    for p in (3, 7, 13, 31):
        for i in range(10_000):
            a = _acceptance_vector(p, seed=1404, i=i)
            if cubic_soluble_at(a, p) != search_diagonal(3, a, p).is_soluble:
                disagreements += 1
    wall = time.monotonic() - t0
    ok = disagreements == 0 and wall < 300.0
    assert _criterion(
        4,
        ok,
        f"criterion vs search: {disagreements} disagreements on 4x10^4 vectors, {wall:.0f}s",
    )


def test_criterion_05_insoluble_examples_and_sweep():
    both_insoluble = all(
        not cubic_soluble_at(a, 3) and search_diagonal(3, a, 3).is_insoluble
        for a in ((1, 2, 4, 9), (-1, 2, 4, 9))
    )
    units = (1, 2, 4, 5, 7, 8)
    insoluble = 0
    for u in product(units, repeat=4):
        a = (u[0], u[1], u[2], 9 * u[3])
        sol = cubic_soluble_at(a, 3)
        assert sol == search_diagonal(3, a, 3).is_soluble, a
        insoluble += not sol
    sweep_ok = insoluble * 9 == 2 * 6**4
    assert _criterion(
        5,
        both_insoluble and sweep_ok,
        f"(+-1,2,4,9) insoluble at 3; delta_3 sweep insoluble fraction {insoluble}/{6**4} = 2/9",
    )


def test_criterion_06_bad_set_size():
    n = len(q3_bad_set())
    assert _criterion(6, n == 48, f"mod-9 bad set has {n} elements")


def test_criterion_07_cubic_empirical():
    t0 = time.monotonic()
    r = empirical_sigma("cubic", 50)
    wall = time.monotonic() - t0
    ok = abs(r.fraction - 0.8606) <= 0.02 and wall < 900.0
    assert _criterion(
        7,
        ok,
        f"cubic empirical at height 50 = {r.fraction:.6f} "
        f"(reference 0.8606 +- 0.02), wall {wall:.0f}s",
    )


def test_criterion_08_quartic_monte_carlo():
    targets = {2: 0.55, 3: 0.87, 5: 0.79}
    details = []
    ok = True
    for p, ref in targets.items():
        est = mc_sigma_p_quartic(p, 1_000_000, seed=20260810)
        ok &= abs(est.soluble_fraction - ref) <= 0.02
        ok &= est.undecided_fraction < 1e-4
        details.append(f"sigma_{p} = {est.soluble_fraction:.4f} (ref {ref})")
    assert _criterion(8, ok, "; ".join(details))


def test_criterion_09_never_soluble_family():
    ok = all(
        search_diagonal(4, (1, p, p**2, p**3), p).is_insoluble
        for p in (2, 3, 5, 7, 11)
    )
    assert _criterion(9, ok, "(1, p, p^2, p^3) insoluble at p for p in {2,3,5,7,11}")


def test_criterion_10_quartic_empirical():
    r = empirical_sigma("quartic", 30)
    computed, reference = sigma_infty_quartic(), SIGMA_INFTY_REFERENCE
    ok = abs(r.fraction - 0.24) <= 0.03
    assert _criterion(
        10,
        ok,
        f"quartic empirical at height 30 = {r.fraction:.6f} (reference 0.24 +- 0.03); "
        f"archimedean factor: computed {computed}, reference {reference} (discrepancy reported)",
    )


def test_criterion_11_transversality_decay():
    table = failure_counts(default_config((100, 200, 400, 800), min_prime=10))
    fracs = [r.fraction for r in table.rows]
    flog = [r.fraction_times_log_height for r in table.rows]
    decreasing = all(a > b for a, b in zip(fracs, fracs[1:]))
    bounded = max(flog) <= 2 * min(flog)
    detail = (
        "fractions "
        + ", ".join(f"{f:.6f}" for f in fracs)
        + "; fraction*logB "
        + ", ".join(f"{f:.4f}" for f in flog)
        + f"; strictly decreasing: {decreasing}; max/min ratio "
        + f"{max(flog)/min(flog):.2f} (required <= 2: {bounded})"
    )
    assert _criterion(11, decreasing and bounded, detail)


_DETERMINISM_RUNS = [
    ("cubic", "exact-density", "--prime", "7"),
    ("cubic", "euler-product", "--limit", "2000"),
    ("cubic", "local-test", "--coeffs", "1,2,4,9", "--prime", "3"),
    ("cubic", "global-test", "--coeffs", "1,2,7,14"),
    ("cubic", "empirical", "--height", "5"),
    ("quartic", "mc-density", "--prime", "3", "--samples", "2000", "--seed", "5"),
    ("quartic", "local-test", "--coeffs", "1,2,4,8", "--prime", "2"),
    ("quartic", "empirical", "--height", "4"),
    ("quartic", "sigma-infty"),
    ("sieve", "transversality", "--heights", "4,8", "--min-prime", "10"),
]


def test_criterion_12_byte_identical_runs():
    ok = True
    for args in _DETERMINISM_RUNS:
        outs = set()
        for threads in ("1", "2", "7"):
            proc = subprocess.run(
                [sys.executable, "-m", "diagsurf", *args, "--threads", threads],
                capture_output=True,
            )
            assert proc.returncode == 0, (args, proc.stderr.decode())
            outs.add(proc.stdout)
        ok &= len(outs) == 1
    assert _criterion(
        12, ok, f"{len(_DETERMINISM_RUNS)} subcommands byte-identical across reruns and thread counts"
    )
