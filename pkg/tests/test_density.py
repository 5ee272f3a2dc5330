import math
from fractions import Fraction

import numpy as np
import pytest

from diagsurf.cubic import cubic_soluble_at
from diagsurf.density import (
    A_coeff,
    V_coeff,
    euler_product_cubic,
    sigma_p_cubic,
)
from diagsurf.padic import build_prime_table, sample_zp_batch


def test_A_table():
    assert A_coeff(3, 3) == Fraction(7, 9)
    assert A_coeff(7, 4) == Fraction(5, 9)
    assert A_coeff(13, 5) == Fraction(1, 3)
    assert A_coeff(2, 4) == 1
    assert A_coeff(3, 1) == A_coeff(3, 2) == A_coeff(3, 4) == A_coeff(3, 5) == 1
    with pytest.raises(ValueError):
        A_coeff(7, 6)


def test_V_values():
    assert V_coeff(2, 1) == Fraction(273, 2401)
    assert V_coeff(9973, 1) > Fraction(999, 1000)
    with pytest.raises(ValueError):
        V_coeff(7, 0)


def test_V_partition_of_unity():
    table = build_prime_table(1000)
    for p in (int(q) for q in table.primes):
        assert sum(V_coeff(p, i) for i in range(1, 6)) == 1


def test_sigma_dual_route_small():
    table = build_prime_table(500)
    for p in (int(q) for q in table.primes):
        d = sigma_p_cubic(p)  # raises on dual-route mismatch
        if p % 3 == 2:
            assert d.value == 1
        else:
            assert 0 < d.value < 1


def test_sigma_3_exact():
    d = sigma_p_cubic(3)
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
    assert d.value == expected == Fraction(6391, 6591)


def test_sigma_tail_bound():
    table = build_prime_table(10**4)
    for p in (int(q) for q in table.primes if q >= 7):
        assert abs(sigma_p_cubic(p).float_value - 1.0) <= 9.0 / p**2


def test_euler_product_small_limits():
    r = euler_product_cubic(5)
    assert r.n_factors == 1  # sigma_3 alone below 7
    assert r.partial_product == sigma_p_cubic(3).float_value


def test_euler_product_monotone():
    vals = [euler_product_cubic(10**k).partial_product for k in (3, 4, 5)]
    assert vals[0] > vals[1] > vals[2]


def test_euler_product_deterministic():
    a = euler_product_cubic(30_000)
    b = euler_product_cubic(30_000)
    assert a.partial_product == b.partial_product


def _mc_sigma_cubic(p: int, n: int, seed: int) -> tuple[float, float]:
    k = 1
    while p**k < 10**7:
        k += 1
    vals = [sample_zp_batch(p, k, seed, np.arange(n, dtype=np.int64) * 4 + c) for c in range(4)]
    soluble = 0
    for i in range(n):
        a = tuple(int(vals[c][i]) for c in range(4))
        if any(x == 0 for x in a):
            a = tuple(x if x else 1 for x in a)  # measure-zero truncation artifact
        soluble += cubic_soluble_at(a, p)
    f = soluble / n
    return f, math.sqrt(f * (1 - f) / n)


@pytest.mark.parametrize("p", [3, 7, 13, 31])
def test_sigma_matches_monte_carlo(p):
    exact = sigma_p_cubic(p).float_value
    f, se = _mc_sigma_cubic(p, 100_000, seed=2718)
    assert abs(f - exact) <= 4 * se, (p, f, exact, se)
