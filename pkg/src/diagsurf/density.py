"""Exact local densities for the diagonal cubic family and their Euler product.

Every per-prime density is computed twice: once as the class decomposition
sum(A_i * V_i) and once from the closed form, both in exact rational
arithmetic.  The two routes must agree exactly; a mismatch is a hard internal
error, never papered over.  Floats appear only in the final Euler
accumulation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .padic import build_prime_table


class ConsistencyError(RuntimeError):
    """Two independent exact computations of the same quantity disagreed."""


def A_coeff(p: int, i: int) -> Fraction:
    """Solubility volume of class delta_i: the fraction of coefficient vectors
    with that valuation class whose surface has a Q_p-point."""
    if not 1 <= i <= 5:
        raise ValueError(f"class index must be in 1..5, got {i}")
    if p == 3:
        return Fraction(7, 9) if i == 3 else Fraction(1)
    if p % 3 == 1:
        if i == 4:
            return Fraction(5, 9)
        if i == 5:
            return Fraction(1, 3)
        return Fraction(1)
    return Fraction(1)


# f_i(x) as (multiplier, exponents); V_i = (1-1/p)^4/(1-1/p^3)^4 * f_i(1/p)
_F_POLYS = {
    1: (1, (0, 4, 8)),
    2: (4, (1, 5, 6)),
    3: (4, (2, 3, 7)),
    4: (6, (2, 4, 6)),
    5: (12, (3, 4, 5)),
}


def V_coeff(p: int, i: int) -> Fraction:
    """Haar volume of the set of coefficient vectors with valuation class delta_i."""
    if not 1 <= i <= 5:
        raise ValueError(f"class index must be in 1..5, got {i}")
    x = Fraction(1, p)
    pref = ((1 - x) / (1 - x**3)) ** 4
    mult, exps = _F_POLYS[i]
    return pref * mult * sum(x**e for e in exps)


@dataclass(frozen=True)
class LocalDensity:
    p: int
    value: Fraction
    float_value: float


def _sigma_closed_form(p: int) -> Fraction:
    x = Fraction(1, p)
    pref = ((1 - x) / (1 - x**3)) ** 3
    if p == 3:
        bracket = (
            1
            + 3 * x
            + Fraction(46, 9) * x**2
            + 7 * x**3
            + Fraction(62, 9) * x**4
            + Fraction(19, 9) * x**5
            + x**6
        )
        return pref * bracket
    if p % 3 == 1:
        return (
            pref
            * (1 - x + x**2)
            * (1 + x + Fraction(1, 3) * x**2)
            * (1 + 3 * x + 3 * x**2)
        )
    return Fraction(1)


def sigma_p_cubic(p: int) -> LocalDensity:
    """Exact density of Q_p-soluble coefficient vectors in Z_p^4.

    Computed both as sum(A_i * V_i) and from the closed form; the exact
    rationals must coincide.
    """
    by_classes = sum((A_coeff(p, i) * V_coeff(p, i) for i in range(1, 6)), Fraction(0))
    closed = _sigma_closed_form(p)
    if by_classes != closed:
        raise ConsistencyError(
            f"sigma_{p}: class sum {by_classes} != closed form {closed}"
        )
    return LocalDensity(p=p, value=closed, float_value=float(closed))


@dataclass(frozen=True)
class EulerProductReport:
    limit: int
    partial_product: float
    n_factors: int
    tail_indicator: float
    crude_tail_bound: float


def _kahan_log_product(factors) -> float:
    total = 0.0
    comp = 0.0
    for f in factors:
        y = math.log(f) - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return math.exp(total)


def euler_product_cubic(limit: int) -> EulerProductReport:
    """Product of sigma_p over p = 3 and p = 1 mod 3, p <= limit.

    Factors are the float renderings of the exact rationals, combined in
    ascending prime order through compensated log summation, so the result is
    reproducible bit for bit.  The tail indicator compares against the
    truncation at limit/10; the crude analytic bound 9/limit dominates
    sum_{p > limit} |1 - sigma_p|.
    """
    if limit < 3:
        raise ValueError(f"limit must be >= 3, got {limit}")
    table = build_prime_table(limit)
    ps = [3] + [int(p) for p in table.primes if p % 3 == 1]
    factors = [sigma_p_cubic(p).float_value for p in ps]
    value = _kahan_log_product(factors)
    sub = limit // 10
    sub_factors = [f for p, f in zip(ps, factors) if p <= sub]
    sub_value = _kahan_log_product(sub_factors) if sub_factors else 1.0
    return EulerProductReport(
        limit=limit,
        partial_product=value,
        n_factors=len(factors),
        tail_indicator=abs(value - sub_value),
        crude_tail_bound=9.0 / limit,
    )
