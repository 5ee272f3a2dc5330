"""Transversality experiment: how often does a point of P^3(Q) admit a large
prime dividing f(x) exactly once while missing g(x)?

The shipped instance takes f = X0*X1*X2*X3 (the locus of bad reduction for
the diagonal cubic family) and g = X0+X1+X2+X3, and runs through a dedicated
kernel; arbitrary homogeneous forms given as sums of signed monomials run
through a slower generic path.  Hypotheses on user-supplied forms (f not
dividing a multiple of g, f not of shape f1*f2^2) are not checked here.
"""

from __future__ import annotations

import math
import re
import sys
from dataclasses import dataclass
from math import isqrt

import numpy as np

from . import accel
from ._tables import build_sieve_tables
from .enumeration import ProjPoint, enum_projective
from .padic import build_prime_table

_TOKEN = re.compile(r"\s*(\d+|[Xx][0-3]|\^|\*|\+|-)")


@dataclass(frozen=True)
class Form:
    """A homogeneous integer form in X0..X3 as a sum of signed monomials."""

    monomials: tuple[tuple[int, tuple[int, int, int, int]], ...]
    expr: str

    @property
    def degree(self) -> int:
        return sum(self.monomials[0][1])

    def __call__(self, coords) -> int:
        total = 0
        for coeff, exps in self.monomials:
            term = coeff
            for c, e in zip(coords, exps):
                term *= int(c) ** e
            total += term
        return total


def parse_form(expr: str) -> Form:
    """Parse a sum of signed monomials like ``2*X0^2*X1 - X2*X3^2``."""
    tokens = []
    pos = 0
    while pos < len(expr):
        m = _TOKEN.match(expr, pos)
        if not m:
            raise ValueError(f"bad form syntax near {expr[pos:pos+10]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    tokens.append(None)
    i = 0
    monos: list[tuple[int, tuple[int, int, int, int]]] = []

    def parse_term(sign: int):
        nonlocal i
        coeff = sign
        exps = [0, 0, 0, 0]
        saw_factor = False
        while True:
            tok = tokens[i]
            if tok is None or tok in "+-":
                break
            if tok == "*":
                i += 1
                continue
            if tok.isdigit():
                coeff *= int(tok)
                i += 1
            elif tok[0] in "Xx":
                var = int(tok[1])
                i += 1
                e = 1
                if tokens[i] == "^":
                    i += 1
                    if tokens[i] is None or not tokens[i].isdigit():
                        raise ValueError("exponent must be an integer")
                    e = int(tokens[i])
                    i += 1
                exps[var] += e
            else:
                raise ValueError(f"unexpected token {tok!r}")
            saw_factor = True
        if not saw_factor:
            raise ValueError("empty term")
        monos.append((coeff, (exps[0], exps[1], exps[2], exps[3])))

    sign = 1
    if tokens[i] == "-":
        sign = -1
        i += 1
    elif tokens[i] == "+":
        i += 1
    parse_term(sign)
    while tokens[i] is not None:
        if tokens[i] == "+":
            sign = 1
        elif tokens[i] == "-":
            sign = -1
        else:
            raise ValueError(f"expected + or - between terms, got {tokens[i]!r}")
        i += 1
        parse_term(sign)
    degrees = {sum(e) for _, e in monos}
    if len(degrees) != 1:
        raise ValueError(f"form is not homogeneous: degrees {sorted(degrees)}")
    if degrees == {0}:
        raise ValueError("form must be non-constant")
    return Form(monomials=tuple(monos), expr=expr)


COORDINATE_PRODUCT = parse_form("X0*X1*X2*X3")
COORDINATE_SUM = parse_form("X0+X1+X2+X3")


def _same_form(a: Form, b: Form) -> bool:
    return sorted(a.monomials) == sorted(b.monomials)


@dataclass(frozen=True)
class SieveConfig:
    min_prime: int
    f: Form
    g: Form
    heights: tuple[int, ...]

    def __post_init__(self):
        if self.min_prime < 2:
            raise ValueError("min_prime must be >= 2")
        if not self.heights or list(self.heights) != sorted(set(self.heights)):
            raise ValueError("heights must be ascending and non-empty")


def default_config(heights, min_prime: int = 10) -> SieveConfig:
    return SieveConfig(
        min_prime=min_prime,
        f=COORDINATE_PRODUCT,
        g=COORDINATE_SUM,
        heights=tuple(heights),
    )


def has_transverse_prime(x, min_prime: int, f: Form, g: Form, table=None) -> bool:
    """True iff some prime p > min_prime has v_p(f(x)) = 1 and p not dividing g(x).

    f(x) = 0 is degenerate and returns False.  Valuations come from factoring
    |f(x)| over a smallest-prime-factor table.
    """
    coords = x.coords if isinstance(x, ProjPoint) else tuple(x)
    fx = f(coords)
    if fx == 0:
        return False
    if table is None:
        table = build_prime_table(max(1 << 10, isqrt(abs(fx)) + 1))
    gx = g(coords)
    for p, e in table.factor(fx):
        if p > min_prime and e == 1 and gx % p != 0:
            return True
    return False


@dataclass(frozen=True)
class DecayRow:
    height: int
    total: int
    failures: int

    @property
    def fraction(self) -> float:
        return self.failures / self.total

    @property
    def fraction_times_log_height(self) -> float:
        return self.fraction * math.log(self.height)


@dataclass(frozen=True)
class DecayTable:
    config: SieveConfig
    rows: tuple[DecayRow, ...]
    fitted_constant: float


def _fit_c_over_log(rows) -> float:
    """Least squares for fraction = c / log B over the table rows."""
    num = 0.0
    den = 0.0
    for r in rows:
        x = 1.0 / math.log(r.height) if r.height > 1 else 0.0
        num += r.fraction * x
        den += x * x
    return num / den if den else float("nan")


def failure_counts(config: SieveConfig, threads: int | None = None) -> DecayTable:
    """Counts of points without a transverse prime, per height bound.

    The shipped coordinate-product instance uses the scan kernel; other forms
    enumerate points directly, which is only practical for small heights.
    """
    bmax = config.heights[-1]
    accel.set_threads(threads)
    if _same_form(config.f, COORDINATE_PRODUCT) and _same_form(
        config.g, COORDINATE_SUM
    ):
        tables = build_sieve_tables(bmax, config.min_prime)
        totals, fails = accel.sieve_counts(tables)
        cum_t = np.cumsum(totals)
        cum_f = np.cumsum(fails)
        rows = tuple(
            DecayRow(height=B, total=int(cum_t[B]), failures=int(cum_f[B]))
            for B in config.heights
        )
        return DecayTable(config=config, rows=rows, fitted_constant=_fit_c_over_log(rows))
    if bmax > 80:
        print(
            f"note: generic-form path enumerates ~{(2*bmax+1)**4//2:.2g} points in Python",
            file=sys.stderr,
        )
    bound = 0
    for coeff, _ in config.f.monomials:
        bound += abs(coeff) * bmax**config.f.degree
    table = build_prime_table(max(1 << 10, isqrt(bound) + 1))
    totals = np.zeros(bmax + 1, dtype=np.int64)
    fails = np.zeros(bmax + 1, dtype=np.int64)
    for pt in enum_projective(bmax):
        h = pt.height
        totals[h] += 1
        if not has_transverse_prime(pt, config.min_prime, config.f, config.g, table):
            fails[h] += 1
    cum_t = np.cumsum(totals)
    cum_f = np.cumsum(fails)
    rows = tuple(
        DecayRow(height=B, total=int(cum_t[B]), failures=int(cum_f[B]))
        for B in config.heights
    )
    return DecayTable(config=config, rows=rows, fitted_constant=_fit_c_over_log(rows))
