import random
from itertools import permutations, product

import pytest

from diagsurf.cubic import (
    DELTA_CLASSES,
    cubic_els,
    cubic_soluble_at,
    normalize_cubic,
    q3_bad_set,
    valuation_class,
)
from diagsurf.search import search_diagonal


def _closure_classes(max_entry=12):
    """Brute-force closure of the equivalence relation on valuation vectors.

    Symmetric generators on sorted vectors with entries capped at max_entry:
    common shift by +-1 and +-3 on a single coordinate (permutations are
    absorbed by keeping vectors sorted).  Returns a map sorted-vector ->
    class id, seeded by the five representatives.
    """
    label = {}
    frontier = []
    for cls in DELTA_CLASSES:
        label[cls.representative] = cls.id
        frontier.append(cls.representative)
    while frontier:
        v = frontier.pop()
        lid = label[v]
        moves = []
        if max(v) < max_entry:
            moves.append(tuple(x + 1 for x in v))
        if min(v) >= 1:
            moves.append(tuple(x - 1 for x in v))
        for i in range(4):
            w = list(v)
            w[i] += 3
            if w[i] <= max_entry:
                moves.append(tuple(w))
            w = list(v)
            w[i] -= 3
            if w[i] >= 0:
                moves.append(tuple(w))
        for w in moves:
            w = tuple(sorted(w))
            if w in label:
                assert label[w] == lid, (w, label[w], lid)
            else:
                label[w] = lid
                frontier.append(w)
    return label


def test_valuation_class_vs_closure():
    label = _closure_classes()
    # the closure labels every vector of weight <= 8, and the fast classifier
    # must agree with it everywhere
    for v in product(range(9), repeat=4):
        if sum(v) > 8:
            continue
        cls, _rec = valuation_class(v)
        key = tuple(sorted(v))
        assert key in label, f"closure did not reach {key}"
        assert cls.id == label[key], (v, cls.id, label[key])
    # the five representatives really are pairwise inequivalent
    assert {label[c.representative] for c in DELTA_CLASSES} == {1, 2, 3, 4, 5}


def test_valuation_class_constant_on_moves():
    rng = random.Random(5)
    for _ in range(300):
        v = tuple(rng.randrange(0, 9) for _ in range(4))
        cid = valuation_class(v)[0].id
        assert valuation_class(tuple(reversed(v)))[0].id == cid
        assert valuation_class(tuple(x + 1 for x in v))[0].id == cid
        w = list(v)
        w[rng.randrange(4)] += 3
        assert valuation_class(tuple(w))[0].id == cid


@pytest.mark.parametrize(
    "v,cid",
    [
        ((0, 0, 0, 0), 1),
        ((1, 1, 1, 1), 1),
        ((0, 1, 1, 1), 3),
        ((2, 5, 0, 3), 4),
        ((0, 0, 0, 2), 3),
        ((0, 0, 1, 2), 5),
    ],
)
def test_valuation_class_examples(v, cid):
    assert valuation_class(v)[0].id == cid


def test_normalize_cubic_examples():
    nc = normalize_cubic((1, 1, 1, 1), 7)
    assert nc.klass.id == 1 and nc.units == (1, 1, 1, 1)
    nc = normalize_cubic((1, 1, 7, 7), 7)
    assert nc.klass.id == 4 and nc.units == (1, 1, 1, 1)
    nc = normalize_cubic((9, 1, 3, 3), 3)
    assert nc.klass.id == 5


def test_normalize_cubic_equisoluble():
    rng = random.Random(31)
    for p in (3, 7):
        for _ in range(60):
            a = tuple(
                rng.choice((1, -1)) * rng.randrange(1, p**2) * p ** rng.randrange(0, 5)
                for _ in range(4)
            )
            nc = normalize_cubic(a, p)
            rep = nc.representative_coeffs()
            assert (
                search_diagonal(3, rep, p).is_soluble
                == search_diagonal(3, a, p).is_soluble
            )


def test_q3_bad_set():
    bad = q3_bad_set()
    assert len(bad) == 48
    assert (1, 2, 4, 0) in bad
    assert (8, 7, 5, 0) in bad  # negation of (1,2,4,0) mod 9
    for t in bad:
        assert t[3] == 0
        assert all(0 <= x < 9 for x in t)


@pytest.mark.parametrize(
    "a,p,expected",
    [
        ((1, 1, 1, 1), 7, True),
        ((1, 2, 4, 9), 3, False),
        ((1, 1, 7, 7), 7, True),
        ((1, 2, 7, 14), 7, False),
        ((4, 11, 17, 23), 5, True),  # p = 2 mod 3: always soluble
        ((2, 3, 7, 11), 2, True),
    ],
)
def test_cubic_soluble_at_examples(a, p, expected):
    assert cubic_soluble_at(a, p) == expected


def test_criterion_invariances():
    rng = random.Random(77)
    for p in (3, 7, 13):
        for _ in range(120):
            a = tuple(
                rng.choice((1, -1)) * rng.randrange(1, p**3) * p ** rng.randrange(0, 5)
                for _ in range(4)
            )
            base = cubic_soluble_at(a, p)
            perm = tuple(a[i] for i in rng.sample(range(4), 4))
            assert cubic_soluble_at(perm, p) == base
            k = rng.randrange(1, 50)
            assert cubic_soluble_at(tuple(k * x for x in a), p) == base
            c = rng.randrange(1, p**2)
            c = c if c % p else c + 1
            cubed = (a[0] * c**3, a[1], a[2], a[3])
            assert cubic_soluble_at(cubed, p) == base
            # stability: perturbation far below the criterion depth
            t = rng.randrange(1, 100)
            bumped = (a[0] + p**10 * t * (p ** val(a[0], p)), a[1], a[2], a[3])
            assert cubic_soluble_at(bumped, p) == base


def val(n, p):
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def test_criterion_matches_search():
    rng = random.Random(13)
    for p in (3, 7, 13, 31):
        for _ in range(400):
            a = tuple(
                rng.choice((1, -1)) * rng.randrange(1, p**2) * p ** rng.randrange(0, 6)
                for _ in range(4)
            )
            assert cubic_soluble_at(a, p) == search_diagonal(3, a, p).is_soluble, a


def test_delta3_sweep_exact():
    """Exhaustive delta_3 representatives at p=3: insoluble fraction 2/9,
    criterion and search in full agreement."""
    units = (1, 2, 4, 5, 7, 8)
    insoluble = 0
    total = 0
    for u in product(units, repeat=4):
        a = (u[0], u[1], u[2], 9 * u[3])
        total += 1
        crit = cubic_soluble_at(a, 3)
        assert crit == search_diagonal(3, a, 3).is_soluble, a
        if not crit:
            insoluble += 1
    assert total == 6**4
    assert insoluble * 9 == 2 * total  # exactly 2/9


def test_cubic_els():
    assert cubic_els((1, 1, 1, 1)) == (True, [])
    assert cubic_els((1, 2, 4, 9)) == (False, [3])
    assert cubic_els((1, 2, 7, 14)) == (False, [7])
    assert cubic_els((0, 5, 3, 2)) == (True, [])  # cone
    with pytest.raises(ValueError):
        cubic_els((0, 0, 0, 0))


def test_zero_coefficient_rejected():
    with pytest.raises(ValueError):
        cubic_soluble_at((0, 1, 1, 1), 7)
