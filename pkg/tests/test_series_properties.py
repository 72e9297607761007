"""Randomized law suite for the series ring (seeded, deterministic).

Six law families at 200 cases each (1200 total) cover the ring axioms on
truncations, valuation additivity, the derivative-valuation identity, the
Leibniz rule, inversion and the power/root inverse identities.
"""

import random
from fractions import Fraction as F

from puiseux.series import INF, PuiseuxSeries

EXPONENT_POOL = [
    F(-2), F(-3, 2), F(-1), F(-1, 2), F(-1, 3), F(0),
    F(1, 3), F(1, 2), F(1), F(3, 2), F(2), F(7, 3), F(3),
]
CASES = 200


def random_series(rng, max_terms=6, allow_trunc=True, nonzero=False):
    n = rng.randint(1 if nonzero else 0, max_terms)
    exps = rng.sample(EXPONENT_POOL, min(n, len(EXPONENT_POOL)))
    terms = [(e, F(rng.randint(-5, 5))) for e in exps]
    terms = [(e, c) for e, c in terms if c]
    if nonzero and not terms:
        terms = [(rng.choice(EXPONENT_POOL), F(rng.randint(1, 5)))]
    trunc = INF
    if allow_trunc and rng.random() < 0.4:
        trunc = rng.choice([e for e in EXPONENT_POOL if e > 0]) + rng.randint(0, 3)
    return PuiseuxSeries(terms, trunc)


def common_window(*series):
    w = min(s.trunc for s in series)
    return w


def test_ring_laws():
    rng = random.Random(20260810)
    for _ in range(CASES):
        a = random_series(rng)
        b = random_series(rng)
        c = random_series(rng)
        assoc_l = (a + b) + c
        assoc_r = a + (b + c)
        assert assoc_l == assoc_r
        dist_l = a * (b + c)
        dist_r = a * b + a * c
        w = common_window(dist_l, dist_r)
        assert dist_l.agrees_with(dist_r, w)
        comm = a * b
        assert comm == b * a


def test_valuation_additivity():
    rng = random.Random(20260811)
    for _ in range(CASES):
        a = random_series(rng, nonzero=True, allow_trunc=False)
        b = random_series(rng, nonzero=True, allow_trunc=False)
        assert (a * b).valuation() == a.valuation() + b.valuation()


def test_derivative_valuation_identity():
    rng = random.Random(20260812)
    checked = 0
    while checked < CASES:
        a = random_series(rng, nonzero=True, allow_trunc=False)
        v = a.valuation()
        if v == 0 or v == INF:
            continue
        assert a.differentiate().valuation() == v - 1
        checked += 1


def test_leibniz_rule():
    rng = random.Random(20260813)
    for _ in range(CASES):
        a = random_series(rng)
        b = random_series(rng)
        lhs = (a * b).differentiate()
        rhs = a.differentiate() * b + a * b.differentiate()
        w = common_window(lhs, rhs)
        assert lhs.agrees_with(rhs, w)


def test_inverse_identity():
    rng = random.Random(20260814)
    for _ in range(CASES):
        a = random_series(rng, nonzero=True, allow_trunc=False)
        inv = a.invert(prec=a.valuation() * -1 + 4)
        prod = a * inv
        assert prod.coefficient(0) == 1
        assert all(c == 0 for e, c in prod.terms if e != 0)


def test_power_root_inverse():
    rng = random.Random(20260815)
    for _ in range(CASES):
        a = random_series(rng, max_terms=3, nonzero=True, allow_trunc=False)
        e0, c0 = a.leading()
        q = rng.choice([2, 3])
        # engineer an exact q-th-power leading term so a branch exists
        base = a.shift(-e0).scale(1 / c0)  # leading term 1
        p = rng.choice([1, 2, -1])
        sigma = F(p, q)
        root = base.pow_rational(sigma, branch=1, prec=3)
        back = root.pow_rational(F(q), prec=3)
        target = base.pow_rational(F(p), prec=3)
        w = min(back.trunc, target.trunc, F(3))
        assert back.agrees_with(target, w)


def test_case_count_is_at_least_1000():
    assert 6 * CASES >= 1000
