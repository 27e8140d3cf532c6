"""Seeded input generators for the verification suites.

Distributions are deliberately small and documented: rational numerators and
denominators are bounded by 100, polynomial degrees by 4, ramification
indices by 5. Everything is driven by a caller-supplied random.Random so a
(seed, check) pair reproduces its inputs byte for byte.
"""
from __future__ import annotations

import random
from fractions import Fraction

from .fields import Field, FieldElement, PrimeField, FunctionField, QQ
from .witt import TruncationSet, WittVector
from .places import FactoredFunction

MAX_NUM = 100
MAX_DEN = 100
MAX_DEG = 4
MAX_RAMIFICATION = 5


def rand_fraction(rng: random.Random, nonzero: bool = False) -> Fraction:
    while True:
        q = Fraction(rng.randint(-MAX_NUM, MAX_NUM), rng.randint(1, MAX_DEN))
        if q != 0 or not nonzero:
            return q


def rand_element(rng: random.Random, F: Field, nonzero: bool = False):
    """A random element of QQ, a prime field, or a rational-function field
    (low-degree numerator and denominator)."""
    if isinstance(F, PrimeField):
        lo = 1 if nonzero else 0
        return F.from_int(rng.randint(lo, F.p - 1))
    if isinstance(F, FunctionField):
        while True:
            if F.nvars == 1:
                num = rand_upoly_coeffs(rng, F.base, rng.randint(0, 2))
                den = rand_upoly_coeffs(rng, F.base, rng.randint(0, 1),
                                        monic=True)
                val = F.from_upolys(num, den)
            else:
                val = _rand_multivar(rng, F)
            if not val.is_zero() or not nonzero:
                return val
    return F.from_fraction(rand_fraction(rng, nonzero))


def _rand_multivar(rng: random.Random, F: FunctionField):
    """Sum of a few low-degree monomials, over a denominator of 1 or 1+var."""
    gens = [F.var(n) for n in F.names]
    val = F.zero()
    for _ in range(rng.randint(1, 3)):
        term = F.from_fraction(rand_fraction(rng, nonzero=True))
        for g in gens:
            for _ in range(rng.randint(0, 2)):
                term = term * g
        val = val + term
    if rng.random() < 0.3:
        val = val / (F.one() + gens[rng.randrange(len(gens))])
    return val


def rand_upoly_coeffs(rng: random.Random, k: Field, deg: int,
                      monic: bool = False) -> list:
    deg = min(deg, MAX_DEG)
    cs = [rand_element(rng, k) for _ in range(deg + 1)]
    if monic:
        cs[-1] = k.one()
    else:
        while cs[-1].is_zero():
            cs[-1] = rand_element(rng, k)
    return cs


def rand_witt(rng: random.Random, S: TruncationSet, ring,
              nonzero: bool = False) -> WittVector:
    while True:
        w = WittVector(S, ring, {s: rand_element(rng, ring) for s in S})
        if not w.is_zero() or not nonzero:
            return w


def linear_pool(K: FunctionField, consts) -> list:
    """Monic linear factors t - c for each supplied constant c of the base."""
    k = K.base
    return [[-c, k.one()] for c in consts]


def quadratic_pool(K: FunctionField) -> list:
    """A few quadratics with no rational roots (squarefree over any base
    where -1, 2, and -2 are non-squares ... which holds over QQ and QQ(x))."""
    k = K.base
    one, zero = k.one(), k.zero()
    return [
        [one, zero, one],            # t^2 + 1
        [one + one, zero, one],      # t^2 + 2
        [-(one + one), zero, one],   # t^2 - 2
    ]


def rand_factored(rng: random.Random, K: FunctionField, pool: list,
                  max_factors: int = 3, allow_negative: bool = True,
                  unit_nonone: bool = True, units: list = None,
                  max_exp: int = 2) -> FactoredFunction:
    """unit * prod pi^e with pi drawn (without replacement) from the pool.

    `units`, when given, is a pool of base elements to draw the unit from;
    useful over towers where fully random base elements are needlessly deep.
    `max_exp` bounds |e|; exponent 1 keeps data shallow over nested bases."""
    count = rng.randint(1, min(max_factors, len(pool)))
    picks = rng.sample(range(len(pool)), count)
    factors = []
    for i in picks:
        e = rng.randint(1, max_exp)
        if allow_negative and rng.random() < 0.5:
            e = -e
        factors.append((list(pool[i]), e))
    if units is not None:
        unit = rng.choice(units)
    elif unit_nonone:
        unit = rand_element(rng, K.base, nonzero=True)
    else:
        unit = K.base.one()
    return FactoredFunction(K, unit, factors)
