"""Rational points on chart varieties, for randomized cross-checks."""

import random
from fractions import Fraction

from detsing.polycore import evaluate, substitute, Polynomial
from detsing.resolve import rational_roots


def _univariate(p: Polynomial, v: str):
    i = p.vars.index(v)
    deg = p.degree_in(v)
    coeffs = [Fraction(0)] * (deg + 1)
    for e, c in p.terms.items():
        coeffs[e[i]] += c
    return coeffs


def point_on(gens, vars, rng: random.Random, tries: int = 400):
    """A rational point of V(gens), or None.

    Variables are fixed in random order; whenever some generator becomes a
    nonconstant polynomial in a single free variable, one of its rational
    roots is used instead of a random value.
    """
    for _ in range(tries):
        gs = [g.to_vars(vars) for g in gens if not g.is_zero()]
        val = {}
        order = list(vars.names)
        rng.shuffle(order)
        ok = True
        while len(val) < len(vars):
            forced = None
            for g in gs:
                free = [v for v in g.used_vars() if v not in val]
                if len(free) == 1:
                    forced = (free[0], g)
                    break
            if forced:
                v, g = forced
                roots, _ = rational_roots(_univariate(g, v))
                if not roots:
                    ok = False
                    break
                x = rng.choice(roots)
            else:
                v = next(u for u in order if u not in val)
                x = Fraction(rng.randint(-3, 3), rng.choice([1, 1, 2]))
            val[v] = x
            b = {v: Polynomial.constant(vars, x)}
            gs = [substitute(g, b) for g in gs]
            if any(g.is_constant() and not g.is_zero() for g in gs):
                ok = False
                break
        if ok and all(evaluate(g, val) == 0 for g in gens):
            return [val[v] for v in vars.names]
    return None


def random_point(vars, rng: random.Random):
    return [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in vars.names]
