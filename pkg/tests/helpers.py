"""Shared oracles for the test-suite. Deliberately naive."""

import random
from fractions import Fraction
from itertools import product
from math import floor

from zonocover import linalg


def random_unimodular(rng, n, steps=12):
    """Product of random elementary integer operations, so |det| = 1 by construction."""
    M = [list(r) for r in linalg.identity(n)]
    for _ in range(steps):
        if n == 1:
            M[0] = [-x for x in M[0]]
            continue
        i, j = rng.sample(range(n), 2)
        kind = rng.randrange(3)
        if kind == 0:
            c = rng.randint(-2, 2)
            M[i] = [a + c * b for a, b in zip(M[i], M[j])]
        elif kind == 1:
            M[i], M[j] = M[j], M[i]
        else:
            M[i] = [-a for a in M[i]]
    return tuple(tuple(r) for r in M)


def dist_to_int(y):
    y = Fraction(y)
    return min(y - floor(y), floor(y) + 1 - y)


def brute_threshold(u0, alpha, steps):
    """max over the grid t = k / steps of min_i ||u0_i + t alpha_i|| over one period."""
    from zonocover.dynamics import MotionInstance
    inst = MotionInstance(u0, alpha)
    P = inst.period
    best = Fraction(-1)
    for k in range(int(P * steps)):
        t = Fraction(k, steps)
        v = min(dist_to_int(u + t * a) for u, a in zip(inst.u0, inst.alpha))
        best = max(best, v)
    return best


def brute_width(gens, box):
    """Lattice width by scanning every integer direction in [-box, box]^n."""
    n = len(gens[0])
    best = None
    for v in product(range(-box, box + 1), repeat=n):
        if any(v):
            w = sum(abs(sum(a * b for a, b in zip(v, g))) for g in gens)
            best = w if best is None else min(best, w)
    return best


def brute_gauge_min(Z, s, box=4):
    """min over integer p in a box of gauge(s + p)."""
    from zonocover.zonotope import gauge
    return min(gauge(Z, tuple(a + b for a, b in zip(s, p)))
               for p in product(range(-box, box + 1), repeat=Z.n))


def rng(seed):
    return random.Random(seed)
