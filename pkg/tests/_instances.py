"""Seeded instance families shared by the tests."""

import random

from periodic_cops.ptg import encode_standard, gen_random


def random_suite(count=520, n_range=(2, 7), p_range=(1, 4), seed=20240611):
    """Playable instances covering every (n, p, d, flags) combination in range."""
    n_lo, n_hi = n_range
    p_lo, p_hi = p_range
    combos = [
        (n, p, d, refl, sym)
        for n in range(n_lo, n_hi + 1)
        for p in range(p_lo, p_hi + 1)
        for d in (0, 1, 2)
        for refl in (False, True)
        for sym in (False, True)
    ]
    out = []
    for i in range(count):
        n, p, d, refl, sym = combos[i % len(combos)]
        out.append(gen_random(n, p, d, seed + i, reflexive=refl, symmetric=sym))
    return out


def random_tree(n, seed):
    rng = random.Random(seed)
    return [(rng.randrange(v), v) for v in range(1, n)]


def reflexive_tree(n, seed):
    return encode_standard(n, random_tree(n, seed), allow_wait=True)
