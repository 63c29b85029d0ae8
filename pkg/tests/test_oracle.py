from functools import lru_cache

import numpy as np
import pytest

from periodic_cops.arena import build_arena
from periodic_cops.oracle import (
    UNREACHED,
    BudgetExceeded,
    adversarial_move,
    adversarial_start,
    budget,
    copwin_configs,
    oracle_decide,
    placements,
)
from periodic_cops.ptg import gen_random, reflexive_cycle

from _instances import random_suite


def game_tree(a):
    """Plain minimax over rounds, cut off after p*n*n rounds."""
    depth = a.p * a.n * a.n

    @lru_cache(maxsize=None)
    def win(t, x, r, left):
        if x == r:
            return True
        if left == 0:
            return False
        t1 = (t + 1) % a.p
        return any(
            z == r or all(w == z or win(t1, z, w, left - 1) for w in a.succ(t, r))
            for z in a.succ(t, x)
        )

    return {(t, x, r) for t in range(a.p) for x in range(a.n) for r in range(a.n) if x != r and win(t, x, r, depth)}


def small_graphs():
    out = []
    for seed in range(120):
        n = 1 + seed % 3
        p = 1 + (seed // 3) % 2
        out.append(gen_random(n, p, seed % 3, seed, reflexive=bool(seed & 8), symmetric=bool(seed & 16)))
    return out


@pytest.mark.parametrize("g", small_graphs(), ids=lambda g: f"n{g.n}p{g.p}m{g.m}")
def test_matches_game_tree(g):
    a = build_arena(g)
    got = {(t, c[0], r) for (t, c, r) in copwin_configs(a).winning()}
    assert got == game_tree(a)


@pytest.mark.parametrize(
    "name, k, copwin",
    [("DICYC3", 1, False), ("RC4", 1, False), ("RC4", 2, True), ("RP3", 1, True), ("SWAP2", 1, True),
     ("DICYC3", 2, True), ("PER2", 1, True)],
)
def test_examples(arenas, name, k, copwin):
    assert oracle_decide(arenas[name], k) is copwin


def test_single_vertex():
    a = build_arena(gen_random(1, 2, 0, 0))
    tab = copwin_configs(a)
    assert oracle_decide(a)
    assert tab.winning() == set()
    assert (tab.rank == 0).all()


def test_ranks(arenas):
    tab = copwin_configs(arenas["RP3"])
    assert tab.rank_of(0, (1,), 0) == 1
    assert tab.rank_of(0, (0,), 2) == 2
    assert tab.rank_of(0, (2,), 2) == 0
    tab = copwin_configs(arenas["DICYC3"])
    assert tab.rank_of(0, (0,), 2) == UNREACHED
    assert not tab.is_copwin(0, (0,), 2)
    assert tab.is_copwin(0, (0,), 1)


def test_placements():
    assert placements(2, 2) == [(0, 0), (0, 1), (1, 1)]
    assert len(placements(4, 2)) == 10
    assert placements(3, 1) == [(0,), (1,), (2,)]


def test_deterministic():
    a = build_arena(gen_random(6, 3, 1, 11))
    t1, t2 = copwin_configs(a, 2), copwin_configs(a, 2)
    assert np.array_equal(t1.rank, t2.rank) and t1.cops == t2.cops


@pytest.mark.parametrize("g", random_suite(40, n_range=(2, 5), p_range=(1, 3)), ids=lambda g: f"n{g.n}p{g.p}m{g.m}")
def test_more_cops_never_hurt(g):
    a = build_arena(g)
    t1, t2 = copwin_configs(a, 1), copwin_configs(a, 2)
    # adding a second cop on top of the first keeps every win
    for t, (x,), r in t1.winning():
        assert t2.is_copwin(t, (x, x), r)
    assert oracle_decide(a, 1) <= oracle_decide(a, 2)


def test_adversarial_move_rk2(arenas):
    tab = copwin_configs(arenas["RK2"])
    # both replies lose; moving away has rank 1, stepping onto the cop rank 0
    assert adversarial_move(tab, 0, (0,), 1) == 1


def test_adversarial_move_escapes(arenas):
    tab = copwin_configs(arenas["RC4"])
    for x in range(4):
        for r in range(4):
            if r in (x, (x + 1) % 4, (x - 1) % 4):
                continue
            w = adversarial_move(tab, 0, (x,), r)
            assert not tab.is_copwin(0, (x,), w)


def test_adversarial_start(arenas):
    tab = copwin_configs(arenas["RP3"])
    assert adversarial_start(tab, (1,)) == 0
    assert adversarial_start(tab, (0,)) == 2
    tab = copwin_configs(arenas["DICYC3"])
    assert not tab.is_copwin(0, (0,), adversarial_start(tab, (0,)))


def test_budget(monkeypatch):
    monkeypatch.setenv("PP_BUDGET", "50")
    assert budget() == 50
    with pytest.raises(BudgetExceeded):
        copwin_configs(build_arena(reflexive_cycle(6)), 2)
    copwin_configs(build_arena(reflexive_cycle(3)), 1)


def test_budget_explicit_limit():
    with pytest.raises(BudgetExceeded):
        copwin_configs(build_arena(reflexive_cycle(5)), 3, limit=10)


def test_rejects_k0(arenas):
    with pytest.raises(ValueError):
        copwin_configs(arenas["RP3"], 0)
