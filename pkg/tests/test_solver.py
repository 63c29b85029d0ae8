import random

import numpy as np
import pytest

from periodic_cops.arena import TemporalNode, anchored_set, build_arena, temporal_corners
from periodic_cops.oracle import copwin_configs
from periodic_cops.ptg import gen_random
from periodic_cops.solver import (
    COUNTER_NAMES,
    StrategyError,
    Verdict,
    Witness,
    available_backends,
    compute_max_augmented,
    decide_copwin,
    extract_strategy,
    format_strategy,
    initialize,
    parse_strategy,
    play,
    solve,
    step,
    strategy_for,
)

from _instances import random_suite

BACKENDS = available_backends()


def oracle_edges(a):
    return {(t, c[0], r) for (t, c, r) in copwin_configs(a, 1).winning()}


def _addable(a, edges, t, x, y):
    """Augmentation condition checked directly on an edge set."""
    t1 = (t + 1) % a.p
    for z in a.succ(t, x):
        if z == y or all(w == z or (t1, z, w) in edges for w in a.succ(t, y)):
            return True
    return False


# -- initialization ----------------------------------------------------------


def test_initialize_swap2(arenas):
    s = initialize(arenas["SWAP2"])
    assert s.pending() == []
    assert s.shadow_corner(0, 0, 1)
    assert s.committed(0, 0, 1) and s.committed(0, 1, 0)


def test_initialize_rp3(arenas):
    s = initialize(arenas["RP3"])
    assert s.shadow_corner(0, 0, 1) and s.shadow_corner(0, 2, 1)
    assert not s.shadow_corner(0, 0, 2)
    assert s.dif_size(0, 0, 1) == 0
    assert s.dif_core(0, 1, 0) == {0: 0, 1: 0, 2: 1}


def test_initialize_dicyc3(arenas):
    s = initialize(arenas["DICYC3"])
    assert s.pending() == []
    # the cop one step behind covers the robber's only escape by landing on it
    assert {s._triple(int(e), 3) for e in np.flatnonzero(s.sc)} == {(0, 0, 1), (0, 1, 2), (0, 2, 0)}


@pytest.mark.parametrize("g", random_suite(60), ids=lambda g: f"n{g.n}p{g.p}m{g.m}")
def test_dif_invariant_after_init(g):
    a = build_arena(g)
    s = initialize(a)
    for t in range(a.p):
        t1 = (t + 1) % a.p
        for u in range(a.n):
            for v in range(a.n):
                want = {w: int(w != v and not a.has_edge(t1, v, w)) for w in a.succ(t, u)}
                assert s.dif_core(t, u, v) == want
                assert s.dif_size(t, u, v) == sum(want.values())
    corners = set(temporal_corners(a, closed=True))
    for t in range(a.p):
        for u in range(a.n):
            for v in range(a.n):
                assert s.shadow_corner(t, u, v) == (((t, u), ((t + 1) % a.p, v)) in corners)


def test_dif_counts_match_after_run():
    a = build_arena(gen_random(6, 3, 1, 17))
    s = initialize(a)
    s.run()
    edges = s.augmented().edges()
    for t in range(a.p):
        t1 = (t + 1) % a.p
        for u in range(a.n):
            for v in range(a.n):
                want = {w: int(w != v and (t1, v, w) not in edges) for w in a.succ(t, u)}
                assert s.dif_core(t, u, v) == want


# -- stepping ----------------------------------------------------------------


def test_step_on_empty_queue(arenas):
    s = initialize(arenas["DICYC3"])
    assert step(s) is False


def test_rc4_steps_are_sound(arenas):
    a = arenas["RC4"]
    truth = oracle_edges(a)
    s = initialize(a)
    for _ in range(20):
        if not step(s):
            break
        assert s.augmented().off_diagonal_edges() <= truth


def test_monotone_growth():
    a = build_arena(gen_random(6, 2, 2, 3, reflexive=True, symmetric=True))
    s = initialize(a)
    prev = s.augmented().edges()
    while step(s):
        cur = s.augmented().edges()
        assert prev <= cur
        prev = cur


@pytest.mark.parametrize("g", random_suite(120), ids=lambda g: f"n{g.n}p{g.p}m{g.m}")
def test_iteration_bound(g):
    a = build_arena(g)
    v, s = solve(a, early_stop=False)
    n, p = a.n, a.p
    assert v.stats["iterations"] <= p * n * n
    assert v.stats["queue_pushes"] <= p * n * (n - 1)
    assert v.stats["dif_updates"] <= n * a.m


# -- the maximal arena ---------------------------------------------------------


def test_compute_max_augmented_examples(arenas):
    assert compute_max_augmented(arenas["SWAP2"]).off_diagonal_edges() == {(0, 0, 1), (0, 1, 0)}
    assert compute_max_augmented(arenas["DICYC3"]).off_diagonal_edges() == {
        (0, 0, 1), (0, 1, 2), (0, 2, 0)
    }
    rp3 = compute_max_augmented(arenas["RP3"])
    assert rp3.off_diagonal_edges() == {(0, x, y) for x in range(3) for y in range(3) if x != y}


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("g", random_suite(150), ids=lambda g: f"n{g.n}p{g.p}m{g.m}")
def test_max_augmented_matches_oracle(g, backend):
    a = build_arena(g)
    assert compute_max_augmented(a, backend).off_diagonal_edges() == oracle_edges(a)


@pytest.mark.parametrize("g", random_suite(80), ids=lambda g: f"n{g.n}p{g.p}m{g.m}")
def test_maximality_and_closure(g):
    a = build_arena(g)
    edges = compute_max_augmented(a).edges()
    for t in range(a.p):
        for x in range(a.n):
            for y in range(a.n):
                if x == y:
                    continue
                # every present non-base edge is justified, every absent one is not addable
                if (t, x, y) in edges and not a.has_edge(t, x, y):
                    assert _addable(a, edges, t, x, y)
                if (t, x, y) not in edges:
                    assert not _addable(a, edges, t, x, y)


@pytest.mark.parametrize("g", random_suite(60, p_range=(1, 2)), ids=lambda g: f"n{g.n}p{g.p}m{g.m}")
def test_stars_of_reflexive_connected_graphs_are_all_or_nothing(g):
    a = build_arena(g)
    from periodic_cops.ptg import classify

    gc = classify(g)
    if not (gc.reflexive and gc.temporally_connected):
        pytest.skip("needs a reflexive temporally connected graph")
    stars = set(compute_max_augmented(a).stars())
    assert stars in (set(), set(a.nodes()))


# -- deciding ----------------------------------------------------------------


@pytest.mark.parametrize(
    "name, copwin",
    [("SWAP2", True), ("RP3", True), ("RK2", True), ("RC4", False), ("DICYC3", False), ("PER2", True)],
)
def test_decide_copwin_examples(arenas, name, copwin):
    assert decide_copwin(arenas[name]).copwin is copwin
    assert decide_copwin(arenas[name], early_stop=False).copwin is copwin


def test_rp3_witness(arenas):
    v = decide_copwin(arenas["RP3"])
    assert v.witness == Witness(TemporalNode(0, 1), 1, (1,))


def test_single_vertex():
    v = decide_copwin(build_arena(gen_random(1, 3, 0, 0)))
    assert v.copwin and v.witness.star == (0, 0)


@pytest.mark.parametrize("g", random_suite(200), ids=lambda g: f"n{g.n}p{g.p}m{g.m}")
def test_early_stop_agrees(g):
    a = build_arena(g)
    early, late = decide_copwin(a), decide_copwin(a, early_stop=False)
    assert early.copwin == late.copwin
    if early.copwin:
        w = early.witness
        assert w.star in anchored_set(a)
        assert compute_max_augmented(a).stars().count(w.star) == 1


def test_stats_names():
    v = decide_copwin(build_arena(gen_random(4, 2, 1, 1)))
    assert set(COUNTER_NAMES) <= set(v.stats)
    assert all(isinstance(x, int) for x in v.stats.values())


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled kernel not built")
@pytest.mark.parametrize("g", random_suite(100), ids=lambda g: f"n{g.n}p{g.p}m{g.m}")
def test_backends_agree_exactly(g):
    a = build_arena(g)
    for early in (True, False):
        (v1, s1), (v2, s2) = (solve(a, early_stop=early, backend=b) for b in ("python", "cython"))
        assert v1 == v2
        for name in ("dif", "size", "sc", "se", "adj", "adeg", "rho_table", "queue", "qpos", "counters"):
            assert np.array_equal(getattr(s1, name), getattr(s2, name)), name


# -- strategies ----------------------------------------------------------------


def test_extract_strategy_rk2(arenas):
    s = strategy_for(arenas["RK2"])
    assert s.start == 0 and s.journey == (0,)
    assert s.rho[0, 0, 1] == 1


def test_extract_strategy_rp3_file(arenas):
    s = strategy_for(arenas["RP3"])
    assert format_strategy(s) == "strategy 1\nstart 1\njourney 1\nrho 0 1 0 0\nrho 0 1 2 2\n"


def test_extract_strategy_rejects_robberwin(arenas):
    v = decide_copwin(arenas["RC4"])
    with pytest.raises(ValueError):
        extract_strategy(arenas["RC4"], v, {})


def test_extract_strategy_detects_missing_entry(arenas):
    a = arenas["RP3"]
    v = decide_copwin(a)
    with pytest.raises(StrategyError):
        extract_strategy(a, v, {})


def test_strategy_round_trip():
    for seed in range(30):
        a = build_arena(gen_random(5, 2, 1, seed, reflexive=True, symmetric=True))
        s = strategy_for(a)
        if s is None:
            continue
        text = format_strategy(s)
        assert parse_strategy(text, a.p) == s
        assert format_strategy(parse_strategy(text, a.p)) == text


def test_parse_strategy_errors():
    with pytest.raises(ValueError):
        parse_strategy("strategy 2\nstart 0\njourney 0\n", 1)
    with pytest.raises(ValueError):
        parse_strategy("strategy 1\njourney 0\n", 1)
    with pytest.raises(ValueError):
        parse_strategy("strategy 1\nstart 0\njourney 0\nrho 1 2\n", 1)


def _random_robber(a, seed):
    rng = random.Random(seed)
    return lambda rnd, cop, rob: rng.choice(a.succ(rnd % a.p, rob))


def _path5():
    from periodic_cops.ptg import encode_standard

    return build_arena(encode_standard(5, [(0, 1), (1, 2), (2, 3), (3, 4)], allow_wait=True))


def test_play_examples(arenas):
    a = arenas["RP3"]
    s = strategy_for(a)
    tr = play(a, s, 0, lambda rnd, cop, rob: rob)
    assert tr.capture_round == 0 and tr.rounds[0].cop_to == 0
    tr = play(a, s, 1, lambda *_: 0)
    assert tr.capture_round == 0 and tr.rounds == ()
    path = _path5()
    ps = strategy_for(path)
    assert ps.start == 2
    # a waiting robber at an end is caught in round 1
    tr = play(path, ps, 4, lambda rnd, cop, rob: rob)
    assert tr.capture_round == 1 and len(tr.rounds) == 2
    # robber walking onto the cop is a capture too
    tr = play(path, ps, 4, lambda rnd, cop, rob: cop if cop in path.succ(rnd, rob) else rob)
    assert tr.capture_round == 0 and tr.rounds[0].robber_to == tr.rounds[0].cop_to


def test_play_refuses_illegal_moves(arenas):
    from periodic_cops.solver import IllegalMove

    path = _path5()
    with pytest.raises(IllegalMove):
        play(path, strategy_for(path), 4, lambda *_: 0, max_retries=3)
    assert strategy_for(arenas["DICYC3"]) is None


@pytest.mark.parametrize("g", random_suite(120), ids=lambda g: f"n{g.n}p{g.p}m{g.m}")
def test_strategy_captures_every_robber(g):
    a = build_arena(g)
    s = strategy_for(a)
    if s is None:
        return
    bound = a.p * a.n * a.n
    for start in range(a.n):
        for seed in range(3):
            tr = play(a, s, start, _random_robber(a, seed * 97 + start), limit=bound)
            assert tr.captured and tr.capture_round < bound


def test_verdict_type(arenas):
    v = decide_copwin(arenas["SWAP2"])
    assert isinstance(v, Verdict) and v.stats["base_edges"] == arenas["SWAP2"].m
