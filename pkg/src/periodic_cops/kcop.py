"""Several cops: multisets, the augmented k-arena, k-anchored k-stars.

A hyperedge ``(t, X, y)`` says the cops on multiset ``X`` win against a robber
on ``y`` at the start of round ``t``. Base hyperedges are the direct captures
(some cop has ``y`` as an out-neighbour). A hyperedge is added when the cops
have a synchronized move ``X -> Z`` after which every robber reply lands on a
cop or on a head already recorded for ``(t+1, Z)``. No incremental counters
here: each candidate is re-evaluated in full when one of the heads it depends
on appears.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from math import comb
from typing import Mapping, NamedTuple

from .arena import Arena, mask_of, members
from .oracle import BudgetExceeded, check_budget, oracle_decide

__all__ = [
    "BudgetExceeded",
    "CopMultiset",
    "KHyperedgeSet",
    "KVerdict",
    "compute_max_k_augmented",
    "copnumber",
    "decide_k_copwin",
    "enumerate_multisets",
    "k_out_neighborhood",
    "multiset_rank",
]


class CopMultiset(tuple):
    """Sorted tuple of cop positions; its length is the wordcount."""

    def __new__(cls, elems=()):
        return super().__new__(cls, sorted(elems))

    @property
    def k(self) -> int:
        return len(self)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self)

    def __repr__(self) -> str:
        return "<" + ",".join(map(str, self)) + ">"


def enumerate_multisets(n: int, k: int, limit: int | None = None) -> list[CopMultiset]:
    """All ``C(n+k-1, k)`` multisets in rank order (lexicographic on sorted form)."""
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    check_budget(comb(n + k - 1, k), limit)
    return [CopMultiset(c) for c in itertools.combinations_with_replacement(range(n), k)]


def multiset_rank(x, n: int) -> int:
    """Position of ``x`` in :func:`enumerate_multisets` order, without enumerating."""
    k = len(x)
    rank = 0
    prev = 0
    for i, xi in enumerate(sorted(x)):
        rest = k - i - 1
        for v in range(prev, xi):
            rank += comb(n - v + rest - 1, rest)
        prev = xi
    return rank


def k_out_neighborhood(d: Arena, t: int, x) -> set[int]:
    mask = 0
    for c in x:
        mask |= d.out_mask[t % d.p][c]
    return set(members(mask))


def _images(d: Arena, t: int, x: CopMultiset) -> set[CopMultiset]:
    """Placements reachable in one synchronized round: one out-neighbour per cop."""
    return {CopMultiset(z) for z in itertools.product(*(d.out_adj[t][c] for c in x))}


@dataclass
class KHyperedgeSet:
    """``heads[t][i]`` is the bitmask of robber vertices ``y`` with ``(t, multisets[i], y)`` won."""

    arena: Arena
    k: int
    multisets: list[CopMultiset]
    heads: list[list[int]]
    images: list[list[list[int]]] = field(repr=False)

    def index(self, x) -> int:
        return multiset_rank(x, self.arena.n)

    def has(self, t: int, x, y: int) -> bool:
        return bool(self.heads[t % self.arena.p][self.index(x)] >> y & 1)

    def hyperedges(self) -> set[tuple[int, CopMultiset, int]]:
        return {
            (t, self.multisets[i], y)
            for t, row in enumerate(self.heads)
            for i, mask in enumerate(row)
            for y in members(mask)
        }

    def off_diagonal(self) -> set[tuple[int, CopMultiset, int]]:
        return {(t, x, y) for (t, x, y) in self.hyperedges() if y not in x}

    def is_k_star(self, t: int, i: int) -> bool:
        return (self.heads[t][i] | mask_of(self.multisets[i])) == self.arena.full


def _build(d: Arena, k: int, limit: int | None) -> KHyperedgeSet:
    n, p = d.n, d.p
    check_budget(p * comb(n + k - 1, k) * n, limit)
    xs = enumerate_multisets(n, k, limit)
    heads = [[0] * len(xs) for _ in range(p)]
    images = []
    for t in range(p):
        row = []
        for i, x in enumerate(xs):
            heads[t][i] = mask_of(k_out_neighborhood(d, t, x))
            row.append(sorted(multiset_rank(z, n) for z in _images(d, t, x)))
        images.append(row)
    return KHyperedgeSet(d, k, xs, heads, images)


def _addable(h: KHyperedgeSet, t: int, i: int, y: int) -> bool:
    d = h.arena
    t1 = (t + 1) % d.p
    escapes = d.out_mask[t][y]
    for j in h.images[t][i]:
        covered = h.heads[t1][j] | mask_of(h.multisets[j])
        if escapes & ~covered == 0:
            return True
    return False


def compute_max_k_augmented(d: Arena, k: int, limit: int | None = None) -> KHyperedgeSet:
    h = _build(d, k, limit)
    n, p = d.n, d.p
    xs = h.multisets
    preimages: list[list[list[int]]] = [[[] for _ in xs] for _ in range(p)]
    for t in range(p):
        for i in range(len(xs)):
            for j in h.images[t][i]:
                preimages[t][j].append(i)

    queued: set[tuple[int, int, int]] = set()
    work: deque[tuple[int, int, int]] = deque()

    def enqueue(t: int, i: int, y: int) -> None:
        if y in xs[i] or h.heads[t][i] >> y & 1 or (t, i, y) in queued:
            return
        queued.add((t, i, y))
        work.append((t, i, y))

    for t in range(p):
        for i in range(len(xs)):
            for y in range(n):
                enqueue(t, i, y)

    while work:
        t, i, y = work.popleft()
        queued.discard((t, i, y))
        if h.heads[t][i] >> y & 1 or not _addable(h, t, i, y):
            continue
        h.heads[t][i] |= 1 << y
        # (t, X_i, y) newly won: re-examine robber positions stepping into y
        # against every placement that can move onto X_i
        tp = (t - 1) % p
        for j in preimages[tp][i]:
            for r in d.in_adj[t][y]:
                enqueue(tp, j, r)
    return h


def is_k_maximal(h: KHyperedgeSet) -> bool:
    """No absent off-diagonal hyperedge satisfies the augmentation condition."""
    d = h.arena
    for t in range(d.p):
        for i, x in enumerate(h.multisets):
            for y in range(d.n):
                if y not in x and not h.heads[t][i] >> y & 1 and _addable(h, t, i, y):
                    return False
    return True


def k_anchored(d: Arena, k: int, h: KHyperedgeSet | None = None, limit: int | None = None):
    """Product-space search from all slice-0 placements.

    Returns ``parent`` mapping each reached ``(t, rank)`` to its predecessor
    (``None`` at slice 0). All cops move every round, so the journeys of the
    individual cops share one length.
    """
    n, p = d.n, d.p
    if h is None:
        h = _build(d, k, limit)
    parent: dict[tuple[int, int], tuple[int, int] | None] = {(0, i): None for i in range(len(h.multisets))}
    level = sorted(parent)
    while level:
        nxt = []
        for t, i in level:
            t1 = (t + 1) % p
            for j in h.images[t][i]:
                if (t1, j) not in parent:
                    parent[t1, j] = (t, i)
                    nxt.append((t1, j))
        level = sorted(nxt)
    return parent


class KWitness(NamedTuple):
    t: int
    star: CopMultiset
    anchor: CopMultiset
    placements: tuple[CopMultiset, ...]
    journeys: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class KVerdict:
    copwin: bool
    k: int
    witness: KWitness | None
    stats: Mapping[str, int] = field(default_factory=dict)


def _split_journeys(d: Arena, seq: list[CopMultiset]) -> tuple[tuple[int, ...], ...]:
    """Assign each cop a vertex path through consecutive placements."""
    k = len(seq[0])
    paths = [[c] for c in seq[0]]
    for step, z in enumerate(seq[1:]):
        t = step % d.p
        for perm in itertools.permutations(z):
            if all(d.has_edge(t, paths[c][-1], perm[c]) for c in range(k)):
                for c in range(k):
                    paths[c].append(perm[c])
                break
        else:  # pragma: no cover - placements come from synchronized moves
            raise AssertionError("consecutive placements are not a synchronized move")
    return tuple(tuple(pth) for pth in paths)


def decide_k_copwin(d: Arena, k: int, limit: int | None = None) -> KVerdict:
    """Cops win iff the maximal k-arena has a k-anchored k-star.

    The witness is the smallest ``(t, rank)`` such star reached by the
    shortest synchronized journeys from slice 0.
    """
    h = compute_max_k_augmented(d, k, limit)
    parent = k_anchored(d, k, h)
    stars = sorted(
        (t, i) for t in range(d.p) for i in range(len(h.multisets)) if h.is_k_star(t, i) and (t, i) in parent
    )
    stats = {
        "hyperedges": sum(bin(m).count("1") for row in h.heads for m in row),
        "multisets": len(h.multisets),
    }
    if not stars:
        return KVerdict(False, k, None, stats)
    t, i = stars[0]
    seq = [h.multisets[i]]
    node = parent[t, i]
    while node is not None:
        seq.append(h.multisets[node[1]])
        node = parent[node]
    seq.reverse()
    w = KWitness(t, h.multisets[i], seq[0], tuple(seq), _split_journeys(d, seq))
    return KVerdict(True, k, w, stats)


def copnumber(d: Arena, k_max: int, limit: int | None = None) -> int | None:
    """Smallest ``k <= k_max`` for which the cops win, or ``None``.

    A :class:`BudgetExceeded` raised at some ``k`` carries ``largest_decided``.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    for k in range(1, k_max + 1):
        try:
            if decide_k_copwin(d, k, limit).copwin:
                return k
        except BudgetExceeded as exc:
            exc.largest_decided = k - 1
            raise
    return None


def oracle_copnumber(d: Arena, k_max: int) -> int | None:
    for k in range(1, k_max + 1):
        if oracle_decide(d, k):
            return k
    return None
