"""Brute-force decision procedure for the k-cop game.

Snapshots repeat with period ``p``, so who wins from a configuration depends
only on the slice ``t mod p``, the cop multiset and the robber vertex. The
infinite configuration graph is therefore folded onto ``Z_p x [V]^k x V`` and
the cops' winning region is computed as a least fixpoint, round by round:

* round 0: configurations where the robber shares a vertex with a cop;
* round j+1: configurations from which some synchronized cop move either lands
  on the robber or leaves every robber reply in a round-<=j configuration.

This deliberately shares no code with the shadow-edge solvers it checks.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from math import comb

import numpy as np

from .arena import Arena

UNREACHED = np.iinfo(np.int32).max
"""Rank of configurations the cops never win."""

DEFAULT_BUDGET = 1 << 28


class BudgetExceeded(RuntimeError):
    pass


def budget() -> int:
    raw = os.environ.get("PP_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


def check_budget(entries: int, limit: int | None = None) -> None:
    limit = budget() if limit is None else limit
    if entries > limit:
        raise BudgetExceeded(f"state space of {entries} entries exceeds budget {limit}")


def placements(n: int, k: int) -> list[tuple[int, ...]]:
    """All sorted cop placements, in the order used to index tables."""
    return list(itertools.combinations_with_replacement(range(n), k))


@dataclass
class ConfigTable:
    arena: Arena
    k: int
    cops: list[tuple[int, ...]]
    index: dict[tuple[int, ...], int]
    rank: np.ndarray  # shape (p, len(cops), n); UNREACHED where the robber wins

    @property
    def copwin(self) -> np.ndarray:
        return self.rank != UNREACHED

    def is_copwin(self, t: int, cops, r: int) -> bool:
        return bool(self.rank[t % self.arena.p, self.index[tuple(sorted(cops))], r] != UNREACHED)

    def rank_of(self, t: int, cops, r: int) -> int:
        return int(self.rank[t % self.arena.p, self.index[tuple(sorted(cops))], r])

    def winning(self) -> set[tuple[int, tuple[int, ...], int]]:
        """All cop-won ``(t, cops, r)`` with the robber not on a cop."""
        out = set()
        for t, c, r in zip(*np.nonzero(self.copwin)):
            cops = self.cops[c]
            if r not in cops:
                out.add((int(t), cops, int(r)))
        return out


def _moves(a: Arena, t: int, cops: tuple[int, ...]) -> list[tuple[int, ...]]:
    return sorted({tuple(sorted(z)) for z in itertools.product(*(a.out_adj[t][c] for c in cops))})


def copwin_configs(a: Arena, k: int = 1, limit: int | None = None) -> ConfigTable:
    if k < 1:
        raise ValueError("k must be >= 1")
    n, p = a.n, a.p
    check_budget(p * comb(n + k - 1, k) * n, limit)
    cops = placements(n, k)
    index = {c: i for i, c in enumerate(cops)}
    moves = [[[index[z] for z in _moves(a, t, c)] for c in cops] for t in range(p)]
    sets = [set(c) for c in cops]

    rank = np.full((p, len(cops), n), UNREACHED, dtype=np.int32)
    for t in range(p):
        for ci, c in enumerate(cops):
            for r in set(c):
                rank[t, ci, r] = 0

    won = rank != UNREACHED
    j = 0
    while True:
        new = []
        for t in range(p):
            t1 = (t + 1) % p
            nxt = won[t1]
            for ci in range(len(cops)):
                for r in range(n):
                    if won[t, ci, r]:
                        continue
                    replies = a.out_adj[t][r]
                    for zi in moves[t][ci]:
                        if r in sets[zi] or all(nxt[zi, w] for w in replies):
                            new.append((t, ci, r))
                            break
        if not new:
            break
        j += 1
        for t, ci, r in new:
            rank[t, ci, r] = j
        won = rank != UNREACHED
    return ConfigTable(a, k, cops, index, rank)


def oracle_decide(a: Arena, k: int = 1, table: ConfigTable | None = None) -> bool:
    """Some slice-0 placement wins against every robber start."""
    tab = table if table is not None else copwin_configs(a, k)
    return bool(tab.copwin[0].all(axis=1).any())


def adversarial_move(tab: ConfigTable, t: int, cops, r: int) -> int:
    """Robber reply in round ``t`` once the cops stand on ``cops``.

    Prefers a reply the cops cannot win from; otherwise the reply of highest
    rank (slowest loss). Ties go to the smallest vertex.
    """
    a = tab.arena
    t1 = (t + 1) % a.p
    ci = tab.index[tuple(sorted(cops))]
    best, best_rank = None, -1
    for w in a.out_adj[t % a.p][r]:
        rk = int(tab.rank[t1, ci, w])
        if rk > best_rank:
            best, best_rank = w, rk
    assert best is not None
    return best


def adversarial_start(tab: ConfigTable, cops) -> int:
    """Robber's opening vertex against a slice-0 cop placement."""
    ci = tab.index[tuple(sorted(cops))]
    ranks = tab.rank[0, ci]
    return int(np.argmax(ranks))
