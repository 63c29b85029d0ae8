"""The arena: a periodic graph folded into a static digraph on ``Z_p x V``.

Slice ``t`` holds one temporal node per vertex; the edge ``(u, v)`` of
snapshot ``t`` becomes ``((t, u), (t+1 mod p, v))``. Neighbourhoods are kept
as int bitmasks (bit ``v`` set iff ``v`` is present) for subset tests, and as
sorted tuples for iteration.
"""

from __future__ import annotations

from collections import deque
from functools import cached_property
from typing import TYPE_CHECKING, NamedTuple, Union

import numpy as np

from .ptg import PeriodicGraph

if TYPE_CHECKING:
    from .solver import AugmentedArena


class TemporalNode(NamedTuple):
    t: int
    v: int


def mask_of(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def members(mask: int) -> list[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


class Arena:
    """Out- and in-neighbourhoods of every temporal node.

    ``out_mask[t][u]`` is the set of ``v`` with ``((t,u),(t+1,v))`` an edge;
    ``in_mask[t][v]`` is the set of ``u`` with ``((t-1,u),(t,v))`` an edge.
    """

    def __init__(self, g: PeriodicGraph) -> None:
        n, p = g.n, g.p
        self.graph = g
        self.n = n
        self.p = p
        out: list[list[list[int]]] = [[[] for _ in range(n)] for _ in range(p)]
        inn: list[list[list[int]]] = [[[] for _ in range(n)] for _ in range(p)]
        for t, snap in enumerate(g.snapshots):
            t1 = (t + 1) % p
            for u, v in sorted(snap):
                out[t][u].append(v)
                inn[t1][v].append(u)
        for t in range(p):
            for v in range(n):
                inn[t][v].sort()
        self.out_adj: tuple[tuple[tuple[int, ...], ...], ...] = tuple(
            tuple(tuple(x) for x in sl) for sl in out
        )
        self.in_adj: tuple[tuple[tuple[int, ...], ...], ...] = tuple(
            tuple(tuple(x) for x in sl) for sl in inn
        )
        self.out_mask = tuple(tuple(mask_of(x) for x in sl) for sl in out)
        self.in_mask = tuple(tuple(mask_of(x) for x in sl) for sl in inn)
        self.m = sum(len(s) for s in g.snapshots)
        self.full = (1 << n) - 1

    def succ(self, t: int, u: int) -> tuple[int, ...]:
        return self.out_adj[t % self.p][u]

    def pred(self, t: int, v: int) -> tuple[int, ...]:
        return self.in_adj[t % self.p][v]

    def has_edge(self, t: int, u: int, v: int) -> bool:
        return bool(self.out_mask[t % self.p][u] >> v & 1)

    def nodes(self):
        for t in range(self.p):
            for v in range(self.n):
                yield TemporalNode(t, v)

    @cached_property
    def csr(self) -> "ArenaCSR":
        return ArenaCSR.build(self)


class ArenaCSR(NamedTuple):
    """Flat adjacency arrays consumed by the solver kernels.

    Node ``(t, u)`` has index ``t*n + u``. ``out_idx[out_ptr[i]:out_ptr[i+1]]``
    lists successors; the position in ``out_idx`` is the edge id. The in-lists
    carry, per predecessor, the id of the corresponding out-edge.
    """

    out_ptr: np.ndarray
    out_idx: np.ndarray
    in_ptr: np.ndarray
    in_idx: np.ndarray
    in_eid: np.ndarray

    @classmethod
    def build(cls, a: Arena) -> "ArenaCSR":
        n, p = a.n, a.p
        out_ptr = np.zeros(p * n + 1, dtype=np.int32)
        out_idx = np.zeros(a.m, dtype=np.int32)
        eid: dict[tuple[int, int, int], int] = {}
        k = 0
        for t in range(p):
            for u in range(n):
                out_ptr[t * n + u] = k
                for v in a.out_adj[t][u]:
                    out_idx[k] = v
                    eid[t, u, v] = k
                    k += 1
        out_ptr[p * n] = k
        in_ptr = np.zeros(p * n + 1, dtype=np.int32)
        in_idx = np.zeros(a.m, dtype=np.int32)
        in_eid = np.zeros(a.m, dtype=np.int32)
        k = 0
        for t in range(p):
            tp = (t - 1) % p
            for v in range(n):
                in_ptr[t * n + v] = k
                for u in a.in_adj[t][v]:
                    in_idx[k] = u
                    in_eid[k] = eid[tp, u, v]
                    k += 1
        in_ptr[p * n] = k
        return cls(out_ptr, out_idx, in_ptr, in_idx, in_eid)


def build_arena(g: PeriodicGraph) -> Arena:
    return Arena(g)


def is_star(a: Union[Arena, "AugmentedArena"], node: tuple[int, int]) -> bool:
    """Whether the node's out-neighbourhood covers ``V``.

    On an augmented arena the node's own vertex counts as covered: a robber
    stepping onto the cop is caught.
    """
    t, u = node
    from .solver import AugmentedArena

    if isinstance(a, AugmentedArena):
        return (a.shadow_out[t][u] | (1 << u)) == a.base.full
    return a.out_mask[t][u] == a.full


def reachable_from_slice0(a: Arena) -> bytearray:
    """Flags over node indices ``t*n+v``: reachable by a journey from slice 0."""
    n, p = a.n, a.p
    seen = bytearray(p * n)
    queue = deque()
    for v in range(n):
        seen[v] = 1
        queue.append((0, v))
    while queue:
        t, x = queue.popleft()
        t1 = (t + 1) % p
        for y in a.out_adj[t][x]:
            i = t1 * n + y
            if not seen[i]:
                seen[i] = 1
                queue.append((t1, y))
    return seen


def anchored_set(a: Arena) -> set[TemporalNode]:
    seen = reachable_from_slice0(a)
    return {TemporalNode(i // a.n, i % a.n) for i, s in enumerate(seen) if s}


def shortest_anchor_journey(a: Arena, target: tuple[int, int]) -> list[int] | None:
    """Shortest journey from any slice-0 node to ``target`` as a vertex list.

    Breadth-first from all of slice 0 at once. Every node on BFS level ``L``
    lies in slice ``L mod p``; expanding each level in vertex order makes the
    recorded predecessor the smallest one available.
    """
    n, p = a.n, a.p
    t_goal, v_goal = target
    parent: dict[tuple[int, int], int | None] = {(0, v): None for v in range(n)}
    level = list(range(n))
    depth = 0
    while level:
        t = depth % p
        if t == t_goal and v_goal in level:
            break
        t1 = (t + 1) % p
        nxt = []
        for x in level:
            for y in a.out_adj[t][x]:
                if (t1, y) not in parent:
                    parent[t1, y] = x
                    nxt.append(y)
        level = sorted(nxt)
        depth += 1
    else:
        return None
    path = [v_goal]
    t = t_goal
    for _ in range(depth):
        prev = parent[t, path[-1]]
        assert prev is not None
        path.append(prev)
        t = (t - 1) % p
    path.reverse()
    return path


def temporal_corners(a: Arena, closed: bool = False) -> list[tuple[TemporalNode, TemporalNode]]:
    """All ``((t,u), (t+1,v))`` with ``u != v`` and ``succ(t,u)`` inside ``succ(t+1,v)``.

    With ``closed`` the cover also counts its own vertex, matching the rule
    that a robber stepping onto the cop is caught.
    """
    out = []
    for t in range(a.p):
        t1 = (t + 1) % a.p
        for u in range(a.n):
            mu = a.out_mask[t][u]
            for v in range(a.n):
                cover = a.out_mask[t1][v] | (1 << v if closed else 0)
                if u != v and (mu & ~cover) == 0:
                    out.append((TemporalNode(t, u), TemporalNode(t1, v)))
    return out
