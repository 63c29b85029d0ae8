"""Single-cop solver: maximal augmented arena, copwin decision, strategies.

A shadow edge ``((t,x),(t+1,y))`` records that the configuration ``(t,x,y)``
(cop on ``x``, robber on ``y``, start of round ``t``) is won by the cop. The
fixpoint starts from the arena's own edges (the cop steps onto the robber) and
adds ``((t,x),(t+1,y))`` whenever some cop move ``x -> z`` leaves every robber
reply ``y -> w`` in an already known winning configuration ``(t+1,z,w)``.

Co-location counts as capture, so ``(t,x,x)`` is always won. Such diagonal
configurations are never stored or queued; they are granted wherever a
neighbourhood is compared against ``V``.

The inner loops run in a compiled kernel when the extension is built and in
:mod:`._pykernel` otherwise. Both produce identical state, counters included.
"""

from __future__ import annotations

import importlib
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

import numpy as np

from . import _pykernel
from .arena import Arena, TemporalNode, reachable_from_slice0, shortest_anchor_journey

try:
    from . import _ckernel as _default_kernel
except ImportError:  # extension not built
    _default_kernel = _pykernel

BACKEND: str = _default_kernel.BACKEND
COUNTER_NAMES = _pykernel.COUNTER_NAMES


def available_backends() -> list[str]:
    names = ["python"]
    try:
        importlib.import_module(f"{__package__}._ckernel")
    except ImportError:
        pass
    else:
        names.insert(0, "cython")
    return names


def get_kernel(backend: str | None = None):
    if backend is None:
        return _default_kernel
    if backend == "python":
        return _pykernel
    if backend == "cython":
        from . import _ckernel

        return _ckernel
    raise ValueError(f"unknown backend {backend!r}")


class StrategyError(RuntimeError):
    """The recorded strategy table is inconsistent (a solver bug)."""


class IllegalMove(ValueError):
    pass


@dataclass(frozen=True)
class AugmentedArena:
    """An arena plus shadow edges; ``shadow_out[t][x]`` is a bitmask of heads ``y``."""

    base: Arena
    shadow_out: tuple[tuple[int, ...], ...]

    def has_edge(self, t: int, x: int, y: int) -> bool:
        return bool(self.shadow_out[t % self.base.p][x] >> y & 1)

    def edges(self) -> set[tuple[int, int, int]]:
        n = self.base.n
        return {
            (t, x, y)
            for t, row in enumerate(self.shadow_out)
            for x, mask in enumerate(row)
            for y in range(n)
            if mask >> y & 1
        }

    def off_diagonal_edges(self) -> set[tuple[int, int, int]]:
        return {(t, x, y) for (t, x, y) in self.edges() if x != y}

    @property
    def num_edges(self) -> int:
        return sum(bin(mask).count("1") for row in self.shadow_out for mask in row)

    def stars(self) -> list[TemporalNode]:
        full = self.base.full
        return [
            TemporalNode(t, x)
            for t, row in enumerate(self.shadow_out)
            for x, mask in enumerate(row)
            if mask | (1 << x) == full
        ]


class SolverState:
    """Mutable state of one run of the shadow-edge fixpoint on ``arena``."""

    def __init__(self, arena: Arena, backend: str | None = None) -> None:
        n, p, m = arena.n, arena.p, arena.m
        self.arena = arena
        self.kernel = get_kernel(backend)
        self.csr = arena.csr
        cells = p * n * n
        self.dif = np.zeros(n * m, dtype=np.uint8)
        self.size = np.zeros(cells, dtype=np.int32)
        self.sc = np.zeros(cells, dtype=np.uint8)
        self.se = np.zeros(cells, dtype=np.uint8)
        self.adj = np.zeros(cells, dtype=np.uint8)
        self.adeg = np.zeros(p * n, dtype=np.int32)
        self.rho_table = np.full(cells, -1, dtype=np.int32)
        self.queue = np.zeros(cells, dtype=np.int32)
        self.qpos = np.array([0, 0, -1], dtype=np.int64)
        self.counters = np.zeros(len(COUNTER_NAMES), dtype=np.int64)
        self.anchored = np.frombuffer(bytes(reachable_from_slice0(arena)), dtype=np.uint8).copy()

    # -- views ---------------------------------------------------------------

    def index(self, t: int, x: int, y: int) -> int:
        n = self.arena.n
        return ((t % self.arena.p) * n + x) * n + y

    def dif_core(self, t: int, u: int, v: int) -> dict[int, int]:
        """DIF cells of ``(t,u,v)``: 1 marks a robber escape not yet covered."""
        n, m = self.arena.n, self.arena.m
        lo, hi = self.csr.out_ptr[t * n + u], self.csr.out_ptr[t * n + u + 1]
        return {int(self.csr.out_idx[k]): int(self.dif[v * m + k]) for k in range(lo, hi)}

    def dif_size(self, t: int, u: int, v: int) -> int:
        return int(self.size[self.index(t, u, v)])

    def shadow_corner(self, t: int, u: int, v: int) -> bool:
        return bool(self.sc[self.index(t, u, v)])

    def known(self, t: int, x: int, y: int) -> bool:
        return bool(self.se[self.index(t, x, y)])

    def committed(self, t: int, x: int, y: int) -> bool:
        return bool(self.adj[self.index(t, x, y)])

    def pending(self) -> list[tuple[int, int, int]]:
        n = self.arena.n
        return [self._triple(int(e), n) for e in self.queue[self.qpos[0] : self.qpos[1]]]

    @staticmethod
    def _triple(e: int, n: int) -> tuple[int, int, int]:
        return e // (n * n), (e // n) % n, e % n

    def rho(self) -> dict[tuple[int, int, int], int]:
        n = self.arena.n
        return {self._triple(int(e), n): int(self.rho_table[e]) for e in np.flatnonzero(self.rho_table >= 0)}

    @property
    def stats(self) -> dict[str, int]:
        return {name: int(v) for name, v in zip(COUNTER_NAMES, self.counters)}

    def augmented(self) -> AugmentedArena:
        """Committed shadow edges as an :class:`AugmentedArena` snapshot."""
        n, p = self.arena.n, self.arena.p
        bits = self.adj.reshape(p, n, n)
        weights = [1 << y for y in range(n)]
        rows = tuple(
            tuple(sum(w for w, b in zip(weights, bits[t, x].tolist()) if b) for x in range(n))
            for t in range(p)
        )
        return AugmentedArena(self.arena, rows)

    # -- kernel calls ----------------------------------------------------------

    def _initialize(self) -> None:
        a, c = self.arena, self.csr
        self.kernel.initialize(
            a.n, a.p, a.m, c.out_ptr, c.out_idx, c.in_ptr, c.in_idx,
            self.dif, self.size, self.sc, self.se, self.adj, self.adeg,
            self.rho_table, self.queue, self.qpos, self.counters,
        )

    def run(self, limit: int = -1, early_stop: bool = False) -> int:
        a, c = self.arena, self.csr
        return self.kernel.run(
            a.n, a.p, a.m, c.in_ptr, c.in_idx, c.in_eid,
            self.dif, self.size, self.sc, self.se, self.adj, self.adeg,
            self.rho_table, self.queue, self.qpos, self.counters,
            self.anchored, limit, early_stop,
        )

    def anchored_star(self) -> TemporalNode | None:
        """Smallest ``(t, v)`` that is an anchored star of the committed arena."""
        n = self.arena.n
        hits = np.flatnonzero((self.adeg == n - 1) & (self.anchored == 1))
        self.counters[COUNTER_NAMES.index("star_tests")] += self.adeg.size
        if hits.size == 0:
            return None
        i = int(hits[0])
        return TemporalNode(i // n, i % n)


def initialize(d: Arena, backend: str | None = None) -> SolverState:
    state = SolverState(d, backend)
    state._initialize()
    return state


def step(s: SolverState) -> bool:
    """Examine one queued shadow edge; ``False`` if the queue was empty."""
    return s.run(limit=1) == 1


def compute_max_augmented(d: Arena, backend: str | None = None) -> AugmentedArena:
    state = initialize(d, backend)
    state.run()
    return state.augmented()


@dataclass(frozen=True)
class Witness:
    star: TemporalNode
    anchor: int
    journey: tuple[int, ...]


@dataclass(frozen=True)
class Verdict:
    copwin: bool
    witness: Witness | None
    stats: Mapping[str, int] = field(default_factory=dict)


def _witness(d: Arena, star: TemporalNode) -> Witness:
    journey = shortest_anchor_journey(d, star)
    assert journey is not None, "star reported anchored but no journey found"
    return Witness(star, journey[0], tuple(journey))


def solve(
    d: Arena,
    early_stop: bool = True,
    backend: str | None = None,
    assume_reflexive_connected: bool = False,
) -> tuple[Verdict, SolverState]:
    """Run the solver and return the verdict together with the final state.

    ``assume_reflexive_connected`` lets the caller vouch that the graph is
    reflexive and temporally connected; the final star search then inspects
    one node only, since either every node of the maximal arena is an anchored
    star or none is.
    """
    state = initialize(d, backend)
    star = None
    if early_stop:
        star = state.anchored_star()
        if star is None:
            state.run(early_stop=True)
            if state.qpos[2] >= 0:
                i = int(state.qpos[2])
                star = TemporalNode(i // d.n, i % d.n)
    else:
        state.run()
        if assume_reflexive_connected:
            state.counters[COUNTER_NAMES.index("star_tests")] += 1
            if state.adeg[0] == d.n - 1:
                star = TemporalNode(0, 0)
        else:
            star = state.anchored_star()

    stats = state.stats
    stats["edges"] = int(state.adj.sum())
    stats["base_edges"] = d.m
    witness = _witness(d, star) if star is not None else None
    return Verdict(star is not None, witness, stats), state


def decide_copwin(d: Arena, early_stop: bool = True, backend: str | None = None) -> Verdict:
    return solve(d, early_stop=early_stop, backend=backend)[0]


# ---------------------------------------------------------------------------
# strategies


@dataclass(frozen=True)
class Strategy:
    start: int
    journey: tuple[int, ...]
    rho: Mapping[tuple[int, int, int], int]
    p: int

    @property
    def star(self) -> TemporalNode:
        return TemporalNode((len(self.journey) - 1) % self.p, self.journey[-1])


def extract_strategy(d: Arena, verdict: Verdict, rho: Mapping[tuple[int, int, int], int]) -> Strategy:
    """Keep the part of ``rho`` reachable from the star against any robber.

    Raises :class:`StrategyError` if some reachable configuration has no entry.
    """
    if not verdict.copwin or verdict.witness is None:
        raise ValueError("no cop strategy for a robberwin instance")
    w = verdict.witness
    p, n = d.p, d.n
    t0, x0 = w.star
    table: dict[tuple[int, int, int], int] = {}
    todo = deque((t0, x0, r) for r in range(n) if r != x0)
    while todo:
        key = todo.popleft()
        if key in table:
            continue
        t, x, y = key
        if key not in rho:
            raise StrategyError(f"missing rho entry for configuration {key}")
        z = rho[key]
        if not d.has_edge(t, x, z):
            raise StrategyError(f"rho{key} = {z} is not a legal cop move")
        table[key] = z
        if z == y:
            continue
        t1 = (t + 1) % p
        for r in d.succ(t, y):
            if r != z:
                todo.append((t1, z, r))
    return Strategy(w.anchor, w.journey, dict(sorted(table.items())), p)


def strategy_for(d: Arena, backend: str | None = None) -> Strategy | None:
    verdict, state = solve(d, backend=backend)
    if not verdict.copwin:
        return None
    return extract_strategy(d, verdict, state.rho())


def format_strategy(s: Strategy) -> str:
    lines = ["strategy 1", f"start {s.start}", "journey " + " ".join(map(str, s.journey))]
    lines.extend(f"rho {t} {x} {y} {z}" for (t, x, y), z in sorted(s.rho.items()))
    return "\n".join(lines) + "\n"


def parse_strategy(text: str, p: int) -> Strategy:
    start = None
    journey: tuple[int, ...] | None = None
    rho: dict[tuple[int, int, int], int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        tokens = line.split()
        if not tokens:
            continue
        if lineno == 1:
            if tokens != ["strategy", "1"]:
                raise ValueError("expected header 'strategy 1'")
        elif tokens[0] == "start":
            start = int(tokens[1])
        elif tokens[0] == "journey":
            journey = tuple(int(v) for v in tokens[1:])
        elif tokens[0] == "rho" and len(tokens) == 5:
            t, x, y, z = map(int, tokens[1:])
            rho[t, x, y] = z
        else:
            raise ValueError(f"line {lineno}: unrecognised strategy line")
    if start is None or not journey:
        raise ValueError("strategy file lacks start or journey")
    return Strategy(start, journey, rho, p)


# ---------------------------------------------------------------------------
# playing


@dataclass(frozen=True)
class Round:
    round: int
    cop: int
    robber: int
    cop_to: int
    robber_to: int | None


@dataclass(frozen=True)
class Transcript:
    robber_start: int
    rounds: tuple[Round, ...]
    capture_round: int | None

    @property
    def captured(self) -> bool:
        return self.capture_round is not None


RobberSource = Callable[[int, int, int], int]
"""``robber(round, cop_position_after_move, robber_position) -> next vertex``."""


def play(d: Arena, s: Strategy, robber_start: int, robber: RobberSource, limit: int | None = None,
         max_retries: int = 100) -> Transcript:
    """Cop follows ``s`` against ``robber``; the cop moves first in every round.

    Capture happens when the cop steps onto the robber or the robber steps onto
    the cop. Illegal robber moves are refused and the source is asked again.
    """
    if limit is None:
        limit = d.p * d.n * d.n
    cop, rob = s.start, robber_start
    if cop == rob:
        return Transcript(robber_start, (), 0)
    rounds: list[Round] = []
    last = len(s.journey) - 1
    for rnd in range(limit):
        t = rnd % d.p
        if rnd < last:
            nxt = s.journey[rnd + 1]
        else:
            try:
                nxt = s.rho[t, cop, rob]
            except KeyError:
                raise StrategyError(f"no strategy entry for configuration {(t, cop, rob)}") from None
        if nxt == rob:
            rounds.append(Round(rnd, cop, rob, nxt, None))
            return Transcript(robber_start, tuple(rounds), rnd)
        for _ in range(max_retries):
            move = robber(rnd, nxt, rob)
            if d.has_edge(t, rob, move):
                break
        else:
            raise IllegalMove(f"robber kept proposing illegal moves from {rob} in round {rnd}")
        rounds.append(Round(rnd, cop, rob, nxt, move))
        if move == nxt:
            return Transcript(robber_start, tuple(rounds), rnd)
        cop, rob = nxt, move
    return Transcript(robber_start, tuple(rounds), None)


def off_diagonal(edges: Iterable[tuple[int, int, int]]) -> set[tuple[int, int, int]]:
    return {(t, x, y) for t, x, y in edges if x != y}
