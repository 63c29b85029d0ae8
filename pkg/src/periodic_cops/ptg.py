"""Periodic temporal graphs: model, ``.ptg`` text format, generators, predicates."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable

Edge = tuple[int, int]


class PtgError(ValueError):
    """Raised for malformed ``.ptg`` input or invalid graph values."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnplayableError(PtgError):
    """Some vertex has no outgoing edge in some snapshot."""


def _first_sink(n: int, edges: Iterable[Edge]) -> int | None:
    has_out = [False] * n
    for u, _ in edges:
        has_out[u] = True
    for v, ok in enumerate(has_out):
        if not ok:
            return v
    return None


@dataclass(frozen=True)
class StaticGraph:
    n: int
    edges: frozenset[Edge]

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", frozenset(self.edges))
        if self.n < 1:
            raise PtgError("n must be >= 1")
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise PtgError(f"edge ({u},{v}) out of range for n={self.n}")


@dataclass(frozen=True)
class PeriodicGraph:
    """``p`` snapshot edge sets over the vertices ``0..n-1``.

    Construction rejects graphs where some vertex has an empty out-neighbourhood
    in some snapshot; every value of this type is playable.
    """

    n: int
    p: int
    snapshots: tuple[frozenset[Edge], ...]

    def __post_init__(self) -> None:
        snaps = tuple(frozenset(s) for s in self.snapshots)
        object.__setattr__(self, "snapshots", snaps)
        if self.n < 1:
            raise PtgError("n must be >= 1")
        if self.p < 1:
            raise PtgError("p must be >= 1")
        if len(snaps) != self.p:
            raise PtgError(f"expected {self.p} snapshots, got {len(snaps)}")
        for i, snap in enumerate(snaps):
            for u, v in snap:
                if not (0 <= u < self.n and 0 <= v < self.n):
                    raise PtgError(f"edge ({u},{v}) in snapshot {i} out of range for n={self.n}")
        for i, snap in enumerate(snaps):
            sink = _first_sink(self.n, snap)
            if sink is not None:
                raise UnplayableError(
                    f"unplayable: vertex {sink} has no outgoing edge in snapshot {i}"
                )

    @property
    def m(self) -> int:
        return sum(len(s) for s in self.snapshots)

    def snapshot(self, t: int) -> frozenset[Edge]:
        return self.snapshots[t % self.p]


# ---------------------------------------------------------------------------
# .ptg text format


def parse_ptg(text: bytes | str) -> PeriodicGraph:
    """Parse the ``.ptg`` format; see :func:`serialize_ptg` for the canonical form."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise PtgError(f"input is not UTF-8: {exc}") from None

    n: int | None = None
    p: int | None = None
    seen_magic = False
    snaps: list[set[Edge]] = []
    current: set[Edge] | None = None

    def ints(tokens: list[str], count: int, lineno: int) -> list[int]:
        if len(tokens) != count + 1:
            raise PtgError(f"syntax error: '{tokens[0]}' takes {count} argument(s)", lineno)
        try:
            return [int(tok) for tok in tokens[1:]]
        except ValueError:
            raise PtgError(f"syntax error: expected integers after '{tokens[0]}'", lineno) from None

    def vertex(v: int, lineno: int) -> int:
        assert n is not None
        if not 0 <= v < n:
            raise PtgError(f"vertex {v} out of range 0..{n - 1}", lineno)
        return v

    def add(edge: Edge, lineno: int) -> None:
        assert current is not None
        if edge in current:
            raise PtgError(f"duplicate edge {edge[0]} {edge[1]} in snapshot {len(snaps) - 1}", lineno)
        current.add(edge)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0]
        if not seen_magic:
            if tokens != ["ptg", "1"]:
                raise PtgError("syntax error: expected header 'ptg 1'", lineno)
            seen_magic = True
            continue
        if head == "n":
            if n is not None:
                raise PtgError("syntax error: duplicate 'n' line", lineno)
            (n,) = ints(tokens, 1, lineno)
            if n < 1:
                raise PtgError("n must be >= 1", lineno)
        elif head == "p":
            if n is None:
                raise PtgError("syntax error: 'p' must follow 'n'", lineno)
            if p is not None:
                raise PtgError("syntax error: duplicate 'p' line", lineno)
            (p,) = ints(tokens, 1, lineno)
            if p < 1:
                raise PtgError("p must be >= 1", lineno)
        elif head == "s":
            if n is None or p is None:
                raise PtgError("syntax error: snapshot before 'n' and 'p'", lineno)
            (i,) = ints(tokens, 1, lineno)
            if i < len(snaps):
                raise PtgError(f"duplicate snapshot header 's {i}'", lineno)
            if i != len(snaps):
                raise PtgError(f"missing snapshot {len(snaps)} (found 's {i}')", lineno)
            if i >= p:
                raise PtgError(f"snapshot index {i} out of range 0..{p - 1}", lineno)
            current = set()
            snaps.append(current)
        elif head in ("e", "u", "reflexive"):
            if current is None:
                raise PtgError(f"syntax error: '{head}' outside a snapshot", lineno)
            assert n is not None
            if head == "reflexive":
                if len(tokens) != 1:
                    raise PtgError("syntax error: 'reflexive' takes no arguments", lineno)
                current.update((v, v) for v in range(n))
                continue
            a, b = (vertex(x, lineno) for x in ints(tokens, 2, lineno))
            if head == "e":
                add((a, b), lineno)
            else:
                if a == b:
                    raise PtgError("syntax error: 'u' needs two distinct vertices", lineno)
                add((a, b), lineno)
                add((b, a), lineno)
        else:
            raise PtgError(f"syntax error: unknown directive '{head}'", lineno)

    if not seen_magic:
        raise PtgError("empty input: expected header 'ptg 1'")
    if n is None or p is None:
        raise PtgError("missing 'n' or 'p' line")
    if len(snaps) != p:
        raise PtgError(f"missing snapshot {len(snaps)}")
    return PeriodicGraph(n, p, tuple(frozenset(s) for s in snaps))


def serialize_ptg(g: PeriodicGraph) -> str:
    lines = ["ptg 1", f"n {g.n}", f"p {g.p}"]
    for i, snap in enumerate(g.snapshots):
        lines.append(f"s {i}")
        lines.extend(f"e {u} {v}" for u, v in sorted(snap))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# derived graphs and predicates


def footprint(g: PeriodicGraph) -> StaticGraph:
    edges: set[Edge] = set()
    for snap in g.snapshots:
        edges |= snap
    return StaticGraph(g.n, frozenset(edges))


@dataclass(frozen=True)
class GraphClass:
    reflexive: bool
    symmetric: bool
    sourceless: bool
    temporally_connected: bool


def is_reflexive(g: PeriodicGraph) -> bool:
    return all((v, v) in snap for snap in g.snapshots for v in range(g.n))


def is_symmetric(g: PeriodicGraph) -> bool:
    return all((v, u) in snap for snap in g.snapshots for (u, v) in snap)


def is_sourceless(g: PeriodicGraph) -> bool:
    for snap in g.snapshots:
        has_in = [False] * g.n
        for _, v in snap:
            has_in[v] = True
        if not all(has_in):
            return False
    return True


def is_temporally_connected(g: PeriodicGraph) -> bool:
    """Every ``u != v`` is joined by a journey starting at every time ``t``.

    Checked by graph search in the folded arena from ``(t, u)``; any temporal
    copy of ``v`` reached by at least one move counts.
    """
    n, p = g.n, g.p
    succ = [[[] for _ in range(n)] for _ in range(p)]
    for t, snap in enumerate(g.snapshots):
        for u, v in sorted(snap):
            succ[t][u].append(v)
    for t0 in range(p):
        for u in range(n):
            seen = bytearray(p * n)
            reached = bytearray(n)
            stack = [(t0, u)]
            seen[t0 * n + u] = 1
            while stack:
                t, x = stack.pop()
                t1 = (t + 1) % p
                for y in succ[t][x]:
                    reached[y] = 1
                    if not seen[t1 * n + y]:
                        seen[t1 * n + y] = 1
                        stack.append((t1, y))
            if any(not reached[v] for v in range(n) if v != u):
                return False
    return True


def classify(g: PeriodicGraph) -> GraphClass:
    return GraphClass(
        reflexive=is_reflexive(g),
        symmetric=is_symmetric(g),
        sourceless=is_sourceless(g),
        temporally_connected=is_temporally_connected(g),
    )


# ---------------------------------------------------------------------------
# constructors


def encode_standard(n: int, undirected_edges: Iterable[Edge], allow_wait: bool, p: int = 1) -> PeriodicGraph:
    """Encode a classical undirected game board as a restless periodic graph.

    Every undirected edge becomes two arcs in every snapshot; ``allow_wait``
    adds all self-loops so players may stay put.
    """
    snap: set[Edge] = set()
    for a, b in undirected_edges:
        snap.add((a, b))
        snap.add((b, a))
    if allow_wait:
        snap.update((v, v) for v in range(n))
    return PeriodicGraph(n, p, tuple(frozenset(snap) for _ in range(p)))


def static_periodic(n: int, edges: Iterable[Edge], p: int = 1) -> PeriodicGraph:
    """The same directed edge set repeated in all ``p`` snapshots."""
    snap = frozenset(edges)
    return PeriodicGraph(n, p, (snap,) * p)


def gen_random(
    n: int,
    p: int,
    d: int,
    seed: int,
    reflexive: bool = False,
    symmetric: bool = False,
) -> PeriodicGraph:
    """Random playable periodic graph, a pure function of its arguments.

    Each vertex gets one uniform out-edge per snapshot, then ``d`` further
    distinct out-edges (fewer if the vertex runs out of targets).
    """
    if n < 1 or p < 1 or d < 0:
        raise PtgError("gen_random needs n >= 1, p >= 1, d >= 0")
    rng = random.Random(seed)
    snaps = []
    for _ in range(p):
        snap: set[Edge] = set()
        for u in range(n):
            first = rng.randrange(n)
            snap.add((u, first))
            others = [v for v in range(n) if v != first]
            for v in rng.sample(others, min(d, len(others))):
                snap.add((u, v))
        if symmetric:
            snap |= {(v, u) for u, v in snap}
        if reflexive:
            snap |= {(v, v) for v in range(n)}
        snaps.append(frozenset(snap))
    return PeriodicGraph(n, p, tuple(snaps))


def fixtures() -> dict[str, PeriodicGraph]:
    """Small named instances used throughout the tests and docs."""

    def cycle(k: int) -> list[Edge]:
        return [(i, (i + 1) % k) for i in range(k)]

    return {
        "SWAP2": static_periodic(2, [(0, 1), (1, 0)]),
        "RP3": encode_standard(3, [(0, 1), (1, 2)], allow_wait=True),
        "RK2": encode_standard(2, [(0, 1)], allow_wait=True),
        "RC4": encode_standard(4, cycle(4), allow_wait=True),
        "DICYC3": static_periodic(3, cycle(3)),
        "PER2": PeriodicGraph(2, 2, (frozenset({(0, 1), (1, 0)}), frozenset({(0, 0), (1, 1)}))),
        "PER-DISC": PeriodicGraph(
            3, 2, (frozenset({(0, 1), (1, 0), (2, 2)}), frozenset({(1, 2), (2, 1), (0, 0)}))
        ),
    }


def reflexive_cycle(n: int) -> PeriodicGraph:
    return encode_standard(n, [(i, (i + 1) % n) for i in range(n)], allow_wait=True)


def directed_cycle(n: int) -> PeriodicGraph:
    return static_periodic(n, [(i, (i + 1) % n) for i in range(n)])

