"""``periodic-cops`` command line.

Exit codes: 0 when the command ran (a robberwin answer is a success), 1 for
usage or input errors, 2 for budget overruns and verification mismatches.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Sequence, TextIO

from . import kcop, oracle, solver
from .arena import build_arena
from .ptg import PeriodicGraph, PtgError, classify, gen_random, parse_ptg, serialize_ptg

EXIT_OK, EXIT_USAGE, EXIT_ALARM = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with status 2
        raise UsageError(message)


def _load(path: str) -> PeriodicGraph:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_ptg(data)


def _stat(out: TextIO, name: str, value: int) -> None:
    print(f"stat {name} {int(value)}", file=out)


# ---------------------------------------------------------------------------
# check


def cmd_check(args, out: TextIO) -> int:
    g = _load(args.file)
    d = build_arena(g)
    if args.k == 1:
        verdict = solver.decide_copwin(d, early_stop=not args.no_early_stop)
        print(f"verdict {'copwin' if verdict.copwin else 'robberwin'}", file=out)
        if verdict.witness is not None:
            w = verdict.witness
            print(f"star {w.star.t} {w.star.v}", file=out)
            print(f"anchor {w.anchor}", file=out)
            print("journey " + " ".join(map(str, w.journey)), file=out)
        stats = dict(verdict.stats)
        stats["op_total"] = op_total(stats)
        for name in sorted(stats):
            _stat(out, name, stats[name])
        return EXIT_OK
    kv = kcop.decide_k_copwin(d, args.k)
    print(f"verdict {'copwin' if kv.copwin else 'robberwin'}", file=out)
    if kv.witness is not None:
        w = kv.witness
        print(f"star {w.t} " + " ".join(map(str, w.star)), file=out)
        print("anchor " + " ".join(map(str, w.anchor)), file=out)
        for c, path in enumerate(w.journeys):
            print(f"journey {c} " + " ".join(map(str, path)), file=out)
    for name in sorted(kv.stats):
        _stat(out, name, kv.stats[name])
    return EXIT_OK


def op_total(stats) -> int:
    return sum(int(stats[name]) for name in solver.COUNTER_NAMES)


# ---------------------------------------------------------------------------
# verify


def verify_instance(g: PeriodicGraph, k: int) -> list[str]:
    """Empty list when solver and oracle agree; otherwise a counterexample dump."""
    d = build_arena(g)
    tab = oracle.copwin_configs(d, k)
    want_verdict = oracle.oracle_decide(d, k, tab)
    if k == 1:
        verdict, state = solver.solve(d, early_stop=False)
        got = {(t, (x,), y) for t, x, y in state.augmented().off_diagonal_edges()}
        got_verdict = verdict.copwin
    else:
        h = kcop.compute_max_k_augmented(d, k)
        got = {(t, tuple(x), y) for t, x, y in h.off_diagonal()}
        got_verdict = kcop.decide_k_copwin(d, k).copwin
    want = tab.winning()
    lines = []
    if got != want:
        t, cops, r = min(got ^ want)
        lines.append(
            f"edge {t} {' '.join(map(str, cops))} {r} "
            f"solver {int((t, cops, r) in got)} oracle {int((t, cops, r) in want)}"
        )
    if got_verdict != want_verdict:
        lines.append(f"verdict solver {int(got_verdict)} oracle {int(want_verdict)}")
    return lines


def _verify_random(job: tuple[int, int, int, int, bool, bool, int]) -> tuple[str, list[str]]:
    n, p, d, seed, reflexive, symmetric, k = job
    g = gen_random(n, p, d, seed, reflexive=reflexive, symmetric=symmetric)
    return serialize_ptg(g), verify_instance(g, k)


def cmd_verify(args, out: TextIO) -> int:
    if args.random is None:
        if args.file is None:
            raise UsageError("verify needs a file or --random n p d seed count")
        problems = verify_instance(_load(args.file), args.k)
        if problems:
            print("verify mismatch", file=out)
            for line in problems:
                print(line, file=out)
            return EXIT_ALARM
        print("verify ok", file=out)
        return EXIT_OK

    n, p, d, seed, count = args.random
    jobs = [(n, p, d, seed + i, args.reflexive, args.symmetric, args.k) for i in range(count)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_verify_random, jobs, chunksize=8))
    else:
        results = [_verify_random(job) for job in jobs]
    for i, (text, problems) in enumerate(results):
        if problems:
            print("verify mismatch", file=out)
            print(f"instance {i} seed {seed + i}", file=out)
            for line in problems:
                print(line, file=out)
            out.write(text)
            return EXIT_ALARM
    print(f"verify ok {count}", file=out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# strategy / play


def cmd_strategy(args, out: TextIO) -> int:
    d = build_arena(_load(args.file))
    strat = solver.strategy_for(d)
    if strat is None:
        print("error robberwin", file=out)
        return EXIT_OK
    Path(args.out).write_text(solver.format_strategy(strat))
    print(f"strategy written {args.out}", file=out)
    return EXIT_OK


def _human_robber(d, out: TextIO, inp: Callable[[str], str]) -> Callable[[int, int, int], int]:
    def move(rnd: int, cop: int, rob: int) -> int:
        legal = d.succ(rnd, rob)
        while True:
            raw = inp(f"round {rnd}: cop now on {cop}, you are on {rob}; moves {' '.join(map(str, legal))}> ")
            try:
                choice = int(raw.strip())
            except ValueError:
                choice = None
            if choice in legal:
                return choice
            print(f"illegal move {raw.strip()!r}", file=out)

    return move


def cmd_play(args, out: TextIO, inp: Callable[[str], str] = input) -> int:
    d = build_arena(_load(args.file))
    strat = solver.strategy_for(d)
    if strat is None:
        print("error robberwin: one cop has no winning strategy on this graph, nothing to play", file=out)
        return EXIT_USAGE
    limit = args.limit if args.limit is not None else d.p * d.n * d.n
    print(f"cop start {strat.start}", file=out)
    print("journey " + " ".join(map(str, strat.journey)), file=out)

    if args.robber == "adversarial":
        tab = oracle.copwin_configs(d, 1)
        start = oracle.adversarial_start(tab, (strat.start,)) if args.start is None else args.start
        robber = lambda rnd, cop, rob: oracle.adversarial_move(tab, rnd, (cop,), rob)  # noqa: E731
    elif args.robber == "random":
        rng = random.Random(args.seed)
        start = rng.randrange(d.n) if args.start is None else args.start
        robber = lambda rnd, cop, rob: rng.choice(d.succ(rnd, rob))  # noqa: E731
    else:
        start = args.start
        while start is None:
            raw = inp(f"robber start vertex (0..{d.n - 1})> ")
            try:
                v = int(raw.strip())
            except ValueError:
                v = -1
            if 0 <= v < d.n:
                start = v
            else:
                print(f"illegal start {raw.strip()!r}", file=out)
        robber = _human_robber(d, out, inp)
    if not 0 <= start < d.n:
        raise UsageError(f"robber start {start} out of range")

    print(f"robber start {start}", file=out)
    tr = solver.play(d, strat, start, robber, limit=limit)
    for r in tr.rounds:
        rob_to = "-" if r.robber_to is None else str(r.robber_to)
        print(f"round {r.round} cop {r.cop} {r.cop_to} robber {r.robber} {rob_to}", file=out)
    if tr.captured:
        print(f"captured round {tr.capture_round}", file=out)
    else:
        print(f"survived {limit} rounds", file=out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# gen / bench


def cmd_gen(args, out: TextIO) -> int:
    flags = set(args.flags)
    unknown = flags - {"reflexive", "symmetric"}
    if unknown:
        raise UsageError(f"unknown flag(s): {' '.join(sorted(unknown))}")
    g = gen_random(args.n, args.p, args.d, args.seed, reflexive="reflexive" in flags, symmetric="symmetric" in flags)
    out.write(serialize_ptg(g))
    return EXIT_OK


def bench_one(g: PeriodicGraph, backend: str, static_shortcut: bool) -> tuple[dict[str, int], int]:
    d = build_arena(g)
    start = time.perf_counter()
    verdict, _ = solver.solve(d, early_stop=False, backend=backend, assume_reflexive_connected=static_shortcut)
    elapsed = time.perf_counter() - start
    stats = dict(verdict.stats)
    stats["copwin"] = int(verdict.copwin)
    return stats, int(elapsed * 1e6)


def cmd_bench(args, out: TextIO) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s]
    except ValueError:
        raise UsageError(f"bad --sizes {args.sizes!r}") from None
    backends = solver.available_backends() if args.backend == "all" else [args.backend]
    for n in sizes:
        g = gen_random(n, args.p, args.d, args.seed + n, reflexive=args.reflexive, symmetric=args.symmetric)
        shortcut = False
        if args.reflexive:
            gc = classify(g)
            shortcut = gc.reflexive and gc.temporally_connected
        print(f"bench n {n} p {g.p} m {g.m}", file=out)
        reference = None
        walls = {}
        for backend in backends:
            stats, wall = bench_one(g, backend, shortcut)
            walls[backend] = wall
            if reference is None:
                reference = stats
            elif stats != reference:
                print(f"error backends disagree on n={n}", file=out)
                return EXIT_ALARM
        assert reference is not None
        total = op_total(reference)
        bound = g.p * n * n + n * g.m
        for name in sorted(reference):
            _stat(out, name, reference[name])
        _stat(out, "op_total", total)
        _stat(out, "op_bound", bound)
        _stat(out, "op_ratio", round(1000 * total / bound))
        for backend in backends:
            _stat(out, f"wall_us_{backend}", walls[backend])
        if "cython" in walls and "python" in walls:
            _stat(out, "speedup_x100", round(100 * walls["python"] / max(walls["cython"], 1)))
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="periodic-cops", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="decide copwin / k-copwin")
    p.add_argument("file")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--no-early-stop", action="store_true")

    p = sub.add_parser("verify", help="cross-check solver against the brute-force oracle")
    p.add_argument("file", nargs="?")
    p.add_argument("--random", nargs=5, type=int, metavar=("N", "P", "D", "SEED", "COUNT"))
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--reflexive", action="store_true")
    p.add_argument("--symmetric", action="store_true")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("strategy", help="write the cop strategy file")
    p.add_argument("file")
    p.add_argument("out")

    p = sub.add_parser("play", help="play the extracted strategy against a robber")
    p.add_argument("file")
    p.add_argument("--robber", choices=("human", "adversarial", "random"), default="adversarial")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--start", type=int)
    p.add_argument("--limit", type=int)

    p = sub.add_parser("gen", help="print a random playable .ptg")
    p.add_argument("n", type=int)
    p.add_argument("p", type=int)
    p.add_argument("d", type=int)
    p.add_argument("seed", type=int)
    p.add_argument("flags", nargs="*", help="reflexive and/or symmetric")

    p = sub.add_parser("bench", help="time both kernels and report operation counters")
    p.add_argument("--sizes", default="50,100,200")
    p.add_argument("--seed", type=int, default=9)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--reflexive", action="store_true")
    p.add_argument("--symmetric", action="store_true")
    p.add_argument("--backend", choices=("all", "cython", "python"), default="all")
    return ap


COMMANDS = {
    "check": cmd_check,
    "verify": cmd_verify,
    "strategy": cmd_strategy,
    "play": cmd_play,
    "gen": cmd_gen,
    "bench": cmd_bench,
}


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "k", 1) < 1:
            raise UsageError("--k must be >= 1")
        return COMMANDS[args.command](args, out)
    except (UsageError, PtgError) as exc:
        print(f"error {exc}", file=sys.stderr)
        return EXIT_USAGE
    except oracle.BudgetExceeded as exc:
        print(f"error budget: {exc}", file=sys.stderr)
        return EXIT_ALARM


if __name__ == "__main__":
    sys.exit(main())
