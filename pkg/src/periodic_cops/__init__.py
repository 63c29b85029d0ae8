"""Cops and robber on periodic temporal graphs."""

from .arena import Arena, TemporalNode, anchored_set, build_arena, is_star, temporal_corners
from .ptg import (
    GraphClass,
    PeriodicGraph,
    PtgError,
    StaticGraph,
    UnplayableError,
    classify,
    encode_standard,
    footprint,
    gen_random,
    parse_ptg,
    serialize_ptg,
)
from .solver import (
    BACKEND,
    AugmentedArena,
    SolverState,
    Strategy,
    Verdict,
    compute_max_augmented,
    decide_copwin,
    extract_strategy,
    initialize,
    play,
    step,
)

__all__ = [
    "Arena",
    "AugmentedArena",
    "BACKEND",
    "GraphClass",
    "PeriodicGraph",
    "PtgError",
    "SolverState",
    "StaticGraph",
    "Strategy",
    "TemporalNode",
    "UnplayableError",
    "Verdict",
    "anchored_set",
    "build_arena",
    "classify",
    "compute_max_augmented",
    "decide_copwin",
    "encode_standard",
    "extract_strategy",
    "footprint",
    "gen_random",
    "initialize",
    "is_star",
    "parse_ptg",
    "play",
    "serialize_ptg",
    "step",
    "temporal_corners",
]
