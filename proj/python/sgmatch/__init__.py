"""Continuous subgraph pattern matching over streaming graphs."""

from sgmatch._core import (
    check,
    compute_stats,
    decompose,
    gen_queries,
    gen_stream,
    run,
)

__all__ = [
    "check",
    "compute_stats",
    "decompose",
    "gen_queries",
    "gen_stream",
    "run",
]
