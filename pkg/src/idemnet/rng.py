"""Seedable random streams with documented splitting.

All randomness in the package flows from a single 64-bit integer seed
through ``numpy.random.SeedSequence``. Disjoint sub-streams are derived
with spawn keys, so that independent stages of an experiment (graph
generation, pair sampling, center sampling, ...) never share state and
results do not depend on evaluation order or thread count.

Layout of spawn keys:

* ``(STREAM_X,)``            -- one top-level stream per purpose below
* ``(STREAM_NODE, u)``       -- per-node child stream (long-range contact
                                sampling draws node ``u``'s targets here)
* ``(STREAM_SIZE, i, ...)``  -- per-size children for multi-size scans
"""

from __future__ import annotations

from numpy.random import Generator, PCG64, SeedSequence

# Top-level purpose streams.
STREAM_GENERATE = 0
STREAM_PAIRS = 1
STREAM_CENTERS = 2
STREAM_BEACONS = 3
STREAM_NODE = 4
STREAM_SIZE = 5


def make_rng(seed: int, *key: int) -> Generator:
    """PCG64 generator for ``seed``, optionally split by spawn ``key``."""
    if key:
        seq = SeedSequence(seed, spawn_key=tuple(key))
    else:
        seq = SeedSequence(seed)
    return Generator(PCG64(seq))


def node_rng(seed: int, node: int) -> Generator:
    """Child stream owned by a single node; independent of all others."""
    return make_rng(seed, STREAM_NODE, node)


def derive_seed(seed: int, *key: int) -> int:
    """A plain integer sub-seed, for APIs that take ``seed: int``."""
    return int(SeedSequence(seed, spawn_key=tuple(key)).generate_state(1)[0])
