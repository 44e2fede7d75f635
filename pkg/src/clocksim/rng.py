"""Counter-keyed random streams for reproducible parallel sampling.

Streams are keyed by (master_seed, experiment_id, sample_index) through a
SeedSequence spawn key feeding a Philox counter generator, so any worker
can materialize any stream independently and results never depend on how
work is split.  String experiment names hash through sha256 (stable across
processes, unlike the builtin hash).
"""

from __future__ import annotations

import hashlib

import numpy as np

__all__ = ["experiment_key", "substream"]


def experiment_key(name) -> int:
    if isinstance(name, (int, np.integer)):
        return int(name)
    digest = hashlib.sha256(str(name).encode()).digest()
    return int.from_bytes(digest[:8], "little")


def substream(master_seed: int, experiment_id, sample_index: int) -> np.random.Generator:
    seq = np.random.SeedSequence(
        entropy=int(master_seed) & (2**64 - 1),
        spawn_key=(experiment_key(experiment_id), int(sample_index)),
    )
    return np.random.Generator(np.random.Philox(seq))
