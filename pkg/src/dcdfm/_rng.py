"""Seed handling.

All randomness in the package flows through :func:`make_rng`, which builds a
``numpy.random.Generator`` on the PCG64 bit generator seeded through
``numpy.random.SeedSequence``.  SeedSequence is splittable: independent
streams for sub-tasks are derived with ``spawn_key`` tuples, so a single base
seed reproduces every replicate of an experiment regardless of execution
order or parallelism.
"""

from __future__ import annotations

import numpy as np


def make_rng(seed) -> np.random.Generator:
    """Return a PCG64 Generator for ``seed``.

    ``seed`` may be an int, a SeedSequence, an existing Generator (returned
    as-is), or None (fresh OS entropy).
    """
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def subseed(base_seed, *key: int) -> np.random.SeedSequence:
    """Derive the SeedSequence for one cell of a seeded task grid.

    ``subseed(s, i, j)`` is independent of ``subseed(s, i', j')`` for any
    distinct key tuples, and deterministic in (s, i, j).
    """
    return np.random.SeedSequence(base_seed, spawn_key=tuple(int(k) for k in key))
