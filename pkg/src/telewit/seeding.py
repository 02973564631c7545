"""Deterministic random streams.

Every stochastic routine in the package draws from a NumPy ``Generator``
backed by the PCG64 bit generator, keyed by ``SeedSequence([seed, *key])``.
Sub-streams are derived by counter (restart index, sample index, term
index), never by scheduling order, so results are reproducible from the
master seed alone.
"""

import numpy as np


def stream(seed, *key):
    """Generator for the sub-stream identified by (seed, *key)."""
    if seed < 0:
        raise ValueError("seed must be a non-negative integer")
    return np.random.default_rng([int(seed), *[int(k) for k in key]])


def derive_int(seed, *key):
    """64-bit integer seed derived from (seed, *key), for replayable sub-runs."""
    if seed < 0:
        raise ValueError("seed must be a non-negative integer")
    words = np.random.SeedSequence([int(seed), *[int(k) for k in key]]).generate_state(2)
    return int(words[0]) | (int(words[1]) << 32)
