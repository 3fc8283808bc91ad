"""Named, reproducible random streams derived from one master seed.

Every run owns a single integer seed; each consumer asks for a stream by
name.  Streams with different names are statistically independent and
their assignment is stable across runs and platforms, which keeps
parallel schedules reproducible.
"""

from __future__ import annotations

import hashlib

import numpy as np


def stream(seed: int, *names: str) -> np.random.Generator:
    """Generator for the sub-stream identified by ``names`` under ``seed``."""
    keys = [
        int.from_bytes(hashlib.sha256(n.encode("utf8")).digest()[:8], "big")
        for n in names
    ]
    return np.random.default_rng(np.random.SeedSequence([int(seed), *keys]))
