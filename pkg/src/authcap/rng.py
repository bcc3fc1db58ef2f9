"""Deterministic RNG substreams.

All randomness in a run flows from one 64-bit seed.  Independent work units
(restarts, grid rows, Monte Carlo batches) each get their own generator via

    substream(seed, name, index)

where the stream key is SHA-256 over ``"{seed}:{name}:{index}"``.  The
derivation is documented so runs can be reproduced outside this package, and
it is stable across platforms and process boundaries (unlike spawn-based
seeding, it does not depend on call order).
"""

from __future__ import annotations

import hashlib

import numpy as np


def substream(seed: int, name: str, index: int = 0) -> np.random.Generator:
    """Generator for the work unit `(name, index)` under the run seed."""
    digest = hashlib.sha256(f"{seed}:{name}:{index}".encode()).digest()
    return np.random.default_rng(int.from_bytes(digest[:8], "big"))
