"""Seeded, splittable random streams.

Every consumer derives its own generator from a master seed plus a tuple
of integer keys, so results never depend on call order.
"""

from __future__ import annotations

import numpy as np


def derive(seed: int, *keys: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.PCG64(ss))


def derive_int(seed: int, *keys: int) -> int:
    """A 63-bit integer seed for a sub-component."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


# key namespaces, kept distinct so derived streams never collide
PARTITION = 1
SR_HASH = 2
L0_HASH = 3
ORACLE = 4
STREAM = 5
MACHINE = 6
TRIAL = 7
