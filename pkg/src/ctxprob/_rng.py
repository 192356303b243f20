"""Deterministic, splittable random-number streams.

Every stochastic component of the package draws from a substream derived from
``(seed, role, *indices)`` through :class:`numpy.random.SeedSequence`.  Two
substreams with different paths are statistically independent, and the mapping
is a pure function of its arguments: results never depend on evaluation order
or on how work is distributed across workers.

Role tags are small integers so that stream derivation is stable across
releases; never renumber them.
"""

from __future__ import annotations

import numpy as np

from ._validation import require_seed

# Stream roles.  Frozen: changing a value changes every derived stream.
ROLE_MODEL = 0
ROLE_A_ON_CONTEXT = 1
ROLE_B_ON_CONTEXT = 2
ROLE_A_ON_FILTERED_1 = 3
ROLE_A_ON_FILTERED_2 = 4
ROLE_BOOTSTRAP = 5
ROLE_STUDY = 6


def substream(seed: int, *path: int) -> np.random.Generator:
    """Return the generator for substream ``(seed, *path)``."""
    require_seed(seed)
    return np.random.default_rng(np.random.SeedSequence((seed, *path)))
