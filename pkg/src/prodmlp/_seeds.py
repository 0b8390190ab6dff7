"""Deterministic random streams.

Every source of randomness in the library draws from a counter-based Philox
generator keyed by (seed, role).  Distinct roles get decorrelated streams, and
the stream for a given (seed, role) is a pure function of those two integers,
independent of whatever other streams were consumed before it.
"""

import numpy as np

# role tags; fixed forever, changing them changes every seeded artifact
ROLE_INIT = 1
ROLE_DATA = 2
ROLE_BATCH = 3
ROLE_GRID_BATCH = 4


def stream(seed: int, role: int) -> np.random.Generator:
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, role])))
