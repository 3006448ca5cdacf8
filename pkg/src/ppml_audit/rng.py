"""Deterministic random-stream derivation.

Every stochastic step in the toolkit draws from a substream derived from a
single base seed plus a textual label and the operation's parameters, so the
order in which operations run never entangles their randomness.
"""

import hashlib
import json

import numpy as np

DEFAULT_SEED = 42


def derive_seed_sequence(seed: int, label: str, **params) -> np.random.SeedSequence:
    """Stable SeedSequence for (seed, label, params).

    Parameters are serialized canonically (sorted keys, repr fallback) and
    hashed, so equal inputs always yield the same stream and any change to a
    parameter yields an unrelated one.
    """
    key = json.dumps([label, params], sort_keys=True, default=repr)
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    words = np.frombuffer(digest[:16], dtype=np.uint32)
    return np.random.SeedSequence([int(seed) & 0xFFFFFFFF, *map(int, words)])


def derive_rng(seed: int, label: str, **params) -> np.random.Generator:
    """Generator seeded from :func:`derive_seed_sequence`."""
    return np.random.default_rng(derive_seed_sequence(seed, label, **params))
