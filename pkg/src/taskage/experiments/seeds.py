"""Deterministic seed derivation for sweep cells and replications.

Seeds are split with SHA-256 over a length-prefixed encoding of the base
seed and the cell coordinates, so every (cell, replication) gets a stable,
well-separated 64-bit seed that never collides through string
concatenation ambiguity. The scheme is part of the reproducibility
contract: identical inputs must yield identical seeds across platforms
and releases.
"""

import hashlib

_MASK64 = (1 << 64) - 1


def derive_seed(base_seed, *parts):
    """64-bit seed for one labeled cell under ``base_seed``.

    ``parts`` may be strings or numbers; each is encoded as its ``str()``
    form with a length prefix. Floats therefore distinguish 0.1 from
    0.10000000000000002 but not 1 from 1.0; pass consistent types.
    """
    h = hashlib.sha256()
    h.update((int(base_seed) & _MASK64).to_bytes(8, "little"))
    for part in parts:
        data = str(part).encode("utf-8")
        h.update(len(data).to_bytes(4, "little"))
        h.update(data)
    return int.from_bytes(h.digest()[:8], "little")
