"""
Per-item random generators.

Stochastic steps never share one sequential random stream. Each item (a
reference mapping, an equivalence being turned into a subsumption) gets its
own counter-based Philox generator keyed by the global seed and the item's
identity, so results do not depend on processing order or worker scheduling.
"""

from __future__ import annotations

import hashlib

import numpy as np


def derive_key(seed: int, *parts: str) -> int:
    """Derive a 128-bit Philox key from a global seed and item identity."""
    payload = "\t".join([str(seed), *parts]).encode("utf-8")
    return int.from_bytes(hashlib.sha256(payload).digest()[:16], "big")


def item_rng(seed: int, *parts: str) -> np.random.Generator:
    """
    Create the random generator of one item.

    Example:
        >>> a = item_rng(42, "http://ex.org/A", "http://ex.org/B").integers(10)
        >>> b = item_rng(42, "http://ex.org/A", "http://ex.org/B").integers(10)
        >>> int(a) == int(b)
        True
    """
    return np.random.Generator(np.random.Philox(key=derive_key(seed, *parts)))
