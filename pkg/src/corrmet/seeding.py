"""Deterministic RNG streams derived from hierarchical integer seed paths.

Every random draw in the package flows through here.  A stream is addressed
by a tuple of non-negative integers (e.g. ``(master_seed, iteration)`` or
``(master_seed, tree_index, metric_index)``), so concurrent consumers get
independent, schedule-independent streams.
"""

from __future__ import annotations

import numpy as np


def _check_parts(parts: tuple[int, ...]) -> None:
    if not parts:
        raise ValueError("seed path must contain at least one integer")
    for p in parts:
        if not isinstance(p, (int, np.integer)) or p < 0:
            raise ValueError(f"seed path entries must be non-negative ints, got {p!r}")


def rng_for(*parts: int) -> np.random.Generator:
    """Return a Generator for the given seed path."""
    _check_parts(parts)
    return np.random.default_rng([int(p) for p in parts])


def derive_seed(*parts: int) -> int:
    """Collapse a seed path into a single non-negative 63-bit integer.

    Used where an API wants one scalar seed (e.g. a nested ForestConfig).
    """
    _check_parts(parts)
    words = np.random.SeedSequence([int(p) for p in parts]).generate_state(2)
    return int((int(words[0]) << 31) ^ int(words[1]))
