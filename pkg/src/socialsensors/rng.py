"""Seed handling.

All randomness is drawn from :class:`numpy.random.Generator` (PCG64).  Streams
for a benchmark are derived from ``(master_seed, purpose_tag, index)`` through
:class:`numpy.random.SeedSequence`, so every replication and every purpose
(graph, sampling, seeding, dynamics) gets an independent, reproducible stream.
"""

from __future__ import annotations

import zlib

import numpy as np

from .errors import InvalidParameterError



def as_generator(seed) -> np.random.Generator:
    """Return a Generator for ``seed``; a Generator is passed through unchanged.

    ``None`` is rejected: every random operation needs an explicit seed.
    """
    if seed is None:
        raise InvalidParameterError("an explicit seed is required (got None)")
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, (bool, float)):
        raise InvalidParameterError(f"seed must be an integer, got {seed!r}")
    if isinstance(seed, (int, np.integer)) and seed < 0:
        raise InvalidParameterError(f"seed must be nonnegative, got {seed}")
    return np.random.default_rng(seed)


def tag_code(tag: str) -> int:
    return zlib.crc32(tag.encode("utf-8"))


def derive_seed(master_seed: int, tag: str, index: int = 0) -> np.random.SeedSequence:
    """Seed sequence for stream ``(master_seed, tag, index)``."""
    if master_seed is None or int(master_seed) < 0:
        raise InvalidParameterError(f"master seed must be a nonnegative integer, got {master_seed!r}")
    return np.random.SeedSequence([int(master_seed), tag_code(tag), int(index)])


def derive_rng(master_seed: int, tag: str, index: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(derive_seed(master_seed, tag, index)))
