"""Seed-splitting rule: every stream is ``SeedSequence([seed, *keys])``.

String keys are mapped through CRC-32 so the derivation is reproducible
from any language; integer keys are used as-is.
"""
from __future__ import annotations

import zlib

import numpy as np


def _key(k) -> int:
    if isinstance(k, str):
        return zlib.crc32(k.encode())
    return int(k)


def substream(seed: int, *keys) -> np.random.Generator:
    """Independent generator for (session seed, party/trial keys...)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), *map(_key, keys)])))
