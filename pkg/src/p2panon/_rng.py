"""Seed derivation.

All randomness comes from numpy's PCG64 bit generator.  A stream is identified
by ``(seed, label, *index)``; the label is hashed with CRC-32 so that streams
for different purposes never collide and every stream can be recreated in
isolation, whatever order workers execute in.
"""
import zlib

import numpy as np

_MASK64 = (1 << 64) - 1


def derive_rng(seed, label, *index):
    """Return an independent ``numpy.random.Generator`` for ``(seed, label, *index)``."""
    if seed is None:
        raise ValueError("seed must be an integer")
    words = [int(seed) & _MASK64, zlib.crc32(label.encode("utf-8"))]
    words.extend(int(i) for i in index)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(words)))


def derive_seed(seed, label, *index):
    """A 63-bit child seed, for handing to functions that take an integer seed."""
    return int(derive_rng(seed, label, *index).integers(0, 2**63 - 1))
