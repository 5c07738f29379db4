"""Pinned pseudorandom substreams.

Every random draw in the package comes from a numpy ``Generator`` backed by
``PCG64`` and seeded through ``SeedSequence``. A substream is identified by
``(seed, index, *keys)``: the entropy is ``(seed XOR index) mod 2**64`` and the
remaining keys become the ``spawn_key``, whose first entry tags the stream
family. Archives are reproducible bit-for-bit as long as the numpy
``PCG64``/``SeedSequence`` implementations are unchanged.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import numpy as np

from .defaults import RNG_ALGORITHM

MASK64 = (1 << 64) - 1

# leading spawn-key tag of each stream family
INSTANCE_STREAM = 0
START_STREAM = 1
BACKGROUND_STREAM = 2
DIRECTION_STREAM = 3


def substream_entropy(seed, index=0):
    return (int(seed) ^ int(index)) & MASK64


def substream(seed, index=0, *keys):
    """
    Return the generator for substream ``(seed, index, *keys)``.

    Parameters
    ----------
    seed : int
        The user-facing 64-bit seed.

    index : int, optional (default=0)
        Instance (or start) index folded into the entropy by XOR.

    keys : int
        Further integers naming the substream, e.g. the system size.
    """
    sequence = np.random.SeedSequence(
        entropy=substream_entropy(seed, index),
        spawn_key=tuple(int(k) for k in keys))
    bit_generator = getattr(np.random, RNG_ALGORITHM)(sequence)
    return np.random.Generator(bit_generator)
