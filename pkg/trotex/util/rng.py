"""
Seeded random streams.

Every consumer of randomness asks for its own child stream with a purpose
label. A child stream is a :class:`numpy.random.Generator` on a PCG64 bit
generator whose :class:`numpy.random.SeedSequence` has the master seed as
entropy and ``(crc32(purpose),)`` as spawn key. Streams with different labels
are statistically independent, streams with the same label and seed are bit
identical, whatever order they are requested in.

Labels used by trotex:

 - ``heisenberg-fields``: the random fields of a Heisenberg chain.
 - ``bitstring``: random computational basis states.
 - ``pauli-observable``: random Pauli string observables.
 - ``<experiment_id>/<T>/<m>/node-<k>``: measurement noise of one node.
"""
import zlib
import numpy as np


def purpose_key(purpose):
    """
    Map a purpose label on its spawn key.

    :param str purpose: Purpose label.
    :return int: Unsigned 32 bit CRC of the UTF-8 label.
    """
    return zlib.crc32(purpose.encode('utf-8')) & 0xffffffff


def child_generator(seed, purpose):
    """
    Make the child random stream for ``purpose`` under master ``seed``.

    Passing a :class:`numpy.random.Generator` as seed returns it unchanged,
    so callers can inject their own stream.

    :param int|numpy.random.Generator seed: Master seed (non-negative).
    :param str purpose: Purpose label.
    :return numpy.random.Generator: The child stream.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    sequence = np.random.SeedSequence(
        entropy=int(seed), spawn_key=(purpose_key(purpose),)
    )
    return np.random.Generator(np.random.PCG64(sequence))
