"""Counter-based seed derivation.

Every random draw in a run is keyed by ``(master, frame_index, stream)``
through ``numpy.random.SeedSequence``, so any frame of any arm can be
reproduced in isolation and in any order. Radar noise and channel noise
use fixed stream ids shared by all arms (common random numbers); payload
bits use the arm's own id.
"""

import numpy as np

RADAR_STREAM = 1
COMM_STREAM = 2
ARM_STREAM_BASE = 100

ARM_IDS = {"adaptive": 0, "bpsk": 1, "qpsk": 2, "qam16": 3, "qam64": 4}


def substream(master, frame_index, stream):
    return np.random.SeedSequence([int(master), int(frame_index), int(stream)])


def _as_seed_sequence(seed):
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if isinstance(seed, (tuple, list)):
        return np.random.SeedSequence([int(s) for s in seed])
    return np.random.SeedSequence(int(seed))


def radar_noise_key(seed):
    """64-bit key for the counter-based radar noise generator."""
    return int(_as_seed_sequence(seed).generate_state(1, np.uint64)[0])


def generator(seed):
    return np.random.default_rng(_as_seed_sequence(seed))


def arm_stream(arm):
    return ARM_STREAM_BASE + ARM_IDS[arm]
