import numpy as np


def philox_stream(seed: int, *key: int) -> np.random.Generator:
    """
    Counter-based Philox generator for the stream (seed, *key).

    Streams with different keys are independent, so work split by key
    (repetition, step, ...) draws the same numbers whatever the worker count.
    """
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))
