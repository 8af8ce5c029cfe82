"""Hierarchical seed derivation.

Every random draw hangs off ``numpy.random.SeedSequence`` spawn keys:

    master_seed
      (0,)      training states
      (1,)      validation states
      (2, i)    trial i  -> a 63-bit integer ``trial_seed``
      (3, k)    k-th regenerated validation set (used by ``validate``)

    trial_seed
      (0,)      parameter initialization
      (1,)      shot sampling

so a ``(config, master_seed)`` pair fixes every number a run produces.
"""
import numpy as np

TRAINING, VALIDATION, TRIALS, REVALIDATION = range(4)


def _stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def data_rng(master_seed: int, role: str) -> np.random.Generator:
    return _stream(master_seed, TRAINING if role == "training" else VALIDATION)


def revalidation_rng(master_seed: int, round_: int = 0) -> np.random.Generator:
    return _stream(master_seed, REVALIDATION, round_)


def trial_seed(master_seed: int, index: int) -> int:
    words = np.random.SeedSequence(master_seed, spawn_key=(TRIALS, index)).generate_state(2, np.uint32)
    return (int(words[0]) << 31) ^ int(words[1])


def trial_seeds(master_seed: int, count: int) -> list:
    return [trial_seed(master_seed, i) for i in range(count)]


def trial_streams(seed: int):
    """``(init_rng, shot_rng)`` for one trial."""
    return _stream(seed, 0), _stream(seed, 1)
