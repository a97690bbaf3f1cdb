"""
Master-seed fan-out: replication r draws from SeedSequence([master, r]).

The child stream depends only on (master, r), so serial and parallel runs agree.
"""

import numpy as np


def child_seed(master: int, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(master), int(index)])


def child_rng(master: int, index: int) -> np.random.Generator:
    return np.random.default_rng(child_seed(master, index))
