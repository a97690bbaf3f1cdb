import logging

import numpy as np
import pytest

from persistnet.network.configuration import configuration_model, sample_poisson_degrees
from persistnet.network.graph import Graph


@pytest.fixture(autouse=True)
def reset_logging():
    """Undo handlers installed by LoggingConfig so caplog sees later records."""
    yield
    logging.captureWarnings(False)
    for name in ("persistnet", "py.warnings"):
        logger = logging.getLogger(name)
        for handler in list(logger.handlers):
            logger.removeHandler(handler)
            handler.close()
        logger.propagate = True
        logger.setLevel(logging.NOTSET)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def triangle():
    return Graph(3, frozenset({(0, 1), (1, 2), (0, 2)}))


@pytest.fixture
def star():
    """Node 0 joined to nodes 1..10."""
    return Graph(11, frozenset((0, leaf) for leaf in range(1, 11)))


@pytest.fixture
def poisson_graph():
    """A configuration-model graph on 1000 nodes with Poisson(6) degrees."""
    rng = np.random.default_rng(2024)
    return configuration_model(sample_poisson_degrees(1000, 6.0, rng), rng).graph


def make_cm_graph(n: int, mean: float, seed: int) -> Graph:
    rng = np.random.default_rng(seed)
    return configuration_model(sample_poisson_degrees(n, mean, rng), rng).graph
