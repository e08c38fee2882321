import numpy as np
import pytest

import blockselect as bs


@pytest.fixture
def triangle():
    return bs.load_edge_list("0 1\n1 2\n0 2")


@pytest.fixture
def single_edge():
    return bs.load_edge_list("0 1")


def random_graph(n, p, seed):
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, 1)
    mask = rng.random(len(iu)) < p
    return bs.from_edges(n, list(zip(iu[mask].tolist(), ju[mask].tolist())))
