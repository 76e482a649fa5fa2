import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tenderscreen import models as M
from tenderscreen.evaluation import split
from tenderscreen.features import training_data
from tenderscreen.simulate import SimConfig, generate


@pytest.fixture(scope="session")
def sim_small():
    return generate(SimConfig(n_tenders=300, seed=3))


@pytest.fixture(scope="session")
def data_expanded(sim_small):
    return training_data(sim_small, "expanded")


@pytest.fixture(scope="session")
def data_raw(sim_small):
    return training_data(sim_small, "raw_screens")


@pytest.fixture(scope="session")
def split_expanded(data_expanded):
    return split(data_expanded, 0.75, seed=1)


@pytest.fixture(scope="session")
def split_raw(data_raw):
    return split(data_raw, 0.75, seed=1)


@pytest.fixture(scope="session")
def forest_small(split_expanded):
    tr, _ = split_expanded
    return M.train_random_forest(tr, M.ForestConfig(n_trees=40, seed=5))


@pytest.fixture(scope="session")
def cart_small(split_raw):
    tr, _ = split_raw
    return M.train_cart(tr, M.CartConfig(seed=5))


@pytest.fixture(scope="session")
def logit_small(split_expanded):
    tr, _ = split_expanded
    return M.train_logit(tr, M.LogitConfig(seed=5))
