from functools import lru_cache

import pytest

from qapery.gpqh import quantum_chevalley_operator
from qapery.prodspaces import ProductSpec, product_operator
from qapery.rootsys import CartanType


@lru_cache(maxsize=None)
def gp(family, rank, node):
    return quantum_chevalley_operator(CartanType(family, rank), node)


@lru_cache(maxsize=None)
def prod(dims, weights):
    return product_operator(ProductSpec(dims, weights))


def gr(k, N):
    return gp("A", N - 1, k)


@pytest.fixture
def cache_dir(tmp_path):
    return tmp_path / "cache"
