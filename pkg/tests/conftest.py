import numpy as np
import pytest

from fsind.category import builtin_category
from fsind.center import builtin_center

BUILTIN_NAMES = ["pointed:2", "pointed:3", "pointed:2:1", "fibonacci", "ising"]

_cat_cache = {}
_center_cache = {}


def get_category(name):
    if name not in _cat_cache:
        _cat_cache[name] = builtin_category(name)
    return _cat_cache[name]


def get_center(name):
    if name not in _center_cache:
        _center_cache[name] = builtin_center(name, get_category(name))
    return _center_cache[name]


@pytest.fixture(params=BUILTIN_NAMES)
def builtin_name(request):
    return request.param


@pytest.fixture
def cat(builtin_name):
    return get_category(builtin_name)


@pytest.fixture
def center(builtin_name):
    return get_center(builtin_name)


@pytest.fixture
def rng():
    return np.random.default_rng(20210412)


def random_state(cat, word, rng):
    from fsind.diagrams import hom_basis, combine
    basis = hom_basis(cat, word)
    if not basis:
        return None
    coeffs = rng.normal(size=len(basis)) + 1j * rng.normal(size=len(basis))
    return combine(basis, coeffs)


def random_closed_word(cat, rng, max_len=5):
    """A word with nonzero hom-from-unit space."""
    from fsind.diagrams import hom_dim
    while True:
        length = int(rng.integers(2, max_len + 1))
        word = tuple((int(rng.integers(0, cat.rank)),
                      int(rng.choice([-1, 1]))) for _ in range(length))
        if hom_dim(cat, word) > 0:
            return word
