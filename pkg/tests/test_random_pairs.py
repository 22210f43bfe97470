import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bclfactor.opcore import op_norm, spectral_radius
from bclfactor.random_pairs import random_commuting_pair


@given(st.integers(0, 10_000), st.integers(1, 8), st.sampled_from([0.5, 0.9]))
@settings(max_examples=60, deadline=None)
def test_contract(seed, dim, cap):
    t1, t2 = random_commuting_pair(dim, seed=seed, spectral_cap=cap)
    assert t1.shape == t2.shape == (dim, dim)
    assert op_norm(t1 @ t2 - t2 @ t1) <= 1e-12
    assert op_norm(t1) <= 1 + 1e-12 and op_norm(t2) <= 1 + 1e-12
    assert spectral_radius(t1 @ t2) <= cap


def test_seeding():
    a, b = random_commuting_pair(4, seed=0), random_commuting_pair(4, seed=0)
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
    c = random_commuting_pair(4, seed=1)
    assert not np.array_equal(a[0], c[0])


@pytest.mark.parametrize("dim, cap", [(0, 0.9), (3, 1.0), (3, 0.0)])
def test_rejects_bad_arguments(dim, cap):
    with pytest.raises(ValueError):
        random_commuting_pair(dim, spectral_cap=cap)
