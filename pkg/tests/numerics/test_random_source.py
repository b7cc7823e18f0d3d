"""
Tests for seeded substreams.
"""
import numpy as np
import pytest

from src.numerics.random_source import RandomSource


def test_substream_depends_only_on_seed_and_name():
    source = RandomSource(42)
    first = source.substream("model").random(5)
    source.generator.random(100)
    source.substream("dropout").random(100)
    assert np.array_equal(first, RandomSource(42).substream("model").random(5))


def test_names_give_independent_streams():
    source = RandomSource(0)
    assert not np.array_equal(source.substream("model").random(5), source.substream("dropout").random(5))


def test_seeds_give_different_streams():
    assert not np.array_equal(
        RandomSource(0).substream("labels").random(5),
        RandomSource(1).substream("labels").random(5),
    )


@pytest.mark.parametrize("seed", [-1, 2**64])
def test_seed_range(seed):
    with pytest.raises(ValueError, match="64-bit"):
        RandomSource(seed)
