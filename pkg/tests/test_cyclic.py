from collections import Counter

import pytest
from hypothesis import given, strategies as st

from strictfhs.cyclic import (
    Block,
    crt_split,
    external_differences,
    internal_differences,
    is_complete_coset_representatives,
)
from strictfhs.direct import construct_trace_bncrdp
from strictfhs.errors import BadDivisor, ModulusMismatch, NotCoprime


def test_internal_singleton_empty():
    assert internal_differences(Block.of([0], 6)) == Counter()


def test_internal_pair():
    assert internal_differences(Block.of([0, 1], 6)) == Counter({1: 1, 5: 1})


def test_internal_planar():
    assert internal_differences(Block.of([0, 1, 3], 7)) == Counter({r: 1 for r in range(1, 7)})


def test_external_examples():
    a = Block.of([0], 6)
    assert external_differences(a, a) == Counter({0: 1})
    assert external_differences(a, Block.of([1, 2], 6)) == Counter({1: 1, 2: 1})
    assert external_differences(Block.of([0, 3], 6), Block.of([1, 4], 6)) == Counter({1: 2, 4: 2})


def test_external_modulus_mismatch():
    with pytest.raises(ModulusMismatch):
        external_differences(Block.of([0], 6), Block.of([0], 7))


def test_block_validation_and_shift():
    with pytest.raises(ValueError):
        Block((3, 1), 6)
    assert Block.of([0, 4], 6).shift(3).elements == (1, 3)


@pytest.mark.parametrize("n1,n2,x,pair", [(3, 2, 5, (2, 1)), (3, 2, 0, (0, 0)), (8, 3, 11, (3, 2))])
def test_crt_examples(n1, n2, x, pair):
    c = crt_split(n1, n2)
    assert c.split(x) == pair
    assert c.join(*pair) == x


def test_crt_not_coprime():
    with pytest.raises(NotCoprime):
        crt_split(4, 6)


@given(st.integers(1, 60), st.integers(1, 60), st.data())
def test_crt_round_trip(n1, n2, data):
    from math import gcd
    if gcd(n1, n2) != 1:
        return
    c = crt_split(n1, n2)
    x = data.draw(st.integers(0, n1 * n2 - 1))
    assert c.join(*c.split(x)) == x


def test_coset_representatives_examples():
    assert is_complete_coset_representatives([1, 2], 3, exclude=[0])
    assert not is_complete_coset_representatives([1, 4], 3, exclude=[0])


def test_coset_representatives_bad_divisor():
    with pytest.raises(BadDivisor):
        is_complete_coset_representatives([1], 5, n=12)


def test_trace_blocks_with_zero_cover_z13():
    F, _ = construct_trace_bncrdp(3, 3, 1)
    els = [x for b in F.members[0] for x in b]
    assert is_complete_coset_representatives(els + [0], 13, n=26)
