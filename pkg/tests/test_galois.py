import random

import pytest

from strictfhs.errors import LogOfZero, NonPrimeCharacteristic, NotASubfield, RangeExceeded
from strictfhs.galois import field_create, field_of_order

from oracles import field_add, field_sub, is_irreducible_brute, power_table

SMALL = [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 2), (2, 6)]


def test_gf2_alpha_is_one():
    F = field_create(2, 1)
    assert F.q == 2 and F.alpha == 1


def test_gf4_modulus_and_alpha():
    F = field_create(2, 2)
    assert list(F.modulus) == [1, 1, 1]      # x^2 + x + 1
    a = F.alpha
    assert a != 1 and F.pow(a, 3) == 1


def test_gf9_alpha_has_order_8():
    F = field_create(3, 2)
    orders = [e for e in range(1, 9) if F.pow(F.alpha, e) == 1]
    assert orders[0] == 8


@pytest.mark.parametrize("p,k", SMALL)
def test_modulus_irreducible_and_alpha_primitive(p, k):
    F = field_create(p, k)
    if k > 1:
        assert is_irreducible_brute(list(F.modulus), p)
    table = power_table(p, k, list(F.modulus), F.alpha)
    assert sorted(table) == list(range(1, p ** k))


@pytest.mark.parametrize("p,k", SMALL)
def test_log_matches_power_oracle(p, k):
    F = field_create(p, k)
    table = power_table(p, k, list(F.modulus), F.alpha)
    for e, x in enumerate(table):
        assert F.log(x) == e
        assert F.alpha_pow(e) == x


@pytest.mark.parametrize("p,k", SMALL)
def test_add_sub_mul_against_oracle(p, k):
    F = field_create(p, k)
    table = power_table(p, k, list(F.modulus), F.alpha)
    log = {x: e for e, x in enumerate(table)}
    rng = random.Random(p * 100 + k)
    q = p ** k
    for _ in range(200):
        x, y = rng.randrange(q), rng.randrange(q)
        assert F.add(x, y) == field_add(x, y, p, k)
        assert F.sub(x, y) == field_sub(x, y, p, k)
        want = 0 if 0 in (x, y) else table[(log[x] + log[y]) % (q - 1)]
        assert F.mul(x, y) == want
        if x:
            assert F.mul(x, F.inv(x)) == 1


def test_log_identities():
    F = field_create(2, 2)
    assert F.log(1) == 0
    assert F.log(F.alpha) == 1
    assert F.log(F.add(F.alpha, 1)) == 2     # alpha^2 = alpha + 1


def test_log_of_zero():
    with pytest.raises(LogOfZero):
        field_create(3, 2).log(0)


def test_trace_gf4():
    F = field_create(2, 2)
    assert F.trace(0, 2) == 0
    assert F.trace(1, 2) == 0
    assert F.trace(F.alpha, 2) == 1


@pytest.mark.parametrize("q,base", [(4, 2), (8, 2), (9, 3), (16, 4), (27, 3), (64, 8)])
def test_trace_lands_in_subfield_and_is_linear(q, base):
    F = field_of_order(q)
    sub = set(F.subfield(base))
    assert len(sub) == base
    rng = random.Random(q)
    for _ in range(50):
        x, y = rng.randrange(q), rng.randrange(q)
        tx, ty = F.trace(x, base), F.trace(y, base)
        assert tx in sub
        assert F.trace(F.add(x, y), base) == F.add(tx, ty)
    # onto, and each value hit q/base times
    vals = [F.trace(x, base) for x in range(q)]
    assert all(vals.count(s) == q // base for s in sub)


def test_trace_of_powers_matches_trace():
    F = field_of_order(27)
    t = F.trace_of_powers(3)
    assert [int(v) for v in t] == [F.trace(F.alpha_pow(e), 3) for e in range(26)]


def test_not_a_subfield():
    with pytest.raises(NotASubfield):
        field_of_order(16).trace(3, 8)


def test_bad_characteristic_and_range():
    with pytest.raises(NonPrimeCharacteristic):
        field_create(4, 1)
    with pytest.raises(RangeExceeded):
        field_create(2, 21)
    with pytest.raises(NonPrimeCharacteristic):
        field_of_order(12)


def test_elements_power_order():
    F = field_of_order(9)
    els = F.elements_power_order()
    assert els[0] == 0 and els[1] == 1 and els[2] == F.alpha
    assert sorted(els) == list(range(9))


def test_field_deterministic():
    assert field_create(5, 2) is field_create(5, 2)
    assert repr(field_create(5, 2)) == repr(field_of_order(25))
