from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from semiperm.rings import (
    QQ,
    ZZ,
    ModPrime,
    is_prime,
    ring_descriptor,
    ring_from_descriptor,
)


def test_mod_prime_rejects_composite():
    with pytest.raises(ValueError):
        ModPrime(45006)
    with pytest.raises(ValueError):
        ModPrime(1)
    with pytest.raises(ValueError):
        ModPrime(2**31 + 11)  # out of range even if prime


def test_mod_prime_accepts_defaults():
    assert ModPrime(45007).p == 45007
    assert ModPrime(2_147_483_629).p == 2_147_483_629


def test_is_prime_small():
    primes = [n for n in range(60) if is_prime(n)]
    assert primes == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]


def test_half():
    assert QQ.half() == Fraction(1, 2)
    gf = ModPrime(45007)
    assert gf.mul(gf.half(), gf.from_int(2)) == 1
    with pytest.raises(ValueError):
        ZZ.half()
    assert not ModPrime(2).has_half


def test_integer_inverse_only_units():
    assert ZZ.inv(-1) == -1
    with pytest.raises(ValueError):
        ZZ.inv(2)


def test_descriptor_round_trip():
    for ring in (QQ, ZZ, ModPrime(45007)):
        assert ring_from_descriptor(ring_descriptor(ring)) == ring
    with pytest.raises(ValueError):
        ring_from_descriptor("floaty")


@given(st.integers(-10**30, 10**30), st.integers(-10**30, 10**30))
def test_mod_matches_integer_arithmetic(a, b):
    gf = ModPrime(45007)
    ra, rb = gf.from_int(a), gf.from_int(b)
    assert gf.add(ra, rb) == (a + b) % 45007
    assert gf.sub(ra, rb) == (a - b) % 45007
    assert gf.mul(ra, rb) == (a * b) % 45007


@given(st.integers(1, 10**18))
def test_mod_inverse(a):
    gf = ModPrime(2_147_483_629)
    r = gf.from_int(a)
    if r != 0:
        assert gf.mul(r, gf.inv(r)) == 1
