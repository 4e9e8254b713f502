import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pgt.permcore import Permutation, compose, inverse


def perms(n):
    return st.permutations(list(range(n))).map(Permutation)


@st.composite
def perm_pairs(draw, max_degree=8):
    n = draw(st.integers(1, max_degree))
    return draw(perms(n)), draw(perms(n)), draw(perms(n))


def test_compose_with_identity():
    a = Permutation.from_cycles(3, (0, 1))
    assert compose(a, Permutation.identity(3)) == a


def test_cycle_square():
    c = Permutation.from_cycles(3, (0, 1, 2))
    assert c * c == Permutation.from_cycles(3, (0, 2, 1))


def test_compose_transpositions_by_hand():
    a = Permutation.from_cycles(3, (0, 1))
    b = Permutation.from_cycles(3, (1, 2))
    # b(0)=0, a(0)=1; b(1)=2, a(2)=2; b(2)=1, a(1)=0
    assert tuple(a * b) == (1, 2, 0)
    # the other order is the 3-cycle 1 -> 0, 2 -> 1, 0 -> 2
    assert tuple(b * a) == (2, 0, 1)


def test_compose_degree_mismatch():
    with pytest.raises(ValueError):
        compose(Permutation.identity(3), Permutation.identity(4))


def test_rejects_non_bijection():
    with pytest.raises(ValueError):
        Permutation([0, 0, 1])


def test_from_cycles_rejects_overlap():
    with pytest.raises(ValueError):
        Permutation.from_cycles(4, (0, 1), (1, 2))


@given(perm_pairs())
def test_inverse_gives_identity(abc):
    a, _, _ = abc
    n = len(a)
    assert a * a.inverse() == Permutation.identity(n)
    assert inverse(a) * a == Permutation.identity(n)


@given(perm_pairs())
def test_composition_is_pointwise(abc):
    a, b, _ = abc
    ab = a * b
    assert all(ab[x] == a[b[x]] for x in range(len(a)))


@given(perm_pairs())
def test_associative(abc):
    a, b, c = abc
    assert (a * b) * c == a * (b * c)


@settings(max_examples=50)
@given(perm_pairs())
def test_order_and_power(abc):
    a, _, _ = abc
    k = a.order()
    assert (a ** k).is_identity()
    assert all(not (a ** j).is_identity() for j in range(1, k))
    assert a ** -1 == a.inverse()


@given(perm_pairs())
def test_cycles_round_trip(abc):
    a, _, _ = abc
    assert Permutation.from_cycles(len(a), *a.cycles()) == a


def test_random_support():
    rng = random.Random(0)
    imgs = list(range(9))
    rng.shuffle(imgs)
    a = Permutation(imgs)
    assert a.support() == [i for i in range(9) if imgs[i] != i]
