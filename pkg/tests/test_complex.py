import pytest
from hypothesis import given, settings

from khcob.complex import comultiply, complex_of, graded_euler_characteristic, multiply
from khcob.laurent import LaurentPolynomial
from khcob.verify import kauffman_oracle

from conftest import DIAGRAMS, load
from strategies import braid_diagrams


def _d_squared_zero(d):
    cx = complex_of(d)
    for i, j in cx.gradings():
        if cx.rank(i + 2, j):
            assert (cx.differential(i + 1, j) @ cx.differential(i, j)).is_zero(), (i, j)


@pytest.mark.parametrize("name", DIAGRAMS)
def test_d_squared_is_zero_on_fixtures(name):
    _d_squared_zero(load(name))


@pytest.mark.parametrize("name", DIAGRAMS)
def test_euler_matches_kauffman(name):
    d = load(name)
    assert graded_euler_characteristic(d) == kauffman_oracle(d)


def test_frobenius_algebra():
    # bit 1 is the unit, bit 0 is x
    assert multiply(1, 1) == 1
    assert multiply(0, 1) == multiply(1, 0) == 0
    assert multiply(0, 0) is None
    assert comultiply(0) == [(0, 0)]
    assert sorted(comultiply(1)) == [(0, 1), (1, 0)]


def test_818_slice_ranks():
    cx = complex_of(load("8_18"))
    assert cx.rank(-4, -7) == 5
    assert cx.rank(-3, -7) == 8
    assert {i for i in cx.i_range() if cx.rank(i, -7)} == {-4, -3}


def test_empty_diagram():
    cx = complex_of(load("empty"))
    assert cx.gradings() == [(0, 0)]
    assert graded_euler_characteristic(load("empty")) == LaurentPolynomial({0: 1})


def test_unknot_gradings():
    cx = complex_of(load("unknot"))
    assert sorted(cx.gradings()) == [(0, -1), (0, 1)]


@settings(max_examples=30, deadline=None)
@given(braid_diagrams(max_len=5))
def test_d_squared_zero_random(d):
    _d_squared_zero(d)


@settings(max_examples=30, deadline=None)
@given(braid_diagrams(max_len=5))
def test_euler_equals_oracle_random(d):
    assert graded_euler_characteristic(d) == kauffman_oracle(d)
