import math

import pytest
from sympy import partition as npartitions

from singergq.errors import WrongSize
from singergq.gf import field_of_order
from singergq.singer import (
    directions_of_set,
    distinct_multisets,
    even_char_invariant_count,
    hr_estimate,
    partition_count,
    partition_witness_search,
    partitions,
    zeta,
)


@pytest.mark.parametrize("p,n,subspaces,z", [(2, 2, 30, 1), (3, 2, 120, 1), (2, 3, 1386, 2), (5, 2, 780, 1)])
def test_zeta(p, n, subspaces, z):
    s = distinct_multisets(p, n)
    assert s.subspaces == subspaces
    assert s.zeta == z == zeta(p, n)


def test_multisets_q4():
    s = distinct_multisets(2, 2)
    # a line off the spread of PG(3,2) meets three spread lines in a point
    assert s.dimension_multisets == {(1, 1, 1)}
    assert s.point_multisets == {(1, 1, 1)}


@pytest.mark.parametrize("n,count", [(2, 1), (3, 1), (4, 2)])
def test_even_char_exhaustive(n, count):
    r = even_char_invariant_count(n)
    assert r.exhaustive
    assert r.count == count == math.ceil((n - 1) / 2)


def test_even_char_sampled_n5():
    r = even_char_invariant_count(5, samples=4000, seed=2)
    assert not r.exhaustive
    assert r.multisets == [(1, 4), (2, 3)]


@pytest.mark.parametrize("n", [1, 5, 10, 25, 40])
def test_partition_count_against_sympy(n):
    assert partition_count(n) == npartitions(n) == (len(partitions(n)) if n <= 25 else npartitions(n))


def test_partitions_are_decreasing():
    for pt in partitions(7):
        assert sum(pt) == 7 and list(pt) == sorted(pt, reverse=True)
    with pytest.raises(ValueError):
        partitions(61)


def test_hardy_ramanujan_ratio():
    assert 1.0 < hr_estimate(50) / partition_count(50) < 1.1


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (3, 2)])
def test_partition_witnesses(p, n):
    found = partition_witness_search(p, n)
    assert set(found) == {pt for pt in partitions(n) if len(pt) > 1}
    assert all(v is not None for v in found.values())


def test_directions_of_lines_and_parabola():
    q = 5
    F = field_of_order(q)
    line = [(x, F.mul(2, x)) for x in range(q)]
    assert directions_of_set(line, q) == {2}
    parabola = [(x, F.mul(x, x)) for x in range(q)]
    # secant slopes of y = x^2 are x1 + x2, which takes every value
    assert directions_of_set(parabola, q) == set(range(q))
    with pytest.raises(WrongSize):
        directions_of_set(line[:3], q)
