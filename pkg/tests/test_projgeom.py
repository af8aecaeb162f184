import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from singergq.errors import DimensionMismatch, SpaceTooLarge
from singergq.gf import field_of_order, get_field
from singergq.projgeom import (
    ProjectiveSpace,
    Spread,
    Subspace,
    count_points,
    enumerate_points,
    gaussian_binomial,
    matrix_rank,
    meet,
    normalize,
    nullspace,
    rank_normalized,
    span,
    subspace_bases,
    symplectic_pairs,
)


@pytest.mark.parametrize("n,q,expected", [(3, 3, 40), (2, 4, 21), (1, 2, 3), (3, 4, 85), (2, 9, 91)])
def test_point_counts(n, q, expected):
    pts = enumerate_points(n, field_of_order(q))
    assert len(pts) == expected == count_points(n, q)
    assert len(np.unique(pts, axis=0)) == expected


def test_points_are_normalised_and_ranked():
    F = field_of_order(4)
    pts = enumerate_points(3, F)
    assert np.array_equal(normalize(pts, F), pts)
    assert rank_normalized(pts, 4).tolist() == list(range(len(pts)))
    assert pts[0].tolist() == [0, 0, 0, 1]


def test_index_of_scaled_vectors():
    F = get_field(5)
    S = ProjectiveSpace(2, F)
    for i in range(len(S)):
        v = F.vmul(S.points[i], np.full(3, 3, dtype=F.dtype))
        assert S.index_of(v) == i


def test_bruteforce_orbit_count():
    # points of PG(2,3) are the 26 nonzero vectors modulo the 2 scalars
    F = get_field(3)
    vecs = [v for v in itertools.product(range(3), repeat=3) if any(v)]
    classes = {tuple(normalize(np.array(v), F)) for v in vecs}
    assert len(classes) == len(enumerate_points(2, F)) == 13


def test_space_guard():
    with pytest.raises(SpaceTooLarge):
        ProjectiveSpace(9, field_of_order(64))


def test_rank_and_nullspace():
    F = get_field(3, 2)
    rows = [[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, 0, 1]]
    r = matrix_rank(rows, F)
    ns = nullspace(rows, F, 4)
    assert r + len(ns) == 4
    for v in ns:
        for row in rows:
            acc = 0
            for a, b in zip(row, v):
                acc = F.add(acc, F.mul(a, b))
            assert acc == 0


def test_span_and_meet_dimensions():
    F = get_field(2)
    a = Subspace.from_rows([[1, 0, 0, 0], [0, 1, 0, 0]], F)
    b = Subspace.from_rows([[0, 1, 0, 0], [0, 0, 1, 0]], F)
    assert a.join(b).dim == 3
    m = meet(a, b)
    assert m.dim == 1 and m.contains([0, 1, 0, 0])
    with pytest.raises(DimensionMismatch):
        meet(a, Subspace.from_rows([[1, 0, 0]], F))


def test_span_of_points():
    F = get_field(3)
    L = span([[1, 0, 0], [0, 1, 0]], F)
    assert L.projdim == 1 and len(L.points()) == 4


@pytest.mark.parametrize("p,n,size", [(2, 2, 5), (3, 2, 10), (2, 3, 9)])
def test_spread_partitions_space(p, n, size):
    sp = Spread(p, n)
    assert sp.size == size
    codes = np.arange(1, p ** (2 * n))
    assert np.all(sp.lookup[codes] >= 0)
    counts = np.bincount(sp.lookup[codes], minlength=size)
    assert np.all(counts == p**n - 1)
    for a, b in itertools.combinations(sp.elements[:4], 2):
        assert meet(a, b).projdim == -1


def test_subspace_bases_count():
    B = subspace_bases(2, 4, 2)
    assert B.shape == (35, 2, 4) == (gaussian_binomial(4, 2, 2), 2, 4)
    assert gaussian_binomial(6, 3, 3) == 33880


def test_symplectic_form_is_alternating():
    F = get_field(5)
    form = symplectic_pairs(F)
    pts = enumerate_points(3, F)
    assert np.all(form.values(pts, pts) == 0)
    u, v = pts[3], pts[17]
    assert form.value(u, v) == F.neg(form.value(v, u))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 8), min_size=4, max_size=4).filter(any), st.integers(1, 8))
def test_normalize_is_scale_invariant(v, c):
    F = get_field(3, 2)
    v = np.array(v)
    scaled = F.vmul(v, np.full(4, c))
    assert np.array_equal(normalize(v, F), normalize(scaled, F))
