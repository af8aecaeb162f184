import numpy as np
import pytest

from singergq.errors import SpaceTooLarge, WrongShape
from singergq.gf import field_of_order, get_field
from singergq.incidence import is_regular_point, verify_gq
from singergq.matgroup import Action, generate, normalize_proj
from singergq.projgeom import enumerate_points
from singergq.symplectic import (
    build_wq,
    centralizer_condition,
    check_singer_contains_S,
    has_shape,
    index_report,
    shape_matrix,
    similitude_factor,
    stabilizer_family,
    stabilizer_order_formula,
    symmetry_group,
)


@pytest.mark.parametrize(
    "q,npts,dpts,dlines",
    [(2, 15, 8, 16), (3, 40, 27, 45), (4, 85, 64, 96), (5, 156, 125, 175)],
)
def test_wq_and_derivative_counts(q, npts, dpts, dlines):
    W = build_wq(q)
    assert W.structure.npoints == W.structure.nlines == npts
    P = W.derived
    assert (P.npoints, P.nlines) == (dpts, dlines)
    assert (P.certificate.s, P.certificate.t) == (q - 1, q + 1)


def test_every_point_regular_q3():
    S = build_wq(3).structure
    assert all(is_regular_point(S, x) for x in range(S.npoints))


def test_build_guard():
    with pytest.raises(SpaceTooLarge):
        build_wq(64)


def test_derived_points_are_the_noncollinear_ones():
    W = build_wq(3)
    C = W.structure.collinearity
    far = W.points[~C[W.x]]
    assert np.array_equal(far, W.derived_points)


def transvection(F, v):
    # x -> x + B(x, v) v with B the standard alternating form
    P = np.array([[0, 1, 0, 0], [F.neg(1), 0, 0, 0], [0, 0, 0, 1], [0, 0, F.neg(1), 0]])
    Pv = F.matvec(P, np.asarray(v))
    T = np.eye(4, dtype=np.int64)
    for r in range(4):
        for c in range(4):
            T[r, c] = F.add(int(T[r, c]), F.mul(int(v[r]), int(Pv[c])))
    return T.T


def test_stabilizer_order_by_orbit_stabilizer():
    # oracle: close PGSp(4,3) from transvections and a similitude, then divide by the orbit of x
    F = get_field(3)
    pts = enumerate_points(3, F)
    gens = [transvection(F, v) for v in pts] + [np.diag([1, 2, 1, 2])]
    G = generate(np.array(gens), F)
    assert G.order == 51840
    act = Action(G, pts)
    x = int(np.flatnonzero((pts == [1, 0, 0, 0]).all(axis=1))[0])
    orbit = np.unique(act.images(x))
    stab = G.order // len(orbit)
    fam = stabilizer_family(3)
    assert stab == len(fam) == 1296 == stabilizer_order_formula(3)
    assert np.all(G.index(normalize_proj(fam, F)) >= 0)


@pytest.mark.parametrize("q", [3, 4])
def test_family_matches_bruteforce_shape_search(q):
    F = field_of_order(q)
    grid = np.array(np.meshgrid(*[np.arange(q)] * 9, indexing="ij")).reshape(9, -1)
    a, b, c, e, f, g, h, i, j = grid
    out = []
    for d in range(1, q):
        M = np.zeros((grid.shape[1], 4, 4), dtype=F.dtype)
        M[:, 0] = np.stack([np.ones_like(a), a, b, c], axis=1)
        M[:, 1, 1] = d
        M[:, 2, 1:] = np.stack([e, f, g], axis=1)
        M[:, 3, 1:] = np.stack([h, i, j], axis=1)
        _, ok = similitude_factor(M, F)
        out.append(int(ok.sum()))
    assert sum(out) == len(stabilizer_family(q)) == stabilizer_order_formula(q)


def test_shape_checks():
    F = get_field(5)
    A = shape_matrix(F, a=1, d=1)
    assert has_shape(A)
    assert centralizer_condition(A, F)
    B = shape_matrix(F, d=4, f=2, j=2)
    assert not centralizer_condition(B, F)
    with pytest.raises(WrongShape):
        centralizer_condition(np.eye(4, dtype=int)[::-1], F)


@pytest.mark.parametrize(
    "q,G,Gpsl,H",
    [(3, 1296, 1296, 648), (4, 11520, 11520, 3840), (5, 60000, 30000, 15000)],
)
def test_index_report(q, G, Gpsl, H):
    r = index_report(q)
    assert (r.order_G, r.order_G_psl, r.order_H) == (G, Gpsl, H)


def test_symmetries_form_a_normal_subgroup():
    W = build_wq(3)
    S = symmetry_group(W)
    assert S.order == 3
    fam = stabilizer_family(3)
    G = generate(fam[np.random.default_rng(0).choice(len(fam), 6, replace=False)], W.F)
    G = generate(np.concatenate([G.gen_matrices(), S.gen_matrices()]), W.F)
    assert G.order <= 1296
    from singergq.matgroup import is_normal_in

    assert is_normal_in(S, G)
    assert check_singer_contains_S(S)


def test_family_guard():
    with pytest.raises(SpaceTooLarge):
        stabilizer_family(7)
