import itertools

import networkx as nx
import numpy as np
import pytest

from singergq import hyperoval as hy
from singergq.errors import BadParameters, DViolation, GammaNotStabilizing, GcdViolation, NotHyperoval
from singergq.gf import field_of_order
from singergq.matgroup import Action, is_sharply_transitive


def cross(F, u, v):
    return [
        F.sub(F.mul(u[1], v[2]), F.mul(u[2], v[1])),
        F.sub(F.mul(u[2], v[0]), F.mul(u[0], v[2])),
        F.sub(F.mul(u[0], v[1]), F.mul(u[1], v[0])),
    ]


def no_three_collinear(H):
    # oracle: each secant line meets the set in exactly two points
    F = H.F
    pts = [list(map(int, p)) for p in H.points]
    for u, v in itertools.combinations(pts, 2):
        L = cross(F, u, v)
        on = sum(1 for w in pts if F.add(F.add(F.mul(L[0], w[0]), F.mul(L[1], w[1])), F.mul(L[2], w[2])) == 0)
        if on != 2:
            return False
    return True


@pytest.mark.parametrize("q,k,kind", [(2, 1, "regular"), (4, 1, "regular"), (8, 1, "regular"), (8, 2, "regular"), (32, 2, "translation(2)")])
def test_translation_hyperovals(q, k, kind):
    H = hy.translation_hyperoval(q, k)
    assert len(H) == q + 2 and H.kind == kind
    assert no_three_collinear(H)


def test_payne_hyperoval():
    H = hy.payne_hyperoval(32)
    assert hy.payne_exponents(32) == (26, 16, 6)
    assert len(H) == 34 and no_three_collinear(H)


def test_parameter_errors():
    with pytest.raises(GcdViolation):
        hy.translation_hyperoval(16, 2)
    with pytest.raises(BadParameters):
        hy.payne_hyperoval(8)
    with pytest.raises(BadParameters):
        hy.translation_hyperoval(9)


def test_collinear_triple_rejected():
    F = field_of_order(4)
    pts = np.array([[1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1], [1, 2, 3], [1, 3, 2]])
    with pytest.raises(NotHyperoval):
        hy.check_hyperoval(hy.Hyperoval(F, pts, "bad"))


def test_regular_hyperoval_is_conic_plus_nucleus():
    H = hy.translation_hyperoval(8, 1)
    F = H.F
    # the conic Y^2 = XZ with nucleus (0,1,0)
    for X, Y, Z in H.points.tolist():
        if (X, Y, Z) != (0, 1, 0):
            assert F.mul(Y, Y) == F.mul(X, Z)


@pytest.mark.parametrize("q", [2, 4])
def test_t2star_graph_oracle(q):
    M = hy.t2star(hy.translation_hyperoval(q, 1))
    S = M.structure
    assert (S.npoints, S.nlines) == (q**3, (q + 2) * q * q)
    G = nx.Graph()
    G.add_edges_from((("p", x), ("l", j)) for x, j in S.incidence_pairs())
    assert nx.girth(G) == 8 and nx.diameter(G) == 4
    assert (M.certificate.s, M.certificate.t) == (q - 1, q + 1)


@pytest.mark.parametrize("q", [4, 8])
def test_translation_singer(q):
    H = hy.translation_hyperoval(q, 1)
    G = hy.translation_singer(q, 1)
    r = hy.singer_report(G, H)
    assert (r.order, r.exponent, r.center_order) == (q**3, 4, q**2)
    assert r.sharply_transitive and r.stabilizes_hyperoval
    # the centre is {a = 0}
    Z = G.elements[G.center_indices]
    assert np.all(Z[:, 1, 0] == 0)


def test_translation_singer_preserves_t2star_lines():
    H = hy.translation_hyperoval(4, 1)
    M = hy.t2star(H)
    G = hy.translation_singer(4, 1)
    perms = Action(G, M.points).perms
    lines = {tuple(sorted(map(int, L))) for L in M.structure.lines}
    for g in G.gens:
        for L in M.structure.lines:
            assert tuple(sorted(perms[g][L].tolist())) in lines


def test_two_distinct_regular_groups():
    q = 4
    S = hy.translation_singer(q, 1)
    T = hy.translation_group(q)
    pts = hy.affine_points(T.F)
    assert T.order == S.order == q**3 and T.is_abelian and not S.is_abelian
    assert is_sharply_transitive(Action(T, pts))[0]
    assert is_sharply_transitive(Action(S, pts))[0]


def test_elation_singer_regular():
    q = 4
    S, r = hy.elation_singer(hy.translation_hyperoval(q, 1))
    assert r.order == q**3 and r.exponent == 4
    assert r.translation_intersection == q**3 // 2
    assert r.sharply_transitive and r.extra["g_squared_is_h110"]


def test_elation_singer_payne():
    S, r = hy.elation_singer(hy.payne_hyperoval(32))
    assert (r.order, r.exponent, r.translation_intersection) == (2**15, 4, 2**14)
    assert r.sharply_transitive and r.stabilizes_hyperoval


def test_elation_errors():
    # the X/Y swap maps (1,t,t^2) to (1,1/t,t), on the conic only when t^3 = 1
    H8 = hy.translation_hyperoval(8, 1)
    with pytest.raises(GammaNotStabilizing):
        hy.elation_singer(H8)
    H4 = hy.translation_hyperoval(4, 1)
    D = hy.parity_subgroup(H4.F).copy()
    D[0] = [1, 0, 0]
    with pytest.raises(DViolation):
        hy.elation_singer(H4, D_basis=D)


def test_parity_subgroup():
    F = field_of_order(8)
    D = hy.parity_subgroup(F)
    assert len(D) == 3 * F.h - 1
    assert all(hy.in_parity_subgroup(F, v) for v in D)
    assert not hy.in_parity_subgroup(F, (1, 0, 0)) and hy.in_parity_subgroup(F, (1, 1, 0))


@pytest.mark.parametrize("q,full", [(4, 360), (8, 504)])
def test_linear_stabilizer(q, full):
    L = hy.hyperoval_linear_stabilizer(hy.translation_hyperoval(q, 1))
    assert L.full.order == full
    assert L.two_part.order == q
    assert L.matches_family and L.axis_subgroup_order == q


def test_linear_stabilizer_family_only_for_large_q():
    L = hy.hyperoval_linear_stabilizer(hy.translation_hyperoval(32, 2), k=2)
    assert L.full is None and L.two_part.order == 32
