import itertools

import numpy as np
import pytest
from sympy.combinatorics import Permutation, PermutationGroup

from singergq.errors import GroupTooLarge, NotInvariant, NotNormal
from singergq.gf import get_field
from singergq.matgroup import (
    Action,
    FinGroup,
    abelian_invariant_factors,
    generate,
    invariants,
    is_normal_in,
    is_sharply_transitive,
    nilpotency_class,
    normalize_proj,
    psl_pgl_order,
    quotient_action,
)
from singergq.projgeom import enumerate_points
from singergq.singer.heisenberg import heisenberg


def pgl2(q):
    F = get_field(q)
    g = F.primitive_element
    gens = np.array([[[1, 1], [0, 1]], [[g, 0], [0, 1]], [[0, 1], [1, 0]]])
    return generate(gens, F), F


def sympy_group(G, pts):
    perms = Action(G, pts).perms
    return PermutationGroup([Permutation(list(map(int, perms[g]))) for g in G.gens])


@pytest.mark.parametrize("q", [3, 5, 7])
def test_pgl2_against_permutation_oracle(q):
    G, F = pgl2(q)
    pts = enumerate_points(1, F)
    P = sympy_group(G, pts)
    assert G.order == P.order() == psl_pgl_order(2, q)[0]
    assert len(G.derived_subgroup().elements) == P.derived_subgroup().order()
    assert G.center().order == P.center().order() == 1
    assert G.is_abelian == P.is_abelian


def test_psl32_order_and_exponent():
    F = get_field(2)
    gens = np.array([[[1, 1, 0], [0, 1, 0], [0, 0, 1]], [[0, 0, 1], [1, 0, 0], [0, 1, 0]]])
    G = generate(gens, F)
    assert G.order == 168 == psl_pgl_order(3, 2)[1]
    # element orders of PSL(3,2): 1, 2, 3, 4, 7
    assert sorted(set(G.element_orders.tolist())) == [1, 2, 3, 4, 7]
    assert G.exponent == 84


def test_projective_normal_form():
    F = get_field(5)
    M = np.array([[0, 2], [3, 4]])
    N = normalize_proj(M, F)
    assert N[0, 1] == 1
    assert np.array_equal(normalize_proj(F.vmul(M, np.full_like(M, 3)), F), N)
    assert normalize_proj(np.zeros((0, 2, 2)), F).shape == (0, 2, 2)


def test_group_guard():
    G, F = pgl2(7)
    with pytest.raises(GroupTooLarge):
        generate(G.gen_matrices(), F, max_order=100)


def test_guard_env(monkeypatch):
    monkeypatch.setenv("SINGER_GQ_MAX_ORDER", "50")
    F = get_field(5)
    with pytest.raises(GroupTooLarge):
        generate(np.array([[[1, 1], [0, 1]], [[2, 0], [0, 1]], [[0, 1], [1, 0]]]), F)


# frozen from the closure computation; the class-2 structure also follows by hand
HEIS = {
    3: dict(exponent=3, center=3, derived=3, maxab=4, maxel=4),
    4: dict(exponent=4, center=4, derived=4, maxab=5, maxel=2),
    5: dict(exponent=5, center=5, derived=5, maxab=6, maxel=6),
    8: dict(exponent=4, center=8, derived=8, maxab=9, maxel=2),
}


@pytest.mark.parametrize("q", sorted(HEIS))
def test_heisenberg_invariants(q):
    H = heisenberg(q).H
    want = HEIS[q]
    assert H.order == q**3
    assert H.exponent == want["exponent"]
    assert H.center().order == want["center"]
    assert H.derived_subgroup().order == want["derived"]
    assert nilpotency_class(H) == 2
    assert len(H.maximal_abelian_subgroups()) == want["maxab"]
    assert len(H.maximal_abelian_subgroups(elementary=True)) == want["maxel"]


def test_maximal_abelian_bruteforce_h3():
    # oracle: maximal elements among all subgroups generated by two elements
    H = heisenberg(3).H
    subs = set()
    for a, b in itertools.combinations(range(H.order), 2):
        if H.commute_mask(np.array([a]), np.array([b]))[0, 0]:
            S = generate(H.elements[[a, b]], H.F)
            subs.add(frozenset(H.index(S.elements).tolist()))
    maximal = [s for s in subs if not any(s < t for t in subs)]
    found = {frozenset(H.indices_of(S).tolist()) for S in H.maximal_abelian_subgroups()}
    assert found == set(maximal)


def test_abelian_invariant_factors():
    F = get_field(2, 2)
    diag = np.array([[[1, 0, 0], [1, 1, 0], [0, 0, 1]], [[1, 0, 0], [2, 1, 0], [0, 0, 1]]])
    G = generate(diag, F)
    assert abelian_invariant_factors(G) == [2, 2]
    inv = invariants(G)
    assert inv.is_abelian and inv.order == 4


def test_normality():
    H = heisenberg(3).H
    Z = H.center()
    assert is_normal_in(Z, H)
    G, F = pgl2(3)
    sub = generate(np.array([[[0, 1], [1, 0]]]), F)
    assert not is_normal_in(sub, G)


def test_sharply_transitive_action():
    # the Singer cycle of PG(2,2) acts regularly on the 7 points
    F = get_field(2)
    C = np.array([[0, 0, 1], [1, 0, 1], [0, 1, 0]])
    G = generate(C[None], F)
    pts = enumerate_points(2, F)
    ok, cert = is_sharply_transitive(Action(G, pts))
    assert ok and cert.order == 7
    Gp, _ = pgl2(3)
    ok, cert = is_sharply_transitive(Action(Gp, enumerate_points(1, get_field(3))))
    assert not ok and cert.reason


def test_action_rejects_non_invariant_set():
    G, F = pgl2(3)
    pts = enumerate_points(1, F)[:2]
    with pytest.raises(NotInvariant):
        Action(G, pts)


def test_quotient_action():
    # a non-normal subgroup is rejected; H1(3) modulo its center acts on a fixed point
    H = heisenberg(3).H
    G, F = pgl2(3)
    with pytest.raises(NotNormal):
        quotient_action(G, generate(np.array([[[0, 1], [1, 0]]]), F), enumerate_points(1, F))
    Z = H.center()
    pts = np.array([[1, 0, 0]])
    Q = quotient_action(H, Z, pts)
    assert Q.order == 9
