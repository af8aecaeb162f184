import numpy as np
import pytest

from singergq import hyperoval as hy
from singergq import lattice as la
from singergq.errors import MatchingInvalid, NoMatching, NotSinger, UnknownFormat
from singergq.singer import BLCandidate, enumerate_bl, heisenberg, lift_eta, scalar_candidate
from singergq.symplectic import build_wq


def local(q, coord=None, cand=None):
    W = build_wq(q)
    if cand is None:
        cand = scalar_candidate(q, 0) if coord is None else BLCandidate(q, 0, coord)
    S = lift_eta(cand).Sgroup
    return la.local_data(W.derived, S, 0, W.derived_points)


@pytest.fixture(scope="module")
def classical3():
    return local(3)


def test_classical_stabilizers(classical3):
    L = classical3
    assert len(L.lam) == 5 and L.t == 4
    assert [s.order for s in L.stabilizers] == [3] * 5
    assert all(k == ("abelian", (3,)) for k in L.keys)
    for St, orb in zip(L.stabilizers, L.orbit_sizes):
        assert St.order * orb == L.S.order


def test_translation_lift_q4():
    cand = next(c for c in enumerate_bl(4) if c.is_elementary_abelian())
    L = local(4, cand=cand)
    assert len(L.stabilizers) == 6
    assert all(k == ("abelian", (2, 2)) for k in L.keys)


def test_t2star_profile():
    H = hy.translation_hyperoval(4, 1)
    M = hy.t2star(H)
    L = la.local_data(M.structure, hy.translation_singer(4, 1), 0, M.points)
    assert sorted(s.order for s in L.stabilizers) == [1, 1, 1, 1, 4, 4]


def test_not_singer():
    W = build_wq(3)
    H = heisenberg(3).embedded
    with pytest.raises(NotSinger):
        la.local_data(W.derived, H, 0, W.derived_points)


def test_identity_matching_q5():
    L = local(5)
    m = la.check_local_iso(L, L)
    assert m.sigma == list(range(7)) and m.level == "invariant-factors"
    assert all(k == ("abelian", (5,)) for k in L.keys)


def test_matching_and_obstruction_q4():
    a = local(4, coord=(0, 0, 1, 0))
    b = local(4, coord=(0, 1, 0, 1))
    c = local(4, coord=(0, 0, 0, 0))
    m = la.check_local_iso(a, b)
    assert sorted(m.sigma) == list(range(6))
    with pytest.raises(NoMatching) as exc:
        la.check_local_iso(a, c)
    assert exc.value.witness["only_first"]


def test_gamma1_counts(classical3):
    m = la.check_local_iso(classical3, classical3)
    P = la.gamma1(classical3, classical3, m)
    assert len(P.generators) == 52
    assert P.commutator_relators == 20 == la.expected_commutator_count(classical3, classical3, m)
    assert P.table_relators == 2 * 26 * 26


def test_gamma1_rejects_bad_matching(classical3):
    with pytest.raises(MatchingInvalid):
        la.gamma1(classical3, classical3, la.Matching([0, 0, 1, 2, 3], "invariant-factors"))


def test_relators_hold_in_the_groups(classical3):
    # every table relator evaluates to the identity in S
    L = classical3
    m = la.check_local_iso(L, L)
    P = la.gamma1(L, L, m)
    S = L.S
    nt = [i for i in range(S.order) if i != S.identity]
    inv = S.inverses
    for w in P.relators[: P.table_relators // 2]:
        acc = S.identity
        for g, e in w:
            el = nt[g]
            acc = int(S.mul(np.array([acc]), np.array([el if e == 1 else inv[el]]))[0])
        assert acc == S.identity


def test_abelianization_is_finite(classical3):
    m = la.check_local_iso(classical3, classical3)
    ab = la.abelianization(la.gamma1(classical3, classical3, m))
    # H1(3)^ab = C3 x C3 on each side
    assert ab["finite"] and ab["torsion"] == [3, 3, 3, 3]


def test_homology_metadata():
    C3 = hy.translation_group(3)
    assert la.elementary_abelian_rank(C3) == (3, 3)
    assert la.homology_metadata(C3, C3)["H2_S"] == 27
    cand = next(c for c in enumerate_bl(8) if c.is_elementary_abelian())
    from singergq.matgroup import generate

    S8 = generate(cand.lift_generators(), cand.F)
    meta = la.homology_metadata(S8, S8)
    assert meta["H2_Gamma1"] == 2**72
    H5 = lift_eta(scalar_candidate(5, 0)).Sgroup
    assert la.homology_metadata(H5, H5)["H2_S"].startswith("unknown")


def test_export_round_trip(classical3):
    m = la.check_local_iso(classical3, classical3)
    P = la.gamma1(classical3, classical3, m)
    plain = la.export_presentation(P, "plain")
    assert plain.splitlines()[0] == "generators 52"
    assert plain.splitlines()[1] == f"relators {len(P.relators)}"
    assert la.parse_plain(plain).relators == P.relators
    gap = la.export_presentation(P, "gap")
    assert la.parse_gap(gap).relators == P.relators
    assert la.export_presentation(P, "magma").startswith("G<a0")
    # determinism
    P2 = la.gamma1(classical3, classical3, m)
    assert la.export_presentation(P2, "gap") == gap


def test_export_errors(classical3):
    P = la.Presentation(["a"], [], 0, 0)
    with pytest.raises(UnknownFormat):
        la.export_presentation(P, "gap")
    with pytest.raises(UnknownFormat):
        la.export_presentation(la.Presentation(["a"], [((0, 1),)], 1, 0), "latex")
    with pytest.raises(UnknownFormat):
        la.parse_plain("hello")


@pytest.mark.slow
def test_mixed_lifts_q9():
    # nonisomorphic lifts agreeing on the first commuting-vector entry
    a = local(9, coord=(1, 0, 0, 1))
    b = local(9, coord=(0, 1, 1, 2))
    assert a.S.derived_subgroup().order != b.S.derived_subgroup().order
    m = la.check_local_iso(a, b)
    P = la.gamma1(a, b, m)
    assert len(P.generators) == 2 * 728
    assert P.commutator_relators == la.expected_commutator_count(a, b, m) == 2 * 64
