"""Heisenberg groups H(l), the candidate sets B(l) and their lifts to Singer
groups of the Payne derivative of W(q).

Coordinates.  A point of the affine plane at x is (X, Y), realised as the
plane point (1, X, Y) acted on by the lower-right 3x3 block of a stabilizer
matrix.  For the base line l = (1:0) the group H(l) is

    (X, Y) -> (X + lam*Y + mu, Y + nu),   [[1, lam, mu], [0, 1, nu], [0, 0, 1]]

with A = {lam = 0} (translations), B = {nu = 0} and Z = {lam = nu = 0}.
Its elements lift to stabilizer matrices

    [[1, 0, -nu, mu - lam*nu], [0, 1, 0, 0], [0, mu, 1, lam], [0, nu, 0, 1]]

and the lift is unique up to the symmetries I + a E_01.  The other lines
l = (1:m) and (0:1) are reached by conjugating with an element of SL_2(q).

A candidate of B(l) is the graph of a GF(p)-linear map phi: nu -> lam, so
T_phi = {(phi(nu), mu, nu)} and its lift is S = <T_phi, symmetries>.
"""
from __future__ import annotations

import hashlib
import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from ..errors import (
    LiftNotSharplyTransitive,
    NotContainingCenter,
    TooManyCandidates,
    GroupTooLarge,
)
from ..gf import Field, field_of_order
from ..matgroup import Action, FinGroup, GroupInvariants, generate, invariants, is_sharply_transitive
from ..projgeom import Spread, intersection_dims_batch, rref
from ..symplectic import WqModel, derived_points, symmetry_group, symmetry_matrices

MAX_HEISENBERG_Q = 64
MAX_CANDIDATES = 2**20


# --------------------------------------------------------------------------
# lines through x and the conjugators


def line_labels(q: int) -> list[tuple[int, int]]:
    """Directions (y2:y3) of the q+1 lines of W(q) through x, base line first."""
    return [(1, m) for m in range(q)] + [(0, 1)]


def line_conjugator(F: Field, ell: int) -> np.ndarray:
    """2x2 matrix in SL_2(q) sending the direction (1:0) to line ``ell``."""
    q = F.q
    if not 0 <= ell <= q:
        raise ValueError(f"line index {ell} out of range 0..{q}")
    if ell < q:
        return np.array([[1, 0], [ell, 1]], dtype=F.dtype)
    return np.array([[0, F.neg(1)], [1, 0]], dtype=F.dtype)


def embed_block(F: Field, R2: np.ndarray) -> np.ndarray:
    """The stabilizer matrix with linear block R2 and no translation part."""
    M = np.eye(4, dtype=F.dtype)
    M[2:, 2:] = R2
    return M


def inverse_2x2(F: Field, R2) -> np.ndarray:
    (a, b), (c, d) = np.asarray(R2).tolist()
    det = F.sub(F.mul(a, d), F.mul(b, c))
    di = F.inv(det)
    return np.array(
        [[F.mul(d, di), F.mul(F.neg(b), di)], [F.mul(F.neg(c), di), F.mul(a, di)]],
        dtype=F.dtype,
    )


def heis3(F: Field, lam, mu, nu) -> np.ndarray:
    """Stack of 3x3 unitriangular matrices [[1,lam,mu],[0,1,nu],[0,0,1]]."""
    lam, mu, nu = np.broadcast_arrays(*(np.asarray(v, dtype=F.dtype) for v in (lam, mu, nu)))
    M = np.zeros(lam.shape + (3, 3), dtype=F.dtype)
    M[..., 0, 0] = M[..., 1, 1] = M[..., 2, 2] = 1
    M[..., 0, 1], M[..., 0, 2], M[..., 1, 2] = lam, mu, nu
    return M


def lift4(F: Field, lam, mu, nu, ell: int = 0) -> np.ndarray:
    """Stabilizer matrices inducing (lam, mu, nu) of H(ell) on the affine plane."""
    lam, mu, nu = np.broadcast_arrays(*(np.asarray(v, dtype=F.dtype) for v in (lam, mu, nu)))
    M = np.zeros(lam.shape + (4, 4), dtype=F.dtype)
    M[..., 0, 0] = M[..., 1, 1] = M[..., 2, 2] = M[..., 3, 3] = 1
    M[..., 0, 2] = F.vneg(nu)
    M[..., 0, 3] = F.vsub(mu, F.vmul(lam, nu))
    M[..., 2, 1] = mu
    M[..., 2, 3] = lam
    M[..., 3, 1] = nu
    if ell:
        R2 = line_conjugator(F, ell)
        R = embed_block(F, R2)
        Ri = embed_block(F, inverse_2x2(F, R2))
        M = F.matmul(F.matmul(R, M), Ri)
    return M


def basis_elements(F: Field) -> list[int]:
    """Encodings of x^0, ..., x^(h-1): a GF(p)-basis of the field."""
    return [F.p**k for k in range(F.h)]


# --------------------------------------------------------------------------
# the Heisenberg model


@dataclass
class HeisenbergModel:
    F: Field
    ell: int
    H: FinGroup
    A: FinGroup
    B: FinGroup
    Z: FinGroup

    @property
    def q(self) -> int:
        return self.F.q

    @cached_property
    def embedded(self) -> FinGroup:
        """The preimage of H(ell) in the stabilizer of x (order q^4)."""
        F = self.F
        basis = basis_elements(F)
        z = np.zeros(F.h, dtype=F.dtype)
        b = np.array(basis, dtype=F.dtype)
        gens = np.concatenate(
            [
                lift4(F, b, z, z, self.ell),
                lift4(F, z, b, z, self.ell),
                lift4(F, z, z, b, self.ell),
                symmetry_group(F).gen_matrices(),
            ]
        )
        return generate(gens, F, name=f"H~({self.ell})")


def heisenberg(q: int, ell: int = 0) -> HeisenbergModel:
    """H(ell) as 3x3 unitriangular matrices, with A, B and Z = A meet B."""
    if q > MAX_HEISENBERG_Q:
        raise GroupTooLarge(f"H({q}) exceeds the bound q <= {MAX_HEISENBERG_Q}")
    F = field_of_order(q)
    b = np.array(basis_elements(F), dtype=F.dtype)
    z = np.zeros_like(b)
    lam_g, mu_g, nu_g = heis3(F, b, z, z), heis3(F, z, b, z), heis3(F, z, z, b)
    H = generate(np.concatenate([lam_g, mu_g, nu_g]), F, name="H")
    A = generate(np.concatenate([mu_g, nu_g]), F, name="A")
    B = generate(np.concatenate([lam_g, mu_g]), F, name="B")
    Z = generate(mu_g, F, name="Z")
    model = HeisenbergModel(F, ell, H, A, B, Z)
    _check_heisenberg(model)
    return model


def _check_heisenberg(M: HeisenbergModel) -> None:
    q = M.q
    assert M.H.order == q**3 and M.A.order == q * q and M.B.order == q * q and M.Z.order == q
    assert len(M.H.center_indices) == q
    assert M.H.contains_group(M.A) and M.H.contains_group(M.B)


# --------------------------------------------------------------------------
# candidates


@dataclass(frozen=True)
class BLCandidate:
    """Graph of the GF(p)-linear map phi: nu -> lam given by ``matrix_coord``.

    Column k of ``matrix_coord`` holds the digits of phi(x^k).
    """

    q: int
    ell: int
    matrix_coord: tuple

    @cached_property
    def F(self) -> Field:
        return field_of_order(self.q)

    @cached_property
    def phi_table(self) -> np.ndarray:
        """phi(nu) for every field element nu."""
        F = self.F
        p, h = F.p, F.h
        Mx = np.array(self.matrix_coord, dtype=np.int64).reshape(h, h)
        digits = np.array([F.decode(v) for v in range(F.q)], dtype=np.int64)
        img = (digits @ Mx.T) % p
        return (img * p ** np.arange(h)).sum(axis=1).astype(F.dtype)

    def phi(self, nu: int) -> int:
        return int(self.phi_table[nu])

    @property
    def index(self) -> int:
        """Position in the lexicographic enumeration."""
        p = self.F.p
        return int(sum(v * p**k for k, v in enumerate(reversed(self.matrix_coord))))

    def subspace_basis(self) -> np.ndarray:
        """GF(p)-basis of U in H/Z, as digit vectors (nu digits, lam digits)."""
        F = self.F
        rows = []
        for nu in basis_elements(F):
            rows.append(list(F.decode(nu)) + list(F.decode(self.phi(nu))))
        return np.array(rows, dtype=np.int64)

    def T_generators(self) -> np.ndarray:
        F = self.F
        b = np.array(basis_elements(F), dtype=F.dtype)
        z = np.zeros_like(b)
        phib = self.phi_table[b]
        return np.concatenate([heis3(F, z, b, z), heis3(F, phib, z, b)])

    def T(self) -> FinGroup:
        """Preimage of U in H(ell), order q^2."""
        return generate(self.T_generators(), self.F, name="T")

    def lift_generators(self) -> np.ndarray:
        F = self.F
        b = np.array(basis_elements(F), dtype=F.dtype)
        z = np.zeros_like(b)
        phib = self.phi_table[b]
        return np.concatenate(
            [
                lift4(F, z, b, z, self.ell),
                lift4(F, phib, z, b, self.ell),
                symmetry_group(F).gen_matrices(),
            ]
        )

    def is_abelian(self) -> bool:
        """T_phi is abelian iff phi(u) v = phi(v) u for all u, v."""
        F = self.F
        b = basis_elements(F)
        return all(F.mul(self.phi(u), v) == F.mul(self.phi(v), u) for u in b for v in b)

    def is_elementary_abelian(self) -> bool:
        """Abelian and of exponent p; in characteristic 2 this needs phi(nu) nu = 0."""
        if not self.is_abelian():
            return False
        F = self.F
        if F.p != 2:
            return True
        nu = np.arange(F.q)
        return not np.any(F.vmul(self.phi_table[nu], nu.astype(F.dtype)))

    def to_json(self) -> dict:
        return {"ell": self.ell, "matrix_coord": [list(r) for r in np.array(self.matrix_coord).reshape(self.F.h, self.F.h)]}


def enumerate_bl(q: int, ell: int = 0) -> list[BLCandidate]:
    """All p^(h^2) candidates, lexicographic in the h x h matrix over GF(p)."""
    F = field_of_order(q)
    p, h = F.p, F.h
    if p ** (h * h) > MAX_CANDIDATES:
        raise TooManyCandidates(f"{p ** (h * h)} candidates exceed {MAX_CANDIDATES}")
    return [BLCandidate(q, ell, coords) for coords in itertools.product(range(p), repeat=h * h)]


def scalar_candidate(q: int, c: int, ell: int = 0) -> BLCandidate:
    """The candidate phi = multiplication by c."""
    F = field_of_order(q)
    h = F.h
    cols = [F.decode(F.mul(c, b)) for b in basis_elements(F)]
    mat = [cols[k][r] for r in range(h) for k in range(h)]
    return BLCandidate(q, ell, tuple(mat))


# --------------------------------------------------------------------------
# lifts


def commuting_vector_dims(cand: BLCandidate) -> np.ndarray:
    sp = _spread(cand.F.p, cand.F.h)
    return sp.intersection_dims(cand.subspace_basis())


@lru_cache(maxsize=None)
def _spread(p: int, n: int) -> Spread:
    return Spread(p, n)


@dataclass
class CommutingVector:
    dims: tuple
    multiset: tuple = field(init=False)

    def __post_init__(self):
        self.dims = tuple(int(d) for d in self.dims)
        self.multiset = tuple(sorted((d for d in self.dims if d), reverse=True))

    def to_json(self) -> dict:
        return {"dims": list(self.dims), "multiset": list(self.multiset)}


def commuting_vector(T: FinGroup, spread: Spread | None = None) -> CommutingVector:
    """Intersection dimensions of the image of T in H/Z with the spread elements.

    T is a subgroup of the 3x3 Heisenberg group containing Z, of order q^2.
    """
    F = T.F
    q = F.q
    Zmats = heis3(F, 0, np.arange(q), 0)
    if not np.all(T.contains(Zmats)):
        raise NotContainingCenter("T does not contain the centre")
    if T.order != q * q:
        raise NotContainingCenter(f"T has order {T.order}, expected {q * q}")
    nu = T.elements[:, 1, 2]
    lam = T.elements[:, 0, 1]
    vecs = [list(F.decode(int(a))) + list(F.decode(int(b))) for a, b in zip(nu, lam)]
    basis = rref(vecs, field_of_order(F.p))
    if spread is None:
        spread = _spread(F.p, F.h)
    return CommutingVector(spread.intersection_dims(np.array(basis)))


@dataclass
class SingerGroupRecord:
    ell: int
    candidate: BLCandidate
    Sgroup: FinGroup
    commuting_vector: CommutingVector
    abelian_quotient: bool
    elementary_quotient: bool
    sharply_transitive: bool
    certificate: object = field(repr=False, default=None)
    _inv: GroupInvariants | None = field(repr=False, default=None)

    @cached_property
    def Tgroup(self) -> FinGroup:
        return self.candidate.T()

    @property
    def invariants(self) -> GroupInvariants:
        if self._inv is None:
            self._inv = invariants(self.Sgroup)
        return self._inv

    @property
    def key(self) -> str:
        return group_key(self.Sgroup)

    def to_json(self) -> dict:
        inv = self.invariants
        return {
            "ell": self.ell,
            "matrix_coord": self.candidate.to_json()["matrix_coord"],
            "order": inv.order,
            "abelian_quotient": self.abelian_quotient,
            "center_order": inv.center_order,
            "derived_order": inv.derived_order,
            "exponent": inv.exponent,
            "class": inv.nilpotency_class,
            "commuting_dims": list(self.commuting_vector.dims),
            "sharply_transitive": self.sharply_transitive,
        }


def group_key(G: FinGroup) -> str:
    """Digest of the sorted element set (equal iff same element set)."""
    flat = G.elements.reshape(G.order, -1).astype(np.uint16)
    rows = flat[np.lexsort(flat.T[::-1])]
    return hashlib.sha256(rows.tobytes()).hexdigest()


@lru_cache(maxsize=None)
def _derived_points(q: int) -> np.ndarray:
    return derived_points(field_of_order(q))


def lift_eta(cand: BLCandidate, W: WqModel | None = None, verify: bool = True) -> SingerGroupRecord:
    """S = <T, symmetries> as stabilizer matrices, with a regularity certificate
    on the q^3 points not collinear with x."""
    F = cand.F
    q = F.q
    S = generate(cand.lift_generators(), F, name="S")
    pts = W.derived_points if W is not None else _derived_points(q)
    ok, cert = True, None
    if verify:
        if S.order != q**3:
            raise LiftNotSharplyTransitive(f"lift has order {S.order}, expected {q**3}", witness=cand.matrix_coord)
        ok, cert = is_sharply_transitive(Action(S, pts))
        if not ok:
            raise LiftNotSharplyTransitive("lift is not sharply transitive", witness=cand.matrix_coord)
    return SingerGroupRecord(
        ell=cand.ell,
        candidate=cand,
        Sgroup=S,
        commuting_vector=CommutingVector(commuting_vector_dims(cand)),
        abelian_quotient=cand.is_abelian(),
        elementary_quotient=cand.is_elementary_abelian(),
        sharply_transitive=ok,
        certificate=cert,
    )


def lift_all(q: int, ell: int = 0, sample: int | None = None, seed: int = 0, verify: bool = True) -> list[SingerGroupRecord]:
    cands = enumerate_bl(q, ell)
    if sample is not None and sample < len(cands):
        rng = random.Random(seed)
        cands = sorted(rng.sample(cands, sample), key=lambda c: c.index)
    return [lift_eta(c, verify=verify) for c in cands]


# --------------------------------------------------------------------------
# counts


@dataclass
class AbelianClassification:
    q: int
    ell: int
    abelian: list
    nonabelian: list
    elementary: list

    @property
    def counts(self) -> dict:
        return {
            "abelian": len(self.abelian),
            "nonabelian": len(self.nonabelian),
            "elementary_abelian": len(self.elementary),
            "total": len(self.abelian) + len(self.nonabelian),
        }


def classify_abelian_quotients(q: int, ell: int = 0) -> AbelianClassification:
    """Split B(ell) by whether T is abelian (and elementary abelian)."""
    ab, nab, el = [], [], []
    for c in enumerate_bl(q, ell):
        (ab if c.is_abelian() else nab).append(c.index)
        if c.is_elementary_abelian():
            el.append(c.index)
    return AbelianClassification(q, ell, ab, nab, el)


def cross_line_overlap(q: int, ell: int, ell2: int) -> int:
    """Number of lifts from ``ell`` whose element set equals a lift from ``ell2``."""
    k1 = {lift_eta(c, verify=False).key for c in enumerate_bl(q, ell)}
    k2 = k1 if ell == ell2 else {lift_eta(c, verify=False).key for c in enumerate_bl(q, ell2)}
    return len(k1 & k2)


def total_count(q: int) -> int:
    """(q+1)(p^(h^2) - 1) - ((q+1)(q-1))^(p mod 2)."""
    F = field_of_order(q)
    p, h = F.p, F.h
    return (q + 1) * (p ** (h * h) - 1) - ((q + 1) * (q - 1)) ** (p % 2)


@dataclass
class TotalCountReport:
    q: int
    formula: int
    nonabelian_distinct: int
    non_elementary_distinct: int
    all_distinct: int
    translation_shared: bool


def total_count_enumerated(q: int) -> TotalCountReport:
    """Distinct lifted groups over all q+1 lines, split by the quotient type."""
    groups = {}
    for ell in range(q + 1):
        for c in enumerate_bl(q, ell):
            rec = lift_eta(c, verify=False)
            groups.setdefault(rec.key, []).append(rec)
    nonab = sum(1 for recs in groups.values() if not recs[0].abelian_quotient)
    nonel = sum(1 for recs in groups.values() if not recs[0].elementary_quotient)
    shared = [k for k, recs in groups.items() if len({r.ell for r in recs}) > 1]
    trans = lift_eta(BLCandidate(q, 0, (0,) * field_of_order(q).h ** 2), verify=False).key
    return TotalCountReport(q, total_count(q), nonab, nonel, len(groups), shared == [trans])


def fingerprint_class(inv: GroupInvariants, p: int) -> str:
    if inv.is_abelian and inv.exponent == p:
        return "elementary_abelian"
    if not inv.is_abelian and inv.exponent == p and inv.center_order == p and inv.derived_order == p:
        return "heisenberg"
    kind = "abelian" if inv.is_abelian else "nonabelian"
    return f"{kind}(exp={inv.exponent},center={inv.center_order},derived={inv.derived_order})"


@dataclass
class PrimeCensus:
    p: int
    groups: int
    census: dict
    expected: dict
    matches: bool
    per_candidate: list


def prime_case_census(p: int, ell: int = 0) -> PrimeCensus:
    """Lift every candidate for one line over GF(p) and classify by fingerprint."""
    if p not in (3, 5, 7):
        raise ValueError("prime case census is defined for p in {3, 5, 7}")
    recs = lift_all(p, ell)
    classes = [fingerprint_class(r.invariants, p) for r in recs]
    census = dict(sorted(Counter(classes).items()))
    expected = {"elementary_abelian": 1, "heisenberg": p - 1}
    return PrimeCensus(p, len(recs), census, expected, census == expected, classes)
