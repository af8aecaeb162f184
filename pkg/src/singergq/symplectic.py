"""The symplectic quadrangle W(q), its symmetries about x = (1,0,0,0) and
the linear stabilizer of x.

Matrices act on column vectors.  The stabilizer of x in PGL_4(q) consists
of the matrices

    [[1, a, b, c],
     [0, d, 0, 0],
     [0, e, f, g],
     [0, h, i, j]]

with A^T P A = k P; this forces k = d = fj - ig, d b = ei - hf and
d c = ej - hg, so a, e, h and the invertible block (f g; i j) are free.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ClaimMismatch, SpaceTooLarge, WrongShape
from .gf import Field, field_of_order
from .incidence import IncidenceStructure, payne_derive, verify_gq
from .matgroup import FinGroup, generate, normalize_proj
from .projgeom import (
    SymplecticForm,
    enumerate_points,
    normalize,
    rank_normalized,
    subspace_bases,
    symplectic_pairs,
)

MAX_BUILD_Q = 32
MAX_FAMILY_Q = 5


@dataclass
class WqModel:
    F: Field
    points: np.ndarray
    structure: IncidenceStructure
    form: SymplecticForm
    x: int

    @property
    def q(self) -> int:
        return self.F.q

    @cached_property
    def derived(self) -> IncidenceStructure:
        """The Payne derivative at x (verified)."""
        if self.structure.certificate is None:
            verify_gq(self.structure)
        P = payne_derive(self.structure, self.x)
        verify_gq(P)
        return P

    @cached_property
    def derived_points(self) -> np.ndarray:
        """Coordinates of the q^3 points not collinear with x, in canonical order."""
        return derived_points(self.F)


def isotropic_lines(F: Field) -> np.ndarray:
    """Echelon bases (M, 2, 4) of the totally isotropic lines."""
    bases = subspace_bases(F.q, 4, 2, limit=10**7).astype(F.dtype)
    form = symplectic_pairs(F)
    vals = form.values(bases[:, 0], bases[:, 1])
    return bases[vals == 0]


def build_wq(q: int, verify: bool | None = None) -> WqModel:
    """W(q) with points of PG(3,q) and the totally isotropic lines."""
    if q > MAX_BUILD_Q:
        raise SpaceTooLarge(f"W({q}) exceeds the construction bound q <= {MAX_BUILD_Q}")
    F = field_of_order(q)
    pts = enumerate_points(3, F)
    lines = isotropic_lines(F)
    # the q+1 points of each line: r0 and r1 + a r0
    a = np.arange(q, dtype=F.dtype)
    r0, r1 = lines[:, 0], lines[:, 1]
    combos = F.vadd(r1[:, None, :], F.vmul(a[None, :, None], r0[:, None, :]))
    allp = np.concatenate([r0[:, None, :], combos], axis=1)
    ranks = rank_normalized(normalize(allp.reshape(-1, 4), F), q).reshape(len(lines), q + 1)
    S = IncidenceStructure(
        len(pts),
        list(ranks),
        point_labels=[tuple(int(c) for c in p) for p in pts],
        line_labels=[tuple(tuple(int(c) for c in r) for r in L) for L in lines],
    )
    x = int(rank_normalized(np.array([1, 0, 0, 0]), q))
    if verify is None:
        verify = q <= 9
    if verify:
        verify_gq(S)
    return WqModel(F, pts, S, symplectic_pairs(F), x)


def derived_points(F: Field) -> np.ndarray:
    pts = enumerate_points(3, F)
    return pts[pts[:, 1] != 0]


# --------------------------------------------------------------------------
# matrices


def shape_matrix(F: Field, a=0, b=0, c=0, d=1, e=0, f=1, g=0, h=0, i=0, j=1) -> np.ndarray:
    return np.array(
        [[1, a, b, c], [0, d, 0, 0], [0, e, f, g], [0, h, i, j]],
        dtype=F.dtype,
    )


def shape_from_params(F: Field, a, e, h, f, g, i, j) -> np.ndarray:
    """Stack of stabilizer matrices from the free parameters (arrays)."""
    a, e, h, f, g, i, j = (np.asarray(v, dtype=F.dtype) for v in (a, e, h, f, g, i, j))
    d = F.vsub(F.vmul(f, j), F.vmul(i, g))
    if np.any(d == 0):
        raise WrongShape("fj - ig must be nonzero")
    dinv = F.vinv(d)
    b = F.vmul(dinv, F.vsub(F.vmul(e, i), F.vmul(h, f)))
    c = F.vmul(dinv, F.vsub(F.vmul(e, j), F.vmul(h, g)))
    M = np.zeros(d.shape + (4, 4), dtype=F.dtype)
    M[..., 0, 0] = 1
    M[..., 0, 1], M[..., 0, 2], M[..., 0, 3] = a, b, c
    M[..., 1, 1] = d
    M[..., 2, 1], M[..., 2, 2], M[..., 2, 3] = e, f, g
    M[..., 3, 1], M[..., 3, 2], M[..., 3, 3] = h, i, j
    return M


def similitude_factor(M, F: Field):
    """Pair (k, ok): the candidate factor k and whether M^T P M = k P with k != 0."""
    P = np.array(symplectic_pairs(F).gram, dtype=F.dtype)
    lhs = F.matmul(F.matmul(np.swapaxes(np.asarray(M, dtype=F.dtype), -1, -2), P), M)
    k = lhs[..., 0, 1]
    ok = np.all(lhs == F.vmul(k[..., None, None], P[None] if lhs.ndim == 3 else P), axis=(-1, -2)) & (k != 0)
    return k, ok


def has_shape(M) -> bool:
    M = np.asarray(M)
    return (
        M.shape == (4, 4)
        and M[0, 0] == 1
        and not M[1:, 0].any()
        and M[1, 2] == 0
        and M[1, 3] == 0
        and M[1, 1] != 0
    )


def stabilizer_family(q: int, predicate=None, max_q: int = MAX_FAMILY_Q) -> np.ndarray:
    """All matrices of the stabilizer shape with A^T P A = k P, k != 0.

    Iterates the q^7 tuples (a, e, h, f, g, i, j); b and c are solved for.
    ``predicate`` receives the stack and returns a boolean mask.
    """
    if q > max_q:
        raise SpaceTooLarge(f"exhaustive family iteration is bounded to q <= {max_q}")
    F = field_of_order(q)
    grid = np.array(np.meshgrid(*[np.arange(q)] * 4, indexing="ij")).reshape(4, -1)
    f, g, i, j = grid
    d = F.vsub(F.vmul(f, j), F.vmul(i, g))
    keep = d != 0
    f, g, i, j = f[keep], g[keep], i[keep], j[keep]
    aeh = np.array(np.meshgrid(*[np.arange(q)] * 3, indexing="ij")).reshape(3, -1)
    na, nb = aeh.shape[1], len(f)
    a, e, h = (np.repeat(v, nb) for v in aeh)
    f, g, i, j = (np.tile(v, na) for v in (f, g, i, j))
    M = shape_from_params(F, a, e, h, f, g, i, j)
    k, ok = similitude_factor(M, F)
    if not ok.all():
        raise ClaimMismatch("a family member is not a similitude")
    if not np.array_equal(k, M[:, 1, 1]):
        raise ClaimMismatch("similitude factor differs from d")
    if predicate is not None:
        M = M[predicate(M)]
    return M


def symmetry_matrices(F: Field) -> np.ndarray:
    M = np.tile(np.eye(4, dtype=F.dtype), (F.q, 1, 1))
    M[:, 0, 1] = np.arange(F.q)
    return M


def symmetry_group(W_or_F) -> FinGroup:
    """The q symmetries about x, I + a E_{01}."""
    F = W_or_F.F if isinstance(W_or_F, WqModel) else W_or_F
    gens = symmetry_matrices(F)[[F.p**k for k in range(F.h)]]
    return generate(gens, F, name="symmetries")


def centralizer_condition(A, F: Field) -> bool:
    """Whether A commutes with every symmetry; checked to agree with d = 1."""
    A = np.asarray(A, dtype=F.dtype)
    if not has_shape(A):
        raise WrongShape("matrix is not of the stabilizer shape")
    S = symmetry_matrices(F)
    left = normalize_proj(F.matmul(A[None], S), F)
    right = normalize_proj(F.matmul(S, A[None]), F)
    commutes = bool(np.array_equal(left, right))
    if commutes != (int(A[1, 1]) == 1):
        raise ClaimMismatch("commutation with the symmetries differs from d = 1", witness=A.tolist())
    return commutes


def check_singer_contains_S(T: FinGroup, q: int | None = None) -> bool:
    """Whether every symmetry about x lies in T."""
    return bool(np.all(T.contains(symmetry_matrices(T.F))))


def fourth_powers(F: Field) -> set:
    return {F.pow(a, 4) for a in range(1, F.q)}


@dataclass
class IndexReport:
    q: int
    order_G: int
    order_G_psl: int
    order_H: int
    index_H_in_G_psl: int
    H_equals_G_psl: bool
    G_psl_equals_G: bool


def index_report(q: int, max_q: int = MAX_FAMILY_Q) -> IndexReport:
    """Orders of the linear stabilizer G, of G meet PSL_4(q) and of H = {d = 1}.

    A projective class lies in PSL_4(q) exactly when its determinant is a
    fourth power; the determinant of a family member is d^2.
    """
    F = field_of_order(q)
    M = stabilizer_family(q, max_q=max_q)
    d = M[:, 1, 1]
    det = F.vmul(d, d)
    fourth = np.isin(det, list(fourth_powers(F)))
    nG, nPSL, nH = len(M), int(fourth.sum()), int((d == 1).sum())
    return IndexReport(q, nG, nPSL, nH, nPSL // nH, nPSL == nH, nPSL == nG)


def stabilizer_order_formula(q: int) -> int:
    return q**4 * (q * q - 1) * (q - 1)
