"""Hyperovals of PG(2, 2^h), the quadrangles T2*(H) and their Singer groups.

PG(3, q) has coordinates (X, Y, Z, W); the affine points are W = 1 and the
plane at infinity W = 0 carries the hyperoval in coordinates (X, Y, Z).
Matrices act on column vectors.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadParameters,
    DViolation,
    GammaNotStabilizing,
    GcdViolation,
    NotHyperoval,
    SearchTooLarge,
    SpaceTooLarge,
)
from .gf import Field, field_of_order, frac_exponent
from .incidence import IncidenceStructure, VERIFY_BUDGET, verify_gq
from .matgroup import Action, FinGroup, generate, is_sharply_transitive, normalize_proj
from .projgeom import normalize


@dataclass
class Hyperoval:
    F: Field
    points: np.ndarray
    kind: str

    @property
    def q(self) -> int:
        return self.F.q

    def __len__(self):
        return len(self.points)

    def to_json(self) -> dict:
        return {"kind": self.kind, "q": self.q, "points": self.points.tolist()}


def _even_field(q: int) -> Field:
    F = field_of_order(q)
    if F.p != 2:
        raise BadParameters("hyperovals need q even")
    return F


def det3(F: Field, M) -> np.ndarray:
    """Determinants of a stack of 3x3 matrices over F."""
    M = np.asarray(M, dtype=F.dtype)
    m = F.vmul
    t1 = m(M[..., 0, 0], F.vsub(m(M[..., 1, 1], M[..., 2, 2]), m(M[..., 1, 2], M[..., 2, 1])))
    t2 = m(M[..., 0, 1], F.vsub(m(M[..., 1, 0], M[..., 2, 2]), m(M[..., 1, 2], M[..., 2, 0])))
    t3 = m(M[..., 0, 2], F.vsub(m(M[..., 1, 0], M[..., 2, 1]), m(M[..., 1, 1], M[..., 2, 0])))
    return F.vadd(F.vsub(t1, t2), t3)


def collinear_triples(F: Field, pts) -> np.ndarray:
    """Index triples of collinear points (empty for an arc)."""
    pts = np.asarray(pts, dtype=F.dtype)
    tri = np.array(list(itertools.combinations(range(len(pts)), 3)), dtype=np.int64).reshape(-1, 3)
    if len(tri) == 0:
        return tri
    d = det3(F, pts[tri])
    return tri[d == 0]


def check_hyperoval(H: Hyperoval) -> None:
    q = H.q
    if len(H.points) != q + 2 or len(np.unique(H.points, axis=0)) != q + 2:
        raise NotHyperoval(f"expected {q + 2} distinct points", witness={"size": len(H.points)})
    bad = collinear_triples(H.F, H.points)
    if len(bad):
        raise NotHyperoval("three points are collinear", witness={"triple": bad[0].tolist()})


def hyperoval_from_function(F: Field, f, kind: str) -> Hyperoval:
    """{(1, t, f(t))} together with (0,0,1) and (0,1,0)."""
    t = np.arange(F.q)
    aff = np.stack([np.ones(F.q, dtype=np.int64), t, np.array([f(int(v)) for v in t])], axis=1)
    pts = np.concatenate([aff, [[0, 0, 1], [0, 1, 0]]]).astype(F.dtype)
    H = Hyperoval(F, pts, kind)
    check_hyperoval(H)
    return H


def translation_hyperoval(q: int, k: int = 1) -> Hyperoval:
    F = _even_field(q)
    h = F.h
    if math.gcd(k, h) != 1:
        raise GcdViolation(f"gcd({k},{h}) != 1")
    e = 2**k
    kind = "regular" if (k % h) in (1 % h, (h - 1) % h) else f"translation({k})"
    return hyperoval_from_function(F, lambda t: F.pow(t, e), kind)


def payne_exponents(q: int) -> tuple[int, int, int]:
    return tuple(frac_exponent(num, 6, q) for num in (1, 3, 5))


def payne_hyperoval(q: int) -> Hyperoval:
    F = _even_field(q)
    if F.h < 5 or F.h % 2 == 0:
        raise BadParameters("Payne hyperovals need q = 2^h with h odd and h >= 5")
    e = payne_exponents(q)

    def f(t):
        return F.add(F.add(F.pow(t, e[0]), F.pow(t, e[1])), F.pow(t, e[2])) if t else 0

    return hyperoval_from_function(F, f, "payne")


# --------------------------------------------------------------------------
# T2*(H)


@dataclass
class T2StarModel:
    hyperoval: Hyperoval
    structure: IncidenceStructure
    points: np.ndarray

    @property
    def certificate(self):
        return self.structure.certificate


def affine_points(F: Field) -> np.ndarray:
    """Normalised coordinates of the q^3 points (X, Y, Z, 1), index X q^2 + Y q + Z."""
    q = F.q
    idx = np.arange(q**3)
    v = np.stack([idx // (q * q), (idx // q) % q, idx % q, np.ones_like(idx)], axis=1)
    return normalize(v.astype(F.dtype), F)


def t2star(H: Hyperoval, verify: bool | None = None) -> T2StarModel:
    """Affine points of PG(3,q) and the lines meeting infinity in a point of H."""
    F = H.F
    q = F.q
    npts = q**3
    if npts > 2**15:
        raise SpaceTooLarge(f"T2* with {npts} points exceeds the construction bound")
    idx = np.arange(npts)
    X, Y, Z = idx // (q * q), (idx // q) % q, idx % q
    coords = np.stack([X, Y, Z], axis=1).astype(F.dtype)
    s = np.arange(q, dtype=F.dtype)
    lines, labels = [], []
    for d_i, d in enumerate(H.points):
        step = F.vmul(s[:, None], d[None, :].astype(F.dtype))
        moved = F.vadd(coords[:, None, :], step[None, :, :]).astype(np.int64)
        ids = moved[..., 0] * q * q + moved[..., 1] * q + moved[..., 2]
        ids.sort(axis=1)
        rep = np.unique(ids, axis=0)
        lines.extend(rep)
        labels.extend(("direction", d_i, int(r[0])) for r in rep)
    S = IncidenceStructure(
        npts,
        lines,
        point_labels=[(int(a), int(b), int(c)) for a, b, c in coords],
        line_labels=labels,
    )
    if verify is None:
        verify = npts * len(lines) <= VERIFY_BUDGET and npts <= 2**12
    if verify:
        verify_gq(S)
    return T2StarModel(H, S, affine_points(F))


# --------------------------------------------------------------------------
# Singer groups


@dataclass
class HyperovalSingerReport:
    order: int
    exponent: int
    center_order: int
    translation_intersection: int
    sharply_transitive: bool
    stabilizes_hyperoval: bool
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        d = dict(self.__dict__)
        d.update(d.pop("extra"))
        return d


def _affine_matrix(F: Field, L, v) -> np.ndarray:
    M = np.eye(4, dtype=F.dtype)
    M[:3, :3] = L
    M[:3, 3] = v
    return M


def translation_singer_matrix(F: Field, a: int, b: int, c: int, k: int) -> np.ndarray:
    s = F.pow(a, 2**k)
    return np.array([[1, 0, 0, a], [a, 1, 0, b], [s, 0, 1, c], [0, 0, 0, 1]], dtype=F.dtype)


def translation_singer(q: int, k: int = 1) -> FinGroup:
    """The group of matrices [[1,0,0,a],[a,1,0,b],[a^(2^k),0,1,c],[0,0,0,1]]."""
    F = _even_field(q)
    if math.gcd(k, F.h) != 1:
        raise GcdViolation(f"gcd({k},{F.h}) != 1")
    basis = [2**i for i in range(F.h)]
    gens = [translation_singer_matrix(F, a, 0, 0, k) for a in basis]
    gens += [translation_singer_matrix(F, 0, b, 0, k) for b in basis]
    gens += [translation_singer_matrix(F, 0, 0, c, k) for c in basis]
    return generate(np.array(gens), F, name=f"translation_singer({q},{k})")


def translation_group(q: int) -> FinGroup:
    """All q^3 translations of AG(3, q)."""
    F = field_of_order(q)
    gens = []
    for axis in range(3):
        for i in range(F.h):
            v = np.zeros(3, dtype=np.int64)
            v[axis] = F.p**i
            gens.append(_affine_matrix(F, np.eye(3, dtype=np.int64), v))
    return generate(np.array(gens), F, name="translations")


def _is_translation(G: FinGroup) -> np.ndarray:
    E = G.elements
    n = G.n
    eye = np.eye(n - 1, dtype=E.dtype)
    return np.all(E[:, : n - 1, : n - 1] == eye, axis=(1, 2)) & np.all(E[:, n - 1, : n - 1] == 0, axis=1)


def _stabilizes(G: FinGroup, H: Hyperoval) -> bool:
    F = H.F
    at_inf = np.concatenate([H.points, np.zeros((len(H.points), 1), dtype=F.dtype)], axis=1)
    try:
        Action(G, normalize(at_inf, F))
    except Exception:
        return False
    return True


def singer_report(G: FinGroup, H: Hyperoval, extra: dict | None = None) -> HyperovalSingerReport:
    F = H.F
    ok, _ = is_sharply_transitive(Action(G, affine_points(F), check=False))
    return HyperovalSingerReport(
        order=G.order,
        exponent=G.exponent,
        center_order=len(G.center_indices),
        translation_intersection=int(_is_translation(G).sum()),
        sharply_transitive=ok,
        stabilizes_hyperoval=_stabilizes(G, H),
        extra=extra or {},
    )


def swap_gamma(F: Field) -> np.ndarray:
    """The involution exchanging the X and Y coordinates of the plane at infinity."""
    return np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]], dtype=F.dtype)


def parity_subgroup(F: Field) -> np.ndarray:
    """Basis of D = {(a,b,c): sum of the GF(2) digits of a and b is 0}.

    Returned as translation vectors (triples of field encodings).
    """
    h = F.h
    bits = [("a", i) for i in range(h)] + [("b", i) for i in range(h)]
    vecs = []
    first = bits[0]
    for other in bits[1:]:
        v = [0, 0, 0]
        for slot, i in (first, other):
            k = 0 if slot == "a" else 1
            v[k] ^= 1 << i
        vecs.append(v)
    for i in range(h):
        vecs.append([0, 0, 1 << i])
    return np.array(vecs, dtype=np.int64)


def in_parity_subgroup(F: Field, v) -> bool:
    a, b, _ = (int(x) for x in v)
    return (bin(a).count("1") + bin(b).count("1")) % 2 == 0


def elation_singer(H: Hyperoval, gamma=None, D_basis=None) -> tuple[FinGroup, HyperovalSingerReport]:
    """S = <g, T> with g = [[gamma, e1], [0, 1]] and T the translations by D.

    ``gamma`` is an involution of the plane stabilizing H (the X/Y swap by
    default); ``D_basis`` spans an additive subgroup of index 2 in F^3 that is
    gamma-invariant, avoids (1,0,0) and contains (gamma + 1) e1 (by default the
    parity hyperplane).
    """
    F = H.F
    gamma = swap_gamma(F) if gamma is None else np.asarray(gamma, dtype=F.dtype)
    pts = normalize(H.points, F)
    img = normalize(F.matvec(gamma[None], pts), F)
    present = {tuple(r) for r in pts.tolist()}
    for i, r in enumerate(img.tolist()):
        if tuple(r) not in present:
            raise GammaNotStabilizing("gamma moves a hyperoval point off the hyperoval", witness={"point": pts[i].tolist()})
    if not np.array_equal(normalize_proj(F.matmul(gamma, gamma), F), normalize_proj(np.eye(3, dtype=F.dtype), F)):
        raise GammaNotStabilizing("gamma is not an involution")
    e1 = np.array([1, 0, 0], dtype=F.dtype)
    D_basis = parity_subgroup(F) if D_basis is None else np.asarray(D_basis)
    D_members = _span_gf2(F, D_basis)
    if len(D_members) != F.q**3 // 2:
        raise DViolation("D does not have index 2", witness={"size": len(D_members)})
    if (1, 0, 0) in D_members:
        raise DViolation("D contains (1,0,0)")
    g2 = tuple(int(v) for v in F.vadd(F.matvec(gamma, e1), e1))
    if g2 not in D_members:
        raise DViolation("g^2 is not a translation in D", witness={"g2": list(g2)})
    for v in D_basis:
        w = tuple(int(x) for x in F.matvec(gamma, np.asarray(v, dtype=F.dtype)))
        if w not in D_members:
            raise DViolation("D is not gamma-invariant", witness={"vector": list(map(int, v))})
    g = _affine_matrix(F, gamma, e1)
    gens = [g] + [_affine_matrix(F, np.eye(3, dtype=F.dtype), v) for v in D_basis]
    S = generate(np.array(gens), F, name="elation_singer")
    g2_matrix = normalize_proj(F.matmul(g, g), F)
    h110 = _affine_matrix(F, np.eye(3, dtype=F.dtype), np.array(g2))
    rep = singer_report(
        S,
        H,
        extra={
            "g_squared_is_h110": bool(np.array_equal(g2_matrix, h110)) and g2 == (1, 1, 0),
            "g_squared": list(g2),
        },
    )
    return S, rep


def _span_gf2(F: Field, basis) -> set:
    out = {(0, 0, 0)}
    for v in np.asarray(basis, dtype=np.int64):
        v = tuple(int(x) for x in v)
        out |= {(a ^ v[0], b ^ v[1], c ^ v[2]) for a, b, c in out}
    return out


# --------------------------------------------------------------------------
# linear stabilizer


@dataclass
class LinearStabilizer:
    full: FinGroup | None
    two_part: FinGroup
    axis_subgroup_order: int | None
    matches_family: bool | None


def _inv3(F: Field, M) -> np.ndarray:
    from .projgeom import rref

    aug = [list(map(int, row)) + [int(i == j) for j in range(3)] for i, row in enumerate(M)]
    R = rref(aug, F)
    return np.array([r[3:] for r in R], dtype=F.dtype)


def _frame_matrix(F: Field, P) -> np.ndarray:
    """Matrix sending e1, e2, e3, e1+e2+e3 to the four given points."""
    B = np.array(P[:3], dtype=F.dtype).T
    lam = F.matvec(_inv3(F, B)[None], np.asarray(P[3], dtype=F.dtype)[None])[0]
    return F.vmul(B, lam[None, :])


def hyperoval_linear_stabilizer(H: Hyperoval, k: int = 1, full_scan: bool | None = None) -> LinearStabilizer:
    """The group of matrices [[1,0,0],[a,1,0],[a^(2^k),0,1]] stabilizing H and,
    for q <= 8, the full linear stabilizer found by mapping a frame of H onto
    every ordered 4-tuple of its points."""
    F = H.F
    q = F.q
    fam = [np.array([[1, 0, 0], [a, 1, 0], [F.pow(a, 2**k), 0, 1]], dtype=F.dtype) for a in range(q)]
    fam_group = generate(np.array(fam), F, name="two_part")
    pts = normalize(H.points, F)
    present = {tuple(r) for r in pts.tolist()}
    for M in fam_group.elements:
        img = normalize(F.matvec(M[None], pts), F)
        if any(tuple(r) not in present for r in img.tolist()):
            raise GammaNotStabilizing("family member does not stabilize the hyperoval")
    if full_scan is None:
        full_scan = q <= 8
    if not full_scan:
        return LinearStabilizer(None, fam_group, None, None)
    if q > 8:
        raise SearchTooLarge("full stabilizer scan is bounded to q <= 8")
    frame = pts[:4]
    Finv = _inv3(F, _frame_matrix(F, frame))
    found = []
    for tup in itertools.permutations(range(len(pts)), 4):
        M = F.matmul(_frame_matrix(F, pts[list(tup)]), Finv)
        img = normalize(F.matvec(M[None], pts), F)
        if all(tuple(r) in present for r in img.tolist()):
            found.append(normalize_proj(M, F))
    full = FinGroup(F, np.unique(np.array(found), axis=0), name="linear_stabilizer")
    line = normalize(np.array([[0, 1, a] for a in range(q)] + [[0, 0, 1]], dtype=F.dtype), F)
    fixes = []
    for i, M in enumerate(full.elements):
        img = normalize(F.matvec(M[None], line), F)
        if np.array_equal(img, line) and _is_power_of_two(int(full.element_orders[i])):
            fixes.append(i)
    fixed_set = {full.elements[i].tobytes() for i in fixes}
    fam_set = {normalize_proj(M, F).tobytes() for M in fam_group.elements}
    return LinearStabilizer(full, fam_group, len(fixes), fixed_set == fam_set)


def _is_power_of_two(n: int) -> bool:
    return n & (n - 1) == 0
