"""Projective spaces over GF(q), canonical subspaces, the symplectic form
and Desarguesian spreads.

Points are stored as numpy rows of encoded field elements, normalised so
the first nonzero coordinate is 1, and enumerated lexicographically.  The
lexicographic rank of a normalised vector can be computed arithmetically,
which is what makes batched permutation actions cheap.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, SpaceTooLarge
from .gf import Field, get_field

MAX_POINTS = 10**7


class ProjPoint(NamedTuple):
    coords: tuple
    index: int


def normalize(vecs, F: Field):
    """Scale each row so its first nonzero entry is 1 (zero rows are left alone)."""
    v = np.array(vecs, dtype=F.dtype, copy=True)
    single = v.ndim == 1
    if single:
        v = v[None, :]
    nz = v != 0
    lead = np.argmax(nz, axis=1)
    lead_val = v[np.arange(len(v)), lead]
    ok = lead_val != 0
    scale = np.zeros(len(v), dtype=F.dtype)
    scale[ok] = F.vinv(lead_val[ok])
    v[ok] = F.vmul(v[ok], scale[ok, None])
    return v[0] if single else v


def count_points(n: int, q: int) -> int:
    return (q ** (n + 1) - 1) // (q - 1)


class ProjectiveSpace:
    """PG(n, q) with its canonically ordered point list."""

    def __init__(self, n: int, F: Field):
        self.n = n
        self.F = F
        self.npoints = count_points(n, F.q)
        if self.npoints > MAX_POINTS:
            raise SpaceTooLarge(f"PG({n},{F.q}) has {self.npoints} points")
        self._points = None

    @property
    def points(self) -> np.ndarray:
        if self._points is None:
            self._points = enumerate_points(self.n, self.F)
        return self._points

    def point(self, i: int) -> ProjPoint:
        return ProjPoint(tuple(int(c) for c in self.points[i]), i)

    def index_of(self, vecs) -> np.ndarray:
        """Ranks of (not necessarily normalised) nonzero vectors."""
        v = normalize(vecs, self.F)
        return rank_normalized(v, self.F.q)

    def __len__(self):
        return self.npoints


def enumerate_points(n: int, F: Field) -> np.ndarray:
    """All points of PG(n, q), normalised, in lexicographic order."""
    q = F.q
    total = count_points(n, q)
    if total > MAX_POINTS:
        raise SpaceTooLarge(f"PG({n},{q}) has {total} points")
    blocks = []
    for lead in range(n, -1, -1):
        free = n - lead
        m = q**free
        block = np.zeros((m, n + 1), dtype=F.dtype)
        block[:, lead] = 1
        if free:
            idx = np.arange(m)
            for k in range(free):
                block[:, n - k] = (idx // q**k) % q
        blocks.append(block)
    return np.concatenate(blocks)


def rank_normalized(v, q: int) -> np.ndarray:
    """Lexicographic index of normalised vectors (rows of ``v``)."""
    v = np.asarray(v, dtype=np.int64)
    single = v.ndim == 1
    if single:
        v = v[None, :]
    n = v.shape[1] - 1
    lead = np.argmax(v != 0, axis=1)
    free = n - lead
    offset = (q**free - 1) // (q - 1)
    weights = q ** np.arange(n, -1, -1, dtype=np.int64)
    # entries before and at the lead are 0 and 1; drop the lead's weight
    value = (v * weights).sum(axis=1) - q**free
    out = offset + value
    return out[0] if single else out


# --------------------------------------------------------------------------
# linear algebra over a field, on small matrices of encoded ints


def rref(rows, F: Field) -> list[list[int]]:
    """Reduced row echelon form with zero rows removed."""
    m = [list(map(int, r)) for r in rows]
    if not m:
        return []
    ncols = len(m[0])
    out = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = F.inv(m[r][c])
        m[r] = [F.mul(inv, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    for row in m[:r]:
        out.append(row)
    return out


def matrix_rank(rows, F: Field) -> int:
    return len(rref(rows, F))


def nullspace(rows, F: Field, ncols: int | None = None) -> list[list[int]]:
    """Basis of ``{v : rows . v = 0}``."""
    if ncols is None:
        ncols = len(rows[0])
    R = rref(rows, F) if rows else []
    pivots = []
    for row in R:
        pivots.append(next(i for i, x in enumerate(row) if x))
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(R, pivots):
            v[pc] = F.neg(row[f])
        basis.append(v)
    return basis


@dataclass(frozen=True)
class Subspace:
    """A subspace of F^N held as its reduced echelon basis.

    Equality and hashing use the echelon matrix, so two subspaces compare
    equal exactly when they are the same subspace.
    """

    F: Field
    ambient: int
    basis: tuple

    @classmethod
    def from_rows(cls, rows, F: Field, ambient: int | None = None) -> "Subspace":
        rows = [list(map(int, r)) for r in rows]
        if ambient is None:
            if not rows:
                raise DimensionMismatch("ambient dimension needed for an empty span")
            ambient = len(rows[0])
        if any(len(r) != ambient for r in rows):
            raise DimensionMismatch("rows of different lengths")
        return cls(F, ambient, tuple(tuple(r) for r in rref(rows, F)))

    @property
    def dim(self) -> int:
        """Vector-space dimension."""
        return len(self.basis)

    @property
    def projdim(self) -> int:
        return len(self.basis) - 1

    def contains(self, vec) -> bool:
        return matrix_rank(list(self.basis) + [list(vec)], self.F) == self.dim

    def __contains__(self, vec):
        return self.contains(vec)

    def vectors(self) -> np.ndarray:
        """All q^dim vectors of the subspace."""
        F = self.F
        if not self.basis:
            return np.zeros((1, self.ambient), dtype=F.dtype)
        B = np.array(self.basis, dtype=F.dtype)
        coeffs = np.array(list(itertools.product(range(F.q), repeat=self.dim)), dtype=F.dtype)
        return F.vsum(F.vmul(coeffs[:, :, None], B[None, :, :]), axis=1)

    def points(self) -> np.ndarray:
        """Normalised projective points of the subspace, sorted by rank."""
        v = self.vectors()
        v = v[np.any(v != 0, axis=1)]
        v = np.unique(normalize(v, self.F), axis=0)
        order = np.argsort(rank_normalized(v, self.F.q))
        return v[order]

    def join(self, other: "Subspace") -> "Subspace":
        return span_rows(list(self.basis) + list(other.basis), self.F, self.ambient)

    def meet(self, other: "Subspace") -> "Subspace":
        return meet(self, other)

    def to_json(self):
        return [list(r) for r in self.basis]


def span_rows(rows, F: Field, ambient: int) -> Subspace:
    return Subspace.from_rows(rows, F, ambient)


def span(points, F: Field | None = None) -> Subspace:
    """Subspace spanned by projective points (ProjPoint or coordinate rows)."""
    rows = [p.coords if isinstance(p, ProjPoint) else p for p in points]
    if F is None:
        raise DimensionMismatch("field required")
    lengths = {len(r) for r in rows}
    if len(lengths) > 1:
        raise DimensionMismatch("points from different spaces")
    return Subspace.from_rows(rows, F)


def meet(a: Subspace, b: Subspace) -> Subspace:
    """Intersection of two subspaces via annihilators."""
    if a.ambient != b.ambient or a.F != b.F:
        raise DimensionMismatch("subspaces of different spaces")
    F = a.F
    n = a.ambient
    ann_a = nullspace(list(a.basis), F, n) if a.basis else _identity(n)
    ann_b = nullspace(list(b.basis), F, n) if b.basis else _identity(n)
    basis = nullspace(ann_a + ann_b, F, n) if ann_a + ann_b else _identity(n)
    return Subspace.from_rows(basis, F, n) if basis else Subspace(F, n, ())


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


# --------------------------------------------------------------------------
# the symplectic form


@dataclass(frozen=True)
class SymplecticForm:
    """Alternating form ``B(u, v) = u^T P v`` on F^4."""

    F: Field
    gram: tuple

    def value(self, u, v) -> int:
        F = self.F
        acc = 0
        for i in range(4):
            for j in range(4):
                g = self.gram[i][j]
                if g and u[i] and v[j]:
                    acc = F.add(acc, F.mul(g, F.mul(u[i], v[j])))
        return acc

    def values(self, U, V):
        """Batched ``B(U[k], V[k])``."""
        F = self.F
        G = np.array(self.gram, dtype=F.dtype)
        GV = F.matvec(G, V)
        return F.vsum(F.vmul(U, GV), axis=-1)

    def is_isotropic_line(self, line: Subspace) -> bool:
        if line.dim != 2:
            raise DimensionMismatch("not a line")
        u, v = line.basis
        return self.value(u, v) == 0

    def perp(self, vec) -> Subspace:
        """The polar hyperplane of a point."""
        F = self.F
        row = [0] * 4
        for j in range(4):
            acc = 0
            for i in range(4):
                if self.gram[i][j] and vec[i]:
                    acc = F.add(acc, F.mul(vec[i], self.gram[i][j]))
            row[j] = acc
        return Subspace.from_rows(nullspace([row], F, 4), F, 4)


def symplectic_gram(F: Field) -> tuple:
    """The matrix P with rows (0,1,0,0), (-1,0,0,0), (0,0,0,1), (0,0,-1,0)."""
    m1 = F.neg(1)
    return ((0, 1, 0, 0), (m1, 0, 0, 0), (0, 0, 0, 1), (0, 0, m1, 0))


def symplectic_pairs(F: Field) -> SymplecticForm:
    return SymplecticForm(F, symplectic_gram(F))


# --------------------------------------------------------------------------
# spreads and subspace enumeration over prime fields


def encode_vectors(v, p: int) -> np.ndarray:
    """Base-p integer code of vectors over GF(p) (first coordinate most significant)."""
    v = np.asarray(v, dtype=np.int64)
    w = p ** np.arange(v.shape[-1] - 1, -1, -1, dtype=np.int64)
    return (v * w).sum(axis=-1)


class Spread:
    """Desarguesian (n-1)-spread of PG(2n-1, p).

    GF(p)^(2n) is read as pairs (u, w) of elements of GF(p^n) in polynomial
    coordinates.  Element 0 is ``{(u, 0)}``, element 1 is ``{(0, w)}`` and
    element ``1 + c`` (c = 1..q-1 in encoding order) is ``{(u, c*u)}``.
    """

    def __init__(self, p: int, n: int):
        if p ** (2 * n) > 2**20:
            raise SpaceTooLarge(f"PG({2 * n - 1},{p}) too large for a spread table")
        self.p = p
        self.n = n
        self.K = get_field(p, n)
        self.P = get_field(p, 1)
        K = self.K
        q = K.q
        self.size = q + 1
        digits = np.array([K.decode(a) for a in range(q)], dtype=np.int64)
        self._digits = digits
        u = np.arange(q)
        members = [(u, np.zeros(q, dtype=np.int64)), (np.zeros(q, dtype=np.int64), u)]
        for c in range(1, q):
            members.append((u, np.array([K.mul(c, int(x)) for x in u])))
        self.lookup = np.full(p ** (2 * n), -1, dtype=np.int64)
        self.elements = []
        for idx, (a, b) in enumerate(members):
            vecs = np.concatenate([digits[a], digits[b]], axis=1)
            codes = encode_vectors(vecs, p)
            nz = codes != 0
            self.lookup[codes[nz]] = idx
            # rows at u = x^i span the element
            basis_vecs = vecs[[p**i for i in range(n)]]
            self.elements.append(Subspace.from_rows(basis_vecs.tolist(), self.P, 2 * n))

    def pair_to_vector(self, u: int, w: int) -> list[int]:
        return list(self._digits[u]) + list(self._digits[w])

    def intersection_dims(self, basis) -> np.ndarray:
        """GF(p)-dimensions of ``span(basis)`` meet each spread element."""
        return intersection_dims_batch(np.asarray(basis)[None], self.lookup, self.p, self.size)[0]

    def __len__(self):
        return self.size

    def __iter__(self):
        return iter(self.elements)


def desarguesian_spread(p: int, n: int) -> list[Subspace]:
    return Spread(p, n).elements


def intersection_dims_batch(bases, lookup, p: int, nparts: int) -> np.ndarray:
    """For each basis (k x N over GF(p)), dims of its span meet each part.

    ``lookup`` maps the code of every nonzero vector to the index of the
    part containing it (parts partition the nonzero vectors).
    """
    bases = np.asarray(bases, dtype=np.int64)
    M, k, _ = bases.shape
    coeffs = np.array(list(itertools.product(range(p), repeat=k)), dtype=np.int64)[1:]
    vecs = np.einsum("ck,mkn->mcn", coeffs, bases) % p
    codes = encode_vectors(vecs, p)
    parts = lookup[codes]
    counts = np.zeros((M, nparts), dtype=np.int64)
    rows = np.repeat(np.arange(M), parts.shape[1])
    np.add.at(counts, (rows, parts.ravel()), 1)
    dims = np.zeros_like(counts)
    for d in range(1, k + 1):
        dims[counts >= p**d - 1] = d
    return dims


def subspace_bases(p: int, N: int, k: int, limit: int = 2_000_000) -> np.ndarray:
    """Echelon bases of all k-dimensional subspaces of GF(p)^N.

    Returned as an array of shape (M, k, N), one reduced echelon basis per
    subspace, grouped by pivot pattern.  Entries are element encodings, so
    passing a prime power q for ``p`` enumerates subspaces over GF(q).
    """
    total = gaussian_binomial(N, k, p)
    if total > limit:
        raise SpaceTooLarge(f"{total} subspaces of dimension {k} in GF({p})^{N}")
    chunks = []
    for pivots in itertools.combinations(range(N), k):
        free = [(r, c) for r in range(k) for c in range(pivots[r] + 1, N) if c not in pivots]
        m = p ** len(free)
        block = np.zeros((m, k, N), dtype=np.int16)
        for r, c in enumerate(pivots):
            block[:, r, c] = 1
        idx = np.arange(m)
        for j, (r, c) in enumerate(free):
            block[:, r, c] = (idx // p**j) % p
        chunks.append(block)
    return np.concatenate(chunks)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den
