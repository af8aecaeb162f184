"""Projective matrix groups given by explicit element lists.

Every matrix is kept in projective normal form (first nonzero entry in
row-major order equal to 1).  A ``FinGroup`` stores its elements as one
``(N, n, n)`` array; membership and multiplication are vectorised through a
64-bit hash with exact verification.
"""
from __future__ import annotations

import json
import math
import os
from collections import Counter
from dataclasses import asdict, dataclass, field
from functools import cached_property, reduce

import networkx as nx
import numpy as np

from .errors import GroupTooLarge, NotInKernel, NotInvariant, NotNormal, NotSubgroup
from .gf import Field

DEFAULT_MAX_ORDER = 2**20
MAX_ABELIAN_SEARCH = 2**16

_rng = np.random.default_rng(20240521)
_WEIGHTS = _rng.integers(1, 2**63, size=256, dtype=np.uint64) | np.uint64(1)


def max_order_guard() -> int:
    env = os.environ.get("SINGER_GQ_MAX_ORDER")
    return int(env) if env else DEFAULT_MAX_ORDER


def normalize_proj(M, F: Field) -> np.ndarray:
    """Projective normal form of one matrix or a stack of matrices."""
    M = np.asarray(M, dtype=F.dtype)
    single = M.ndim == 2
    if single:
        M = M[None]
    if len(M) == 0:
        return M[0] if single else M
    flat = M.reshape(len(M), -1)
    lead = np.argmax(flat != 0, axis=1)
    val = flat[np.arange(len(flat)), lead]
    if np.any(val == 0):
        raise ValueError("zero matrix has no projective normal form")
    scale = np.where(val == 1, 1, F.vinv(val)).astype(F.dtype)
    out = F.vmul(flat, scale[:, None]).reshape(M.shape).astype(F.dtype)
    return out[0] if single else out


def hash_rows(arr) -> np.ndarray:
    """64-bit hash of each row of a 2-D integer array."""
    arr = np.asarray(arr)
    w = _WEIGHTS[: arr.shape[1]]
    with np.errstate(over="ignore"):
        return (arr.astype(np.uint64) * w).sum(axis=1, dtype=np.uint64)


class RowIndex:
    """Exact lookup from rows of an array to their position."""

    def __init__(self, rows):
        self.rows = np.ascontiguousarray(rows)
        self.flat = self.rows.reshape(len(self.rows), -1)
        keys = hash_rows(self.flat)
        self.order = np.argsort(keys, kind="stable")
        self.keys = keys[self.order]
        if len(self.keys) > 1 and np.any(self.keys[1:] == self.keys[:-1]):
            # astronomically unlikely; fall back to a dict
            self._dict = {r.tobytes(): i for i, r in enumerate(self.flat)}
        else:
            self._dict = None

    def lookup(self, rows) -> np.ndarray:
        """Indices of ``rows`` (-1 when absent)."""
        q = np.ascontiguousarray(rows, dtype=self.rows.dtype).reshape(-1, self.flat.shape[1])
        if self._dict is not None:
            return np.array([self._dict.get(r.tobytes(), -1) for r in q], dtype=np.int64)
        k = hash_rows(q)
        pos = np.searchsorted(self.keys, k)
        pos = np.minimum(pos, len(self.keys) - 1)
        cand = self.order[pos]
        ok = (self.keys[pos] == k) & np.all(self.flat[cand] == q, axis=1)
        return np.where(ok, cand, -1)


class ProjMat:
    """A nonsingular matrix modulo scalars."""

    __slots__ = ("F", "m", "_key")

    def __init__(self, entries, F: Field):
        self.F = F
        self.m = normalize_proj(entries, F)
        self.m.setflags(write=False)
        self._key = self.m.tobytes()

    @property
    def n(self) -> int:
        return self.m.shape[0]

    def __mul__(self, other: "ProjMat") -> "ProjMat":
        return ProjMat(self.F.matmul(self.m, other.m), self.F)

    def __eq__(self, other):
        return isinstance(other, ProjMat) and self.F == other.F and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"ProjMat({self.m.tolist()})"

    def tolist(self):
        return self.m.tolist()


# --------------------------------------------------------------------------


class FinGroup:
    """A finite group of projective matrices, as an explicit element set."""

    def __init__(self, F: Field, elements, gens=None, name: str = ""):
        self.F = F
        self.elements = np.ascontiguousarray(elements, dtype=F.dtype)
        self.n = self.elements.shape[1]
        self.name = name
        self._index = RowIndex(self.elements)
        ident = normalize_proj(np.eye(self.n, dtype=F.dtype), F)
        self.identity = int(self._index.lookup(ident[None])[0])
        if self.identity < 0:
            raise NotSubgroup("identity missing")
        if gens is None:
            gens = list(range(len(self.elements)))
        self.gens = [int(g) for g in gens]

    def __len__(self):
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __repr__(self):
        return f"FinGroup({self.name or 'G'}, order={self.order})"

    def gen_matrices(self) -> np.ndarray:
        return self.elements[self.gens]

    # -- arithmetic ----------------------------------------------------------
    def product(self, A, B) -> np.ndarray:
        return normalize_proj(self.F.matmul(A, B), self.F)

    def index(self, mats) -> np.ndarray:
        mats = np.asarray(mats, dtype=self.F.dtype)
        return self._index.lookup(mats.reshape(-1, self.n * self.n))

    def contains(self, mats) -> np.ndarray:
        return self.index(normalize_proj(np.asarray(mats).reshape(-1, self.n, self.n), self.F)) >= 0

    def mul(self, a, b) -> np.ndarray:
        """Index of ``elements[a] @ elements[b]`` (vectorised)."""
        a = np.asarray(a)
        b = np.asarray(b)
        prod = self.product(self.elements[a.ravel()], self.elements[b.ravel()])
        return self.index(prod).reshape(np.broadcast(a, b).shape)

    @cached_property
    def element_orders(self) -> np.ndarray:
        N = self.order
        orders = np.zeros(N, dtype=np.int64)
        cur = self.elements.copy()
        k = 1
        alive = np.arange(N)
        ident = self.elements[self.identity]
        while len(alive):
            done = np.all(cur.reshape(len(cur), -1) == ident.ravel(), axis=1)
            orders[alive[done]] = k
            alive = alive[~done]
            cur = self.product(cur[~done], self.elements[alive])
            k += 1
        return orders

    @cached_property
    def inverses(self) -> np.ndarray:
        ords = self.element_orders
        return self.power(np.arange(self.order), ords - 1)

    def power(self, idx, e) -> np.ndarray:
        idx = np.asarray(idx)
        e = np.broadcast_to(np.asarray(e), idx.shape).copy()
        result = np.full(idx.shape, self.identity)
        base = idx.copy()
        while np.any(e > 0):
            odd = (e & 1) == 1
            if odd.any():
                result[odd] = self.mul(result[odd], base[odd])
            e >>= 1
            live = e > 0
            if live.any():
                base[live] = self.mul(base[live], base[live])
        return result

    def conjugate(self, x, g) -> np.ndarray:
        """Index of g^-1 x g."""
        return self.mul(self.mul(self.inverses[np.asarray(g)], x), g)

    def commutator(self, x, y) -> np.ndarray:
        """Index of x^-1 y^-1 x y."""
        inv = self.inverses
        return self.mul(self.mul(inv[x], inv[y]), self.mul(x, y))

    def commute_mask(self, idx_a, idx_b) -> np.ndarray:
        """Boolean matrix: elements idx_a[i] and idx_b[j] commute."""
        idx_a = np.asarray(idx_a)
        idx_b = np.asarray(idx_b)
        out = np.zeros((len(idx_a), len(idx_b)), dtype=bool)
        A = self.elements[idx_a]
        B = self.elements[idx_b]
        chunk = max(1, 2**18 // max(1, len(idx_b)))
        for s in range(0, len(idx_a), chunk):
            a = A[s : s + chunk, None]
            ab = self.product(np.broadcast_to(a, (len(a), len(B), self.n, self.n)), B[None])
            ba = self.product(B[None], np.broadcast_to(a, (len(a), len(B), self.n, self.n)))
            out[s : s + chunk] = np.all((ab == ba).reshape(len(a), len(B), -1), axis=2)
        return out

    # -- subgroups -----------------------------------------------------------
    def subgroup(self, idx, name: str = "") -> "FinGroup":
        """Subgroup generated by the given element indices."""
        return generate(self.elements[list(idx)], self.F, name=name)

    def contains_group(self, H: "FinGroup") -> bool:
        return bool(np.all(self.index(H.elements) >= 0))

    def indices_of(self, H: "FinGroup") -> np.ndarray:
        idx = self.index(H.elements)
        if np.any(idx < 0):
            raise NotSubgroup("not a subset")
        return np.sort(idx)

    def normal_closure(self, idx) -> "FinGroup":
        """Smallest normal subgroup containing the given element indices."""
        H = self.subgroup(idx) if len(idx) else trivial_group(self.F, self.n)
        while True:
            hg = self.indices_of(H)[H.gens] if H.gens else np.zeros(0, dtype=np.int64)
            new = []
            for g in self.gens:
                conj = self.conjugate(hg, np.full(len(hg), g))
                missing = conj[H.index(self.elements[conj]) < 0]
                new.extend(missing.tolist())
            if not new:
                return H
            H = self.subgroup(list(hg) + sorted(set(new)))

    @cached_property
    def center_indices(self) -> np.ndarray:
        mask = self.commute_mask(np.arange(self.order), self.gens).all(axis=1)
        return np.flatnonzero(mask)

    def center(self) -> "FinGroup":
        return FinGroup(self.F, self.elements[self.center_indices], name="center")

    @cached_property
    def is_abelian(self) -> bool:
        g = self.gens
        return bool(self.commute_mask(g, g).all())

    def derived_subgroup(self) -> "FinGroup":
        g = np.array(self.gens)
        if len(g) == 0:
            return trivial_group(self.F, self.n)
        a, b = np.meshgrid(g, g, indexing="ij")
        comms = np.unique(self.commutator(a.ravel(), b.ravel()))
        return self.normal_closure(comms.tolist())

    @cached_property
    def exponent(self) -> int:
        return reduce(math.lcm, np.unique(self.element_orders).tolist(), 1)

    def centralizer_indices(self, idx) -> np.ndarray:
        idx = np.atleast_1d(np.asarray(idx))
        return np.flatnonzero(self.commute_mask(np.arange(self.order), idx).all(axis=1))

    def maximal_abelian_subgroups(self, elementary: bool = False) -> list["FinGroup"]:
        """All maximal abelian subgroups (maximal cliques of the commuting graph).

        With ``elementary=True`` the maximal elementary abelian subgroups are
        returned instead.
        """
        if self.order > MAX_ABELIAN_SEARCH:
            raise GroupTooLarge(f"order {self.order} exceeds {MAX_ABELIAN_SEARCH}")
        N = self.order
        comm = self.commute_mask(np.arange(N), np.arange(N))
        orders = self.element_orders
        if elementary:
            primes = _prime_divisors(N)
            if len(primes) > 1:
                raise ValueError("elementary abelian search needs a p-group")
            allowed = np.isin(orders, [1] + primes)
        else:
            allowed = np.ones(N, dtype=bool)
        verts = np.flatnonzero(allowed)
        sub = comm[np.ix_(verts, verts)]
        # a maximal clique contains all or none of a set of twins (equal rows)
        rows, twin_of = np.unique(sub, axis=0, return_inverse=True)
        twin_of = twin_of.ravel()
        universal = np.flatnonzero(rows.all(axis=1))
        graph = nx.Graph()
        graph.add_nodes_from(c for c in range(len(rows)) if c not in universal)
        rep = np.array([np.flatnonzero(twin_of == c)[0] for c in range(len(rows))])
        for c in graph.nodes:
            for d in np.flatnonzero(sub[rep[c], rep] & (np.arange(len(rows)) > c)):
                if d not in universal:
                    graph.add_edge(c, int(d))
        cliques = list(nx.find_cliques(graph)) if graph.number_of_nodes() else [[]]
        out = []
        for cl in cliques:
            members = np.flatnonzero(np.isin(twin_of, list(cl) + universal.tolist()))
            out.append(np.sort(verts[members]))
        out.sort(key=lambda v: (len(v), v.tolist()))
        return [FinGroup(self.F, self.elements[v], name="max_abelian") for v in out]

    def is_normal_in(self, Amb: "FinGroup") -> bool:
        return is_normal_in(self, Amb)

    def invariants(self) -> "GroupInvariants":
        return invariants(self)

    def to_json(self) -> dict:
        return {"order": self.order, "generators": self.gen_matrices().tolist()}


def _prime_divisors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def trivial_group(F: Field, n: int) -> FinGroup:
    return FinGroup(F, np.eye(n, dtype=F.dtype)[None], gens=[], name="trivial")


def generate(gens, F: Field, max_order: int | None = None, name: str = "") -> FinGroup:
    """Closure of the given matrices under multiplication (breadth first)."""
    if max_order is None:
        max_order = max_order_guard()
    gens = np.asarray(gens, dtype=F.dtype)
    if gens.ndim == 2:
        gens = gens[None]
    n = gens.shape[-1] if gens.size else 1
    ident = normalize_proj(np.eye(n, dtype=F.dtype), F)
    if len(gens) == 0:
        return FinGroup(F, ident[None], gens=[], name=name)
    gens = normalize_proj(gens, F)
    seen = {ident.tobytes(): 0}
    elems = [ident]
    frontier = ident[None]
    while len(frontier):
        prods = normalize_proj(F.matmul(frontier[:, None], gens[None]).reshape(-1, n, n), F)
        fresh = []
        for M in prods:
            k = M.tobytes()
            if k not in seen:
                seen[k] = len(elems)
                elems.append(M)
                fresh.append(M)
                if len(elems) > max_order:
                    raise GroupTooLarge(f"closure exceeds {max_order} elements")
        frontier = np.array(fresh, dtype=F.dtype).reshape(-1, n, n)
    gen_idx = sorted({seen[g.tobytes()] for g in gens})
    return FinGroup(F, np.array(elems), gens=gen_idx, name=name)


def is_normal_in(Sub: FinGroup, Amb: FinGroup) -> bool:
    sub_idx = Amb.index(Sub.elements)
    if np.any(sub_idx < 0):
        raise NotSubgroup("not a subgroup of the ambient group")
    hg = sub_idx[Sub.gens] if Sub.gens else sub_idx[:0]
    for g in Amb.gens:
        conj = Amb.conjugate(hg, np.full(len(hg), g))
        if np.any(Sub.index(Amb.elements[conj]) < 0):
            return False
    return True


# --------------------------------------------------------------------------
# actions


class Action:
    """A group acting on an ordered list of projective points.

    ``rep`` maps the stack of group matrices to the matrices that act on the
    points (for instance a diagonal block); by default the group matrices act
    directly on column vectors.
    """

    def __init__(self, G: FinGroup, pts, rep=None, check: bool = True):
        self.G = G
        self.F = G.F
        self.pts = np.ascontiguousarray(pts, dtype=G.F.dtype)
        self.rep = rep
        self._pindex = RowIndex(self.pts)
        if check:
            gm = self._mats(np.asarray(G.gens if G.gens else [G.identity]))
            for k in range(len(gm)):
                img = self._images_of_all(gm[k])
                bad = np.flatnonzero(img < 0)
                if len(bad):
                    raise NotInvariant("point set not closed under the group", witness={"point": int(bad[0])})

    def _mats(self, idx) -> np.ndarray:
        M = self.G.elements[idx]
        return self.rep(M) if self.rep is not None else M

    def _normalize_pts(self, v) -> np.ndarray:
        from .projgeom import normalize

        return normalize(v.reshape(-1, v.shape[-1]), self.F)

    def _images_of_all(self, M) -> np.ndarray:
        img = self.F.matvec(M[None], self.pts)
        return self._pindex.lookup(self._normalize_pts(img))

    def images(self, point: int, idx=None) -> np.ndarray:
        """Image of one point under each listed element (all by default)."""
        if idx is None:
            idx = np.arange(self.G.order)
        out = np.empty(len(idx), dtype=np.int64)
        chunk = 2**16
        for s in range(0, len(idx), chunk):
            M = self._mats(np.asarray(idx[s : s + chunk]))
            img = self.F.matvec(M, self.pts[point][None])
            out[s : s + chunk] = self._pindex.lookup(self._normalize_pts(img))
        return out

    @cached_property
    def perms(self) -> np.ndarray:
        """Permutation of point indices for every group element."""
        N, m = self.G.order, len(self.pts)
        if N * m > 5 * 10**7:
            raise GroupTooLarge(f"permutation table {N} x {m} too large")
        out = np.empty((N, m), dtype=np.int64)
        step = max(1, 2**20 // max(m, 1))
        for s in range(0, N, step):
            M = self._mats(np.arange(s, min(N, s + step)))
            img = self.F.matvec(M[:, None], self.pts[None])
            out[s : s + len(M)] = self._pindex.lookup(self._normalize_pts(img)).reshape(len(M), m)
        if np.any(out < 0):
            raise NotInvariant("point set not closed under the group")
        return out

    @cached_property
    def faithful(self) -> bool:
        return len(np.unique(self.perms, axis=0)) == self.G.order

    def orbits(self) -> list[np.ndarray]:
        m = len(self.pts)
        gens = self.G.gens
        gp = np.array([self._images_of_all(self._mats(np.array([g]))[0]) for g in gens]) if gens else np.zeros((0, m), int)
        label = np.full(m, -1)
        out = []
        for s in range(m):
            if label[s] >= 0:
                continue
            orb = [s]
            label[s] = len(out)
            k = 0
            while k < len(orb):
                for row in gp:
                    y = int(row[orb[k]])
                    if label[y] < 0:
                        label[y] = len(out)
                        orb.append(y)
                k += 1
            out.append(np.array(sorted(orb)))
        return out


def act(G: FinGroup, pts, rep=None) -> Action:
    return Action(G, pts, rep)


@dataclass
class TransitivityCertificate:
    sharply_transitive: bool
    order: int
    npoints: int
    base_point: int
    orbit: list = field(repr=False, default_factory=list)
    reason: str = ""


def is_sharply_transitive(action: Action, base_point: int = 0) -> tuple[bool, TransitivityCertificate]:
    """Regularity test: |G| equals the number of points and the orbit map
    g -> base^g is a bijection (so point stabilizers are trivial)."""
    N, m = action.G.order, len(action.pts)
    if N != m:
        return False, TransitivityCertificate(False, N, m, base_point, reason="order differs from point count")
    img = action.images(base_point)
    if np.any(img < 0):
        raise NotInvariant("point set not closed under the group", witness={"point": base_point})
    ok = len(np.unique(img)) == m
    return ok, TransitivityCertificate(ok, N, m, base_point, img.tolist(), "" if ok else "orbit map not injective")


@dataclass
class QuotientAction:
    order: int
    coset_reps: list
    perms: np.ndarray
    faithful: bool
    sharply_transitive: bool


def quotient_action(G: FinGroup, N: FinGroup, pts, rep=None) -> QuotientAction:
    """Action of G/N on points fixed by every element of N."""
    if not is_normal_in(N, G):
        raise NotNormal("subgroup is not normal")
    act_N = Action(N, pts, rep)
    ident = np.arange(len(pts))
    for g in N.gens:
        if not np.array_equal(act_N.perms[g] if N.order * len(pts) <= 5 * 10**7 else act_N._images_of_all(act_N._mats([g])[0]), ident):
            raise NotInKernel("normal subgroup moves a point", witness={"element": N.elements[g].tolist()})
    nidx = G.index(N.elements)
    covered = np.zeros(G.order, dtype=bool)
    reps = []
    for g in range(G.order):
        if covered[g]:
            continue
        reps.append(g)
        covered[G.mul(np.full(len(nidx), g), nidx)] = True
    act_G = Action(G, pts, rep, check=False)
    perms = np.array([act_G._images_of_all(act_G._mats(np.array([r]))[0]) for r in reps])
    faithful = len(np.unique(perms, axis=0)) == len(reps)
    sharp = len(reps) == len(pts) and len(np.unique(perms[:, 0])) == len(pts)
    return QuotientAction(len(reps), reps, perms, faithful, sharp)


# --------------------------------------------------------------------------
# invariants


def psl_pgl_order(n: int, q: int) -> tuple[int, int]:
    """(|PGL_n(q)|, |PSL_n(q)|)."""
    pgl = q ** (n * (n - 1) // 2)
    for i in range(2, n + 1):
        pgl *= q**i - 1
    return pgl, pgl // math.gcd(n, q - 1)


@dataclass
class GroupInvariants:
    order: int
    exponent: int
    center_order: int
    derived_order: int
    is_abelian: bool
    abelian_invariant_factors: list | None
    nilpotency_class: int | None
    max_abelian_profile: list | None
    order_histogram: dict

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def abelian_invariant_factors(G: FinGroup) -> list[int]:
    """Invariant factors d1 | d2 | ... of an abelian group."""
    if not G.is_abelian:
        raise ValueError("group is not abelian")
    orders = G.element_orders
    N = G.order
    by_prime = {}
    for p in _prime_divisors(N):
        # r_k = number of cyclic p-factors of exponent >= k
        exps = []
        prev = 0
        k = 1
        while True:
            cnt = int(np.sum(np.array([_p_part(o, p) for o in orders.tolist()]) <= p**k))
            logc = round(math.log(cnt, p))
            r = logc - prev
            if r == 0:
                break
            exps.append(r)
            prev = logc
            k += 1
        # exps[k-1] = #factors with exponent >= k
        factors = []
        for k in range(len(exps)):
            nxt = exps[k + 1] if k + 1 < len(exps) else 0
            factors += [p ** (k + 1)] * (exps[k] - nxt)
        by_prime[p] = sorted(factors, reverse=True)
    width = max((len(v) for v in by_prime.values()), default=0)
    inv = [1] * width
    for fs in by_prime.values():
        for i, f in enumerate(fs):
            inv[i] *= f
    return sorted(inv)


def _p_part(n: int, p: int) -> int:
    r = 1
    while n % p == 0:
        n //= p
        r *= p
    return r


def lower_central_series(G: FinGroup, limit: int = 20) -> list[int]:
    orders = [G.order]
    cur = G
    for _ in range(limit):
        if cur.order == 1:
            break
        hg = G.indices_of(cur)[cur.gens] if cur.gens else []
        comms = set()
        for h in hg:
            comms.update(G.commutator(np.full(len(G.gens), h), np.array(G.gens)).tolist())
        comms.discard(G.identity)
        nxt = G.normal_closure(sorted(comms)) if comms else trivial_group(G.F, G.n)
        if nxt.order == cur.order:
            break
        orders.append(nxt.order)
        cur = nxt
    return orders


def nilpotency_class(G: FinGroup) -> int | None:
    series = lower_central_series(G)
    return len(series) - 1 if series[-1] == 1 else None


def _is_prime_power(n: int) -> bool:
    return n > 1 and len(_prime_divisors(n)) == 1


def invariants(G: FinGroup, with_max_abelian: bool = True) -> GroupInvariants:
    if G.order > MAX_ABELIAN_SEARCH:
        raise GroupTooLarge(f"order {G.order} exceeds {MAX_ABELIAN_SEARCH}")
    ab = G.is_abelian
    hist = Counter(G.element_orders.tolist())
    prof = None
    if with_max_abelian:
        prof = sorted(H.order for H in G.maximal_abelian_subgroups())
    return GroupInvariants(
        order=G.order,
        exponent=G.exponent,
        center_order=len(G.center_indices),
        derived_order=G.derived_subgroup().order,
        is_abelian=ab,
        abelian_invariant_factors=abelian_invariant_factors(G) if ab else None,
        nilpotency_class=nilpotency_class(G) if _is_prime_power(G.order) or G.order == 1 else None,
        max_abelian_profile=prof,
        order_histogram={str(k): v for k, v in sorted(hist.items())},
    )


def fingerprint_equal(a, b) -> bool:
    """True when the invariant records agree (inconclusive for isomorphism);
    False certifies that the groups are not isomorphic."""
    ia = a if isinstance(a, GroupInvariants) else invariants(a)
    ib = b if isinstance(b, GroupInvariants) else invariants(b)
    return asdict(ia) == asdict(ib)
