"""Intersection multisets of subspaces with a Desarguesian spread, partition
counts and direction sets."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..errors import SpaceTooLarge, WrongSize
from ..gf import field_of_order
from ..projgeom import encode_vectors, gaussian_binomial, intersection_dims_batch, subspace_bases
from .heisenberg import _spread

MAX_ZETA_SPACE = 2**16
MAX_EVEN_SPACE = 2**20
CHUNK = 20000


def _spread_dims(p: int, n: int, bases: np.ndarray) -> np.ndarray:
    sp = _spread(p, n)
    out = np.empty((len(bases), sp.size), dtype=np.int64)
    for s in range(0, len(bases), CHUNK):
        out[s : s + CHUNK] = intersection_dims_batch(bases[s : s + CHUNK], sp.lookup, p, sp.size)
    return out


def _non_spread(dims: np.ndarray, n: int) -> np.ndarray:
    return ~np.any(dims == n, axis=1)


@dataclass
class MultisetSummary:
    p: int
    n: int
    subspaces: int
    dimension_multisets: set = field(repr=False)
    point_multisets: set = field(repr=False)

    @property
    def zeta(self) -> int:
        return len(self.dimension_multisets)


def distinct_multisets(p: int, n: int) -> MultisetSummary:
    """S(alpha) over all (n-1)-spaces alpha of PG(2n-1, p) outside the spread.

    Dimension multisets drop zeros; point multisets record |alpha meet pi_i|
    as projective point counts.
    """
    if p ** (2 * n) > MAX_ZETA_SPACE:
        raise SpaceTooLarge(f"GF({p})^{2 * n} exceeds the exhaustive bound")
    bases = subspace_bases(p, 2 * n, n)
    dims = _spread_dims(p, n, bases)
    dims = dims[_non_spread(dims, n)]
    uniq = np.unique(np.sort(dims, axis=1)[:, ::-1], axis=0)
    dsets = {tuple(int(d) for d in row if d) for row in uniq}
    psets = {tuple((p**d - 1) // (p - 1) for d in ms) for ms in dsets}
    return MultisetSummary(p, n, len(dims), dsets, psets)


def zeta(p: int, n: int) -> int:
    return distinct_multisets(p, n).zeta


# --------------------------------------------------------------------------
# even characteristic


@dataclass
class EvenCharReport:
    n: int
    count: int
    expected: int
    multisets: list
    exhaustive: bool
    examined: int


def _pair_lookup(n: int) -> np.ndarray:
    """Part label of each nonzero vector of GF(2)^(2n): 0 = pi, 1 = pi', 2 = neither.

    pi spans the first n coordinates and pi' the last n.
    """
    N = 2 * n
    codes = np.arange(2**N)
    hi = codes >> n  # first n coordinates (most significant)
    lo = codes & (2**n - 1)
    lab = np.full(2**N, 2, dtype=np.int64)
    lab[(lo == 0) & (hi != 0)] = 0
    lab[(hi == 0) & (lo != 0)] = 1
    lab[0] = -1
    return lab


def _pair_dims(n: int, bases: np.ndarray) -> np.ndarray:
    lookup = _pair_lookup(n)
    out = np.empty((len(bases), 3), dtype=np.int64)
    for s in range(0, len(bases), CHUNK):
        out[s : s + CHUNK] = intersection_dims_batch(bases[s : s + CHUNK], lookup, 2, 3)
    return out[:, :2]


def even_char_invariant_count(n: int, samples: int = 20000, seed: int = 0) -> EvenCharReport:
    """Distinct {dim(alpha meet pi), dim(alpha meet pi')} with both parts nonzero
    and summing to n, over (n-1)-spaces alpha other than pi and pi'.

    Exhaustive for n <= 4; for larger n the subspaces are sampled as a random
    subspace of pi plus a random subspace of pi' plus random vectors.
    """
    expected = math.ceil((n - 1) / 2)
    total = gaussian_binomial(2 * n, n, 2)
    if total <= 2_000_000:
        bases = subspace_bases(2, 2 * n, n)
        exhaustive = True
    else:
        if 2 ** (2 * n) > MAX_EVEN_SPACE:
            raise SpaceTooLarge(f"PG({2 * n - 1},2) exceeds the sampling bound")
        bases = _sample_pair_subspaces(n, samples, seed)
        exhaustive = False
    dims = _pair_dims(n, bases)
    keep = (dims[:, 0] >= 1) & (dims[:, 1] >= 1) & (dims.sum(axis=1) == n)
    found = sorted({tuple(sorted(map(int, r))) for r in dims[keep]})
    return EvenCharReport(n, len(found), expected, found, exhaustive, len(bases))


def _sample_pair_subspaces(n: int, samples: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < samples:
        a = int(rng.integers(0, n + 1))
        b = int(rng.integers(0, n + 1 - a))
        rows = []
        if a:
            rows.append(np.concatenate([rng.integers(0, 2, (a, n)), np.zeros((a, n), int)], axis=1))
        if b:
            rows.append(np.concatenate([np.zeros((b, n), int), rng.integers(0, 2, (b, n))], axis=1))
        rest = n - a - b
        if rest:
            rows.append(rng.integers(0, 2, (rest, 2 * n)))
        M = np.concatenate(rows) % 2
        if _rank2(M) == n:
            out.append(M)
    return np.array(out)


def _rank2(M) -> int:
    from .cohomology import rank_mod_p

    return rank_mod_p(M, 2)


# --------------------------------------------------------------------------
# partitions


@lru_cache(maxsize=None)
def _count(n: int, largest: int) -> int:
    if n == 0:
        return 1
    return sum(_count(n - k, k) for k in range(min(n, largest), 0, -1))


def partitions(n: int) -> list[tuple[int, ...]]:
    """Unordered partitions of n, parts in decreasing order."""
    if n > 60:
        raise ValueError("partition enumeration is bounded to n <= 60")

    def gen(m, largest):
        if m == 0:
            yield ()
            return
        for k in range(min(m, largest), 0, -1):
            for rest in gen(m - k, k):
                yield (k,) + rest

    return list(gen(n, n))


def partition_count(n: int) -> int:
    if n > 60:
        raise ValueError("partition counting is bounded to n <= 60")
    return _count(n, n)


def hr_estimate(n: int) -> float:
    """exp(pi sqrt(2n/3)) / (4 n sqrt 3)."""
    return math.exp(math.pi * math.sqrt(2 * n / 3)) / (4 * n * math.sqrt(3))


def partition_witness_search(p: int, n: int) -> dict:
    """For each nontrivial partition of n, an (n-1)-space alpha spanned by its
    intersections with spread elements of the given dimensions, or None."""
    if p ** (2 * n) > MAX_ZETA_SPACE:
        raise SpaceTooLarge(f"GF({p})^{2 * n} exceeds the exhaustive bound")
    targets = [pt for pt in partitions(n) if len(pt) > 1]
    bases = subspace_bases(p, 2 * n, n)
    dims = _spread_dims(p, n, bases)
    nonspread = np.flatnonzero(_non_spread(dims, n))
    sp = _spread(p, n)
    coeffs = np.array(list(itertools.product(range(p), repeat=n)), dtype=np.int64)[1:]
    result = {pt: None for pt in targets}
    for a in nonspread:
        open_targets = [pt for pt in targets if result[pt] is None]
        if not open_targets:
            break
        row = dims[a]
        have = sorted(row[row > 0].tolist(), reverse=True)
        for pt in open_targets:
            if not _submultiset(pt, have):
                continue
            vecs = (coeffs @ bases[a].astype(np.int64)) % p
            parts = sp.lookup[encode_vectors(vecs, p)]
            w = _witness(pt, row, parts, vecs, p, n)
            if w is not None:
                result[pt] = {"alpha": bases[a].tolist(), "spread_elements": w}
    return result


def _submultiset(small, big) -> bool:
    from collections import Counter

    cs, cb = Counter(small), Counter(big)
    return all(cb[k] >= v for k, v in cs.items())


def _witness(pt, row, parts, vecs, p, n):
    from .cohomology import rank_mod_p

    by_dim = {}
    for i, d in enumerate(row.tolist()):
        if d:
            by_dim.setdefault(d, []).append(i)
    need = {}
    for d in pt:
        need[d] = need.get(d, 0) + 1
    pools = [list(itertools.combinations(by_dim.get(d, []), k)) for d, k in sorted(need.items())]
    for choice in itertools.product(*pools):
        idx = [i for grp in choice for i in grp]
        rows = vecs[np.isin(parts, idx)]
        if rank_mod_p(rows, p) == n:
            return sorted(idx)
    return None


# --------------------------------------------------------------------------
# directions


def directions_of_set(U, q: int) -> set:
    """Directions of secants of a set of q affine points (X, Y) of AG(2, q).

    A direction is the slope dY/dX as a field element, or ``"inf"``.
    """
    F = field_of_order(q)
    U = [tuple(int(c) for c in u) for u in U]
    if len(set(U)) != q:
        raise WrongSize(f"expected {q} distinct points, got {len(set(U))}")
    dirs = set()
    for (x1, y1), (x2, y2) in itertools.combinations(U, 2):
        dx, dy = F.sub(x2, x1), F.sub(y2, y1)
        dirs.add("inf" if dx == 0 else F.div(dy, dx))
    return dirs
