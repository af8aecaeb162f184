"""Panel-regular lattice presentations Gamma_1 = (S * S') / <[S_L(j), S'_L'(j)]>
built from two Singer groups of a quadrangle."""
from __future__ import annotations

import json
import math
import re
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import MatchingInvalid, NoMatching, NotSinger, UnknownFormat
from .incidence import IncidenceStructure
from .matgroup import Action, FinGroup, abelian_invariant_factors, invariants

FORMATS = ("gap", "magma", "plain")


@dataclass
class LocalData:
    S: FinGroup
    x: int
    lam: list[int]
    stabilizers: list[FinGroup]
    keys: list[tuple]
    orbit_sizes: list[int]

    @property
    def t(self) -> int:
        return len(self.lam) - 1

    def profile(self) -> list[dict]:
        return [
            {"line": int(L), "order": G.order, "type": _key_str(k)}
            for L, G, k in zip(self.lam, self.stabilizers, self.keys)
        ]


def _key_str(k: tuple) -> str:
    if k[0] == "abelian":
        return "C" + "xC".join(map(str, k[1])) if k[1] else "1"
    return "fingerprint:" + k[1]


def _jsonable(v):
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    return v


def _stabilizer_key(G: FinGroup) -> tuple:
    if G.is_abelian:
        return ("abelian", tuple(abelian_invariant_factors(G)))
    inv = invariants(G, with_max_abelian=False)
    return ("fingerprint", inv.to_json())


def local_data(GQ: IncidenceStructure, S: FinGroup, x: int, coords, rep=None) -> LocalData:
    """Stabilizers in S of the lines through x; ``coords`` are the projective
    coordinates of the points of GQ in point order."""
    if S.order != GQ.npoints:
        raise NotSinger(f"|S| = {S.order} but there are {GQ.npoints} points")
    act = Action(S, coords, rep=rep)
    perms = act.perms
    if len(np.unique(perms[:, x])) != GQ.npoints:
        raise NotSinger("S is not transitive on points", witness={"orbit": int(len(np.unique(perms[:, x])))})
    lam = [int(j) for j in GQ.lines_through(x)]
    lkey = {tuple(sorted(map(int, L))): j for j, L in enumerate(GQ.lines)}
    stabs, keys, orbits = [], [], []
    for j in lam:
        L = np.sort(np.asarray(GQ.lines[j]))
        imgs = np.sort(perms[:, L], axis=1)
        fixed = np.flatnonzero(np.all(imgs == L, axis=1))
        orbit = {lkey[tuple(r)] for r in np.unique(imgs, axis=0).tolist()}
        St = S.subgroup(fixed, name=f"stab({j})")
        if S.order != St.order * len(orbit):
            raise NotSinger("orbit-stabilizer count failed", witness={"line": j})
        stabs.append(St)
        keys.append(_stabilizer_key(St))
        orbits.append(len(orbit))
    return LocalData(S, x, lam, stabs, keys, orbits)


@dataclass
class Matching:
    sigma: list[int]
    level: str

    def to_json(self) -> dict:
        return {"sigma": self.sigma, "level": self.level}


def check_local_iso(L: LocalData, L2: LocalData) -> Matching:
    """A bijection sigma with S_lam(j) isomorphic to S'_lam'(sigma(j)); the
    identity is preferred wherever it works."""
    if L.t != L2.t:
        raise NoMatching(f"t differs: {L.t} vs {L2.t}")
    ca, cb = Counter(L.keys), Counter(L2.keys)
    if ca != cb:
        diff = {"only_first": _counter_json(ca - cb), "only_second": _counter_json(cb - ca)}
        raise NoMatching("stabilizer multisets differ", witness=diff)
    free = list(range(len(L2.keys)))
    sigma = [-1] * len(L.keys)
    for j, k in enumerate(L.keys):
        if L2.keys[j] == k and j in free:
            sigma[j] = j
            free.remove(j)
    for j, k in enumerate(L.keys):
        if sigma[j] < 0:
            jj = next(i for i in free if L2.keys[i] == k)
            sigma[j] = jj
            free.remove(jj)
    fp = any(k[0] == "fingerprint" for k in L.keys)
    return Matching(sigma, "fingerprint-level only" if fp else "invariant-factors")


def _counter_json(c: Counter) -> list:
    return [[_jsonable(k), v] for k, v in sorted(c.items(), key=repr)]


Word = tuple  # of (generator index, exponent +1/-1)


@dataclass
class Presentation:
    generators: list[str]
    relators: list[Word]
    table_relators: int
    commutator_relators: int
    meta: dict = field(default_factory=dict)

    def words(self) -> list[str]:
        return [_word_str(self.generators, w, "plain") for w in self.relators]


def _table_relators(G: FinGroup, offset: int) -> tuple[list[Word], dict]:
    """g h (gh)^-1, or g h when gh = 1, over ordered pairs of nontrivial elements."""
    nt = np.flatnonzero(np.arange(G.order) != G.identity)
    gid = {int(e): offset + k for k, e in enumerate(nt)}
    out = []
    for a in nt:
        prods = G.mul(np.full(len(nt), a), nt)
        for b, c in zip(nt.tolist(), prods.tolist()):
            w = [(gid[int(a)], 1), (gid[b], 1)]
            if c != G.identity:
                w.append((gid[c], -1))
            out.append(tuple(w))
    return out, gid


def gamma1(L: LocalData, L2: LocalData, matching: Matching) -> Presentation:
    sigma = matching.sigma
    if sorted(sigma) != list(range(len(L2.lam))) or len(sigma) != len(L.lam):
        raise MatchingInvalid(f"sigma is not a bijection of the line sets: {sigma}")
    for j, jj in enumerate(sigma):
        if L.keys[j] != L2.keys[jj]:
            raise MatchingInvalid(f"stabilizers at line {j} and its image {jj} are not isomorphic")
    S, S2 = L.S, L2.S
    gens = [f"a{i}" for i in range(S.order - 1)] + [f"b{i}" for i in range(S2.order - 1)]
    rel_a, ga = _table_relators(S, 0)
    rel_b, gb = _table_relators(S2, S.order - 1)
    comm = []
    for j, jj in enumerate(sigma):
        ua = L.S.indices_of(L.stabilizers[j])
        vb = L2.S.indices_of(L2.stabilizers[jj])
        for u in ua.tolist():
            if u == S.identity:
                continue
            for v in vb.tolist():
                if v == S2.identity:
                    continue
                U, V = ga[u], gb[v]
                comm.append(((U, -1), (V, -1), (U, 1), (V, 1)))
    P = Presentation(gens, rel_a + rel_b + comm, len(rel_a) + len(rel_b), len(comm))
    P.meta = {
        "generators": len(gens),
        "relator_count": len(P.relators),
        "commutator_relators": len(comm),
        "matching": matching.to_json(),
        "stabilizer_profile": {"first": L.profile(), "second": L2.profile()},
    }
    return P


def expected_commutator_count(L: LocalData, L2: LocalData, matching: Matching) -> int:
    return sum((L.stabilizers[j].order - 1) * (L2.stabilizers[jj].order - 1) for j, jj in enumerate(matching.sigma))


# --------------------------------------------------------------------------
# homology and abelianization


def elementary_abelian_rank(G: FinGroup) -> tuple[int, int] | None:
    """(p, n) when G is elementary abelian of order p^n, else None."""
    if G.order == 1 or not G.is_abelian:
        return None
    e = G.exponent
    if any(e % d == 0 for d in range(2, e)):
        return None
    n = round(math.log(G.order, e))
    return (e, n) if e**n == G.order else None


def schur_order(G: FinGroup) -> int | None:
    pn = elementary_abelian_rank(G)
    if pn is None:
        return None
    p, n = pn
    return p ** (n * (n - 1) // 2)


def homology_metadata(S: FinGroup, S2: FinGroup) -> dict:
    a, b = schur_order(S), schur_order(S2)
    unknown = "unknown (formula out of scope)"
    return {
        "H2_S": a if a is not None else unknown,
        "H2_S_prime": b if b is not None else unknown,
        "H2_Gamma1": a * b if a is not None and b is not None else unknown,
        "rational_homology_vanishes_above_0": True,
    }


def relation_matrix(P: Presentation) -> np.ndarray:
    M = np.zeros((len(P.relators), len(P.generators)), dtype=np.int64)
    for r, w in enumerate(P.relators):
        for g, e in w:
            M[r, g] += e
    return M


def abelianization(P: Presentation) -> dict:
    """Smith normal form of the exponent-sum matrix."""
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form

    M = relation_matrix(P)
    M = np.unique(M[np.any(M != 0, axis=1)], axis=0)
    D = smith_normal_form(Matrix(M.tolist()), domain=ZZ)
    diag = [abs(int(D[i, i])) for i in range(min(D.shape))]
    nz = [d for d in diag if d]
    free_rank = len(P.generators) - len(nz)
    torsion = sorted(d for d in nz if d != 1)
    return {
        "free_rank": free_rank,
        "torsion": torsion,
        "finite": free_rank == 0,
    }


# --------------------------------------------------------------------------
# export


def _word_str(gens, w, fmt) -> str:
    if fmt == "plain":
        return " ".join(gens[g] if e == 1 else f"{gens[g]}^-1" for g, e in w)
    return "*".join(gens[g] if e == 1 else f"{gens[g]}^-1" for g, e in w)


def export_presentation(P: Presentation, fmt: str = "gap") -> str:
    if fmt not in FORMATS:
        raise UnknownFormat(f"unknown format {fmt!r}; expected one of {FORMATS}")
    if not P.relators:
        raise UnknownFormat("refusing to export a presentation without relators")
    gens = P.generators
    if fmt == "plain":
        lines = [f"generators {len(gens)}", f"relators {len(P.relators)}", " ".join(gens)]
        lines += [_word_str(gens, w, "plain") for w in P.relators]
        return "\n".join(lines) + "\n"
    rels = ",\n  ".join(_word_str(gens, w, fmt) for w in P.relators)
    if fmt == "gap":
        names = ", ".join(f'"{g}"' for g in gens)
        head = f"F := FreeGroup([{names}]);;\n"
        head += "".join(f"{g} := F.{i + 1};;\n" for i, g in enumerate(gens))
        return head + f"rels := [\n  {rels}\n];;\nG := F / rels;;\n"
    names = ", ".join(gens)
    return f"G<{names}> := Group<{names} |\n  {rels}\n>;\n"


def parse_plain(text: str) -> Presentation:
    lines = text.strip("\n").split("\n")
    try:
        ng = int(lines[0].split()[1])
        nr = int(lines[1].split()[1])
    except (IndexError, ValueError) as exc:
        raise UnknownFormat("not a plain presentation") from exc
    gens = lines[2].split()
    if len(gens) != ng or len(lines) != 3 + nr:
        raise UnknownFormat("header counts do not match the body")
    pos = {g: i for i, g in enumerate(gens)}
    rels = []
    for ln in lines[3:]:
        w = []
        for tok in ln.split():
            inv = tok.endswith("^-1")
            name = tok[:-3] if inv else tok
            if name not in pos:
                raise UnknownFormat(f"unknown generator {name!r}")
            w.append((pos[name], -1 if inv else 1))
        rels.append(tuple(w))
    return Presentation(gens, rels, 0, 0)


def parse_gap(text: str) -> Presentation:
    """Read back the output of ``export_presentation(P, "gap")``."""
    m = re.search(r"FreeGroup\(\[(.*?)\]\)", text, re.S)
    r = re.search(r"rels := \[(.*?)\];;", text, re.S)
    if not m or not r:
        raise UnknownFormat("not a GAP presentation")
    gens = re.findall(r'"([^"]+)"', m.group(1))
    pos = {g: i for i, g in enumerate(gens)}
    rels = []
    for word in r.group(1).split(","):
        w = []
        for tok in word.strip().split("*"):
            inv = tok.endswith("^-1")
            name = tok[:-3] if inv else tok
            if name not in pos:
                raise UnknownFormat(f"unknown generator {name!r}")
            w.append((pos[name], -1 if inv else 1))
        rels.append(tuple(w))
    return Presentation(gens, rels, 0, 0)


def sidecar(P: Presentation, h2: dict) -> str:
    return json.dumps(
        {
            "schema": 1,
            "generators": len(P.generators),
            "relator_count": len(P.relators),
            "stabilizer_profile": P.meta.get("stabilizer_profile"),
            "h2_metadata": h2,
        },
        indent=2,
        sort_keys=True,
    )
