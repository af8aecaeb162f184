"""Finite incidence structures and generalized quadrangle checks.

An ``IncidenceStructure`` is a list of lines, each a sorted array of point
ids, together with provenance labels for points and lines.  The sparse
point-by-line incidence matrix and the point collinearity matrix are built
lazily.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import shortest_path

from .errors import (
    AxiomViolation,
    ContainsDigon,
    EmptySet,
    NotCertified,
    NotRegular,
    NotSquareOrder,
    NotUniformDegrees,
    SpaceTooLarge,
)

VERIFY_BUDGET = 10**9


@dataclass
class GQCertificate:
    s: int
    t: int
    thick: bool
    npoints: int
    nlines: int
    checked_axioms: list = field(default_factory=list)

    def to_json(self) -> dict:
        d = asdict(self)
        d.pop("checked_axioms")
        return d


class IncidenceStructure:
    """Point-line geometry on points ``0..npoints-1``."""

    def __init__(self, npoints: int, lines, point_labels=None, line_labels=None):
        self.npoints = int(npoints)
        self.lines = [np.unique(np.asarray(L, dtype=np.int64)) for L in lines]
        self.nlines = len(self.lines)
        self.point_labels = list(point_labels) if point_labels is not None else list(range(self.npoints))
        self.line_labels = list(line_labels) if line_labels is not None else list(range(self.nlines))
        self.certificate: GQCertificate | None = None
        for j, L in enumerate(self.lines):
            if len(L) < 2:
                raise AxiomViolation(f"line {j} has fewer than 2 points", witness={"line": j})
            if L[0] < 0 or L[-1] >= self.npoints:
                raise AxiomViolation(f"line {j} has an out-of-range point", witness={"line": j})
        seen = {}
        for j, L in enumerate(self.lines):
            key = L.tobytes()
            if key in seen:
                raise AxiomViolation("repeated line", witness={"lines": [seen[key], j]})
            seen[key] = j

    def __repr__(self):
        return f"IncidenceStructure(npoints={self.npoints}, nlines={self.nlines})"

    @cached_property
    def inc(self) -> sp.csr_matrix:
        """Sparse point x line incidence matrix (int8)."""
        rows = np.concatenate(self.lines) if self.lines else np.zeros(0, dtype=np.int64)
        cols = np.repeat(np.arange(self.nlines), [len(L) for L in self.lines])
        data = np.ones(len(rows), dtype=np.int32)
        return sp.csr_matrix((data, (rows, cols)), shape=(self.npoints, self.nlines))

    @cached_property
    def point_degrees(self) -> np.ndarray:
        return np.asarray(self.inc.sum(axis=1)).ravel()

    @cached_property
    def line_sizes(self) -> np.ndarray:
        return np.array([len(L) for L in self.lines], dtype=np.int64)

    @cached_property
    def collinearity(self) -> np.ndarray:
        """Dense boolean matrix of collinearity, with every point collinear to itself."""
        if self.npoints**2 > 4 * 10**8:
            raise SpaceTooLarge(f"collinearity matrix for {self.npoints} points")
        A = (self.inc @ self.inc.T).toarray() > 0
        np.fill_diagonal(A, True)
        return A

    def lines_through(self, x: int) -> np.ndarray:
        return self.inc[x].indices.copy()

    def line_index(self) -> dict:
        return {L.tobytes(): j for j, L in enumerate(self.lines)}

    def incidence_pairs(self):
        for j, L in enumerate(self.lines):
            for x in L:
                yield int(x), j

    # -- export ---------------------------------------------------------------
    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["point_id", "line_id"])
        for x, j in sorted(self.incidence_pairs()):
            w.writerow([x, j])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "IncidenceStructure":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or [c.strip() for c in rows[0]] != ["point_id", "line_id"]:
            raise ValueError("expected header point_id,line_id")
        pairs = [(int(a), int(b)) for a, b in rows[1:] if a.strip()]
        npoints = max(a for a, _ in pairs) + 1
        nlines = max(b for _, b in pairs) + 1
        lines = [[] for _ in range(nlines)]
        for a, b in pairs:
            lines[b].append(a)
        return cls(npoints, lines)


# --------------------------------------------------------------------------
# verification


def verify_gq(S: IncidenceStructure, method: str = "antiflag") -> GQCertificate:
    """Certify that ``S`` is a generalized quadrangle and return its order.

    ``method="antiflag"`` checks that each point off a line is collinear with
    exactly one point of it.  ``method="girth"`` instead checks that the
    incidence graph has girth 8 and diameter 4 by shortest paths.
    """
    if S.npoints * S.nlines > VERIFY_BUDGET:
        raise SpaceTooLarge(f"{S.npoints} x {S.nlines} incidence exceeds the verification budget")
    sizes = S.line_sizes
    degs = S.point_degrees
    if len(set(sizes.tolist())) != 1 or len(set(degs.tolist())) != 1:
        bad_line = int(np.argmax(sizes != sizes[0])) if len(set(sizes.tolist())) > 1 else None
        bad_point = int(np.argmax(degs != degs[0])) if len(set(degs.tolist())) > 1 else None
        raise NotUniformDegrees("line sizes or point degrees vary", witness={"line": bad_line, "point": bad_point})
    s = int(sizes[0]) - 1
    t = int(degs[0]) - 1
    I = S.inc
    checked = ["degrees"]

    LL = (I.T @ I).tocoo()
    off = (LL.row != LL.col) & (LL.data > 1)
    if off.any():
        k = int(np.argmax(off))
        raise ContainsDigon("two lines share two points", witness={"lines": [int(LL.row[k]), int(LL.col[k])]})
    checked.append("no_digons")

    if method == "antiflag":
        A = (I @ I.T).tolil()
        A.setdiag(0)
        A = A.tocsr()
        N = (A @ I).toarray()
        Id = I.toarray().astype(bool)
        bad = (~Id) & (N != 1)
        if bad.any():
            x, L = (int(v) for v in np.argwhere(bad)[0])
            raise AxiomViolation(
                f"point {x} is collinear with {int(N[x, L])} points of line {L}",
                witness={"point": x, "line": L, "count": int(N[x, L])},
            )
        checked.append("antiflag")
    elif method == "girth":
        _check_girth_diameter(S)
        checked.append("girth8_diameter4")
    else:
        raise ValueError(f"unknown method {method!r}")

    cert = GQCertificate(s, t, s > 1 and t > 1, S.npoints, S.nlines, checked)
    S.certificate = cert
    return cert


def _check_girth_diameter(S: IncidenceStructure) -> None:
    P, L = S.npoints, S.nlines
    I = S.inc
    graph = sp.bmat([[None, I], [I.T, None]]).tocsr()
    dist = shortest_path(graph, unweighted=True, directed=False)
    if np.isinf(dist).any() or dist.max() != 4:
        raise AxiomViolation("incidence graph does not have diameter 4", witness={"diameter": float(dist.max())})
    # a 6-cycle is a triangle of pairwise collinear points not on one line
    A = (I @ I.T).toarray() > 0
    np.fill_diagonal(A, False)
    common = A.astype(np.int64) @ A.astype(np.int64)
    expected = S.line_sizes[0] - 2
    bad = A & (common != expected)
    if bad.any():
        x, y = (int(v) for v in np.argwhere(bad)[0])
        raise AxiomViolation("incidence graph has a 6-cycle", witness={"points": [x, y]})


def require_certificate(S: IncidenceStructure) -> GQCertificate:
    if S.certificate is None:
        raise NotCertified("structure has no GQ certificate; run verify_gq first")
    return S.certificate


# --------------------------------------------------------------------------
# perps and regularity


def perp(S: IncidenceStructure, A) -> np.ndarray:
    """Sorted ids of points collinear with every point of ``A`` (x ~ x allowed)."""
    A = np.atleast_1d(np.asarray(list(A) if not isinstance(A, np.ndarray) else A, dtype=np.int64))
    if A.size == 0:
        raise EmptySet("perp of the empty set")
    return np.flatnonzero(S.collinearity[A].all(axis=0))


def perp_perp(S: IncidenceStructure, A) -> np.ndarray:
    return perp(S, perp(S, A))


def is_regular_point(S: IncidenceStructure, x: int) -> bool:
    cert = require_certificate(S)
    C = S.collinearity
    for y in np.flatnonzero(~C[x]):
        if len(perp_perp(S, [x, y])) != cert.t + 1:
            return False
    return True


def hyperbolic_lines(S: IncidenceStructure, x: int) -> list[np.ndarray]:
    """The distinct sets ``{x, y}^perp-perp`` for y not collinear with x."""
    C = S.collinearity
    out = {}
    for y in np.flatnonzero(~C[x]):
        hl = perp_perp(S, [x, int(y)])
        out.setdefault(hl.tobytes(), hl)
    return list(out.values())


def payne_derive(S: IncidenceStructure, x: int) -> IncidenceStructure:
    """The Payne derivative of ``S`` at a regular point ``x``."""
    cert = require_certificate(S)
    if cert.s != cert.t:
        raise NotSquareOrder(f"order ({cert.s},{cert.t}) is not of the form (s,s)")
    if not is_regular_point(S, x):
        raise NotRegular(f"point {x} is not regular", witness={"point": x})
    C = S.collinearity
    keep = np.flatnonzero(~C[x])
    new_id = np.full(S.npoints, -1, dtype=np.int64)
    new_id[keep] = np.arange(len(keep))
    lines, labels = [], []
    for j, L in enumerate(S.lines):
        if x in L:
            continue
        lines.append(new_id[L[new_id[L] >= 0]])
        labels.append(("line", S.line_labels[j]))
    for hl in hyperbolic_lines(S, x):
        rest = hl[hl != x]
        lines.append(new_id[rest])
        labels.append(("hyperbolic", S.point_labels[int(rest[0])]))
    return IncidenceStructure(len(keep), lines, [S.point_labels[i] for i in keep], labels)


def affine_plane_from_regular_point(S: IncidenceStructure, x: int) -> IncidenceStructure:
    """The affine plane whose points are the sets {x,z}^perp (z not collinear
    with x) and whose lines are the points of x^perp other than x."""
    cert = require_certificate(S)
    if cert.s != cert.t:
        raise NotSquareOrder(f"order ({cert.s},{cert.t}) is not of the form (s,s)")
    if not is_regular_point(S, x):
        raise NotRegular(f"point {x} is not regular", witness={"point": x})
    C = S.collinearity
    line_pts = np.array([u for u in np.flatnonzero(C[x]) if u != x])
    col = {int(u): k for k, u in enumerate(line_pts)}
    traces = {}
    for z in np.flatnonzero(~C[x]):
        tr = perp(S, [x, int(z)])
        traces.setdefault(tr.tobytes(), (tr, int(z)))
    plane_pts = list(traces.values())
    members = [[] for _ in line_pts]
    for i, (tr, _) in enumerate(plane_pts):
        for u in tr:
            members[col[int(u)]].append(i)
    plane = IncidenceStructure(
        len(plane_pts),
        members,
        point_labels=[("trace", S.point_labels[z]) for _, z in plane_pts],
        line_labels=[S.point_labels[int(u)] for u in line_pts],
    )
    check_affine_plane(plane)
    return plane


def check_affine_plane(A: IncidenceStructure) -> int:
    """Verify the affine plane axioms and return the order."""
    n = int(A.line_sizes[0])
    if (A.line_sizes != n).any() or A.npoints != n * n or A.nlines != n * n + n:
        raise AxiomViolation("wrong counts for an affine plane", witness={"npoints": A.npoints, "nlines": A.nlines})
    pair = (A.inc @ A.inc.T).toarray()
    np.fill_diagonal(pair, 1)
    if (pair != 1).any():
        x, y = (int(v) for v in np.argwhere(pair != 1)[0])
        raise AxiomViolation("two points not on exactly one line", witness={"points": [x, y]})
    classes = parallel_classes(A)
    if len(classes) != n + 1 or any(len(c) != n for c in classes):
        raise AxiomViolation("parallel classes malformed", witness={"sizes": [len(c) for c in classes]})
    return n


def parallel_classes(A: IncidenceStructure) -> list[list[int]]:
    """Group lines into classes of pairwise disjoint lines."""
    meets = (A.inc.T @ A.inc).toarray() > 0
    seen = np.zeros(A.nlines, dtype=bool)
    out = []
    for j in range(A.nlines):
        if seen[j]:
            continue
        cls = np.flatnonzero(~meets[j])
        cls = sorted(set(cls.tolist()) | {j})
        seen[cls] = True
        out.append(cls)
    return out


def grid(n: int) -> IncidenceStructure:
    """The n x n grid: points are cells, lines are rows and columns."""
    idx = np.arange(n * n).reshape(n, n)
    lines = [idx[r] for r in range(n)] + [idx[:, c] for c in range(n)]
    return IncidenceStructure(n * n, lines, line_labels=[("row", r) for r in range(n)] + [("col", c) for c in range(n)])


def certificate_json(cert: GQCertificate) -> str:
    return json.dumps(cert.to_json(), sort_keys=True)
