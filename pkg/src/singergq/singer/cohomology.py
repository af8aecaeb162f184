"""Second cohomology of C_p^n with trivial coefficients in C_p^n.

``h2_order_paper`` evaluates the closed form exponent n(n-1)(n+2)/2;
``h2_bruteforce`` solves the cocycle and coboundary systems over GF(p) and
is the ground truth when the two disagree.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..errors import DivisionByZero, SystemTooLarge

MAX_VARIABLES = 2**12


def h2_order_paper(p: int, n: int) -> int:
    return p ** (n * (n - 1) * (n + 2) // 2)


def schur_multiplier_order(p: int, n: int) -> int:
    """|M(C_p^n)| = p^(n(n-1)/2)."""
    return p ** (n * (n - 1) // 2)


def h2_oracle_order(p: int, n: int) -> int:
    """Standard value p^(n * n(n+1)/2): H^2(C_p^n, F_p) has dimension n(n+1)/2."""
    return p ** (n * n * (n + 1) // 2)


def fiber_bound(p: int, n: int) -> Fraction:
    """(p^(n^2) - q^(p mod 2)) / (p^(n(n-1)(n+2)/2) - 1) with q = p^n."""
    q = p**n
    den = p ** (n * (n - 1) * (n + 2) // 2) - 1
    if den == 0:
        raise DivisionByZero("fiber bound is undefined for n = 1")
    return Fraction(p ** (n * n) - q ** (p % 2), den)


def rank_mod_p(M: np.ndarray, p: int) -> int:
    """Rank of an integer matrix over GF(p) by Gaussian elimination."""
    A = np.array(M, dtype=np.int64) % p
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if len(nz) == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        others = np.flatnonzero(A[:, c])
        others = others[others != r]
        if len(others):
            A[others] = (A[others] - np.outer(A[others, c], A[r])) % p
        r += 1
    return r


def _group_table(p: int, n: int) -> np.ndarray:
    """Addition table of C_p^n on base-p encodings."""
    N = p**n
    digits = np.array([[(g // p**k) % p for k in range(n)] for g in range(N)])
    w = p ** np.arange(n)
    s = (digits[:, None, :] + digits[None, :, :]) % p
    return (s * w).sum(axis=2)


def h2_bruteforce(p: int, n: int) -> int:
    """|H^2(C_p^n, C_p^n)| by linear algebra on cochains."""
    N = p**n
    nvars = N * N * n
    if nvars > MAX_VARIABLES:
        raise SystemTooLarge(f"{nvars} cocycle variables exceed {MAX_VARIABLES}")
    mul = _group_table(p, n)
    # scalar coefficients first, then tensor with the n coordinates of A
    idx2 = lambda g, h: g * N + h  # noqa: E731
    D2 = np.zeros((N**3, N * N), dtype=np.int64)
    r = 0
    for g in range(N):
        for h in range(N):
            for k in range(N):
                row = D2[r]
                row[idx2(h, k)] += 1
                row[idx2(mul[g, h], k)] -= 1
                row[idx2(g, mul[h, k])] += 1
                row[idx2(g, h)] -= 1
                r += 1
    D1 = np.zeros((N * N, N), dtype=np.int64)
    for g in range(N):
        for h in range(N):
            row = D1[idx2(g, h)]
            row[h] += 1
            row[mul[g, h]] -= 1
            row[g] += 1
    eye = np.eye(n, dtype=np.int64)
    D2 = np.kron(D2, eye)
    D1 = np.kron(D1, eye)
    dim_z2 = nvars - rank_mod_p(D2, p)
    dim_b2 = rank_mod_p(D1, p)
    return p ** (dim_z2 - dim_b2)
