"""Arithmetic in GF(p^h) for q = p^h <= 4096.

Elements are plain integers ``0 <= a < q`` holding the polynomial-basis
coefficients as base-p digits (``a = sum(c_i * p**i)``).  All hot paths
work on those integers or on numpy arrays of them; :class:`FieldElem` is
a thin operator-overloading wrapper for interactive use.

The reduction polynomial for each (p, h) comes from a fixed table
(:mod:`singergq._moduli`), so element encodings are reproducible.
"""
from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np

from ._moduli import MODULI
from .errors import DivisionByZero, NotInvertible, NotPrime, OrderTooLarge

MAX_ORDER = 4096
TABLE_ORDER = 256


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q = p**h``; raise :class:`NotPrime` when q is not a prime power."""
    fs = prime_factors(q) if q > 1 else []
    if len(fs) != 1:
        raise NotPrime(f"{q} is not a prime power")
    p = fs[0]
    h = round(math.log(q, p))
    if p**h != q:
        raise NotPrime(f"{q} is not a prime power")
    return p, h


# --------------------------------------------------------------------------
# dense polynomials over GF(p), coefficient lists low -> high


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, f, p):
    a = [c % p for c in a]
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    for k in range(len(a) - 1, df - 1, -1):
        c = a[k] * inv_lead % p
        if c:
            shift = k - df
            for i, fc in enumerate(f):
                a[shift + i] = (a[shift + i] - c * fc) % p
    return _trim(a[:df])


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _pmulmod(a, b, f, p):
    return _pmod(_pmul(a, b, p), f, p)


def _ppowmod(a, e, f, p):
    result = [1]
    base = _pmod(a, f, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, f, p)
        base = _pmulmod(base, base, f, p)
        e >>= 1
    return result


def _pdivmod(a, b, p):
    a = _trim(a)
    b = _trim(b)
    inv_lead = pow(b[-1], -1, p)
    quot = [0] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        quot[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bc) % p
        a = _trim(a)
    return _trim(quot), a


def _pgcd(a, b, p):
    a, b = _trim(a), _trim(b)
    while b:
        _, r = _pdivmod(a, b, p)
        a, b = b, r
    return a


def is_irreducible(f, p: int) -> bool:
    """Trial division of ``f`` by every monic polynomial of degree <= deg(f)/2."""
    f = _trim(f)
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    for d in range(1, n // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            g = list(tail) + [1]
            _, r = _pdivmod(f, g, p)
            if not r:
                return False
    return True


def _is_primitive(f, p):
    n = len(f) - 1
    order = p**n - 1
    x = [0, 1]
    if _ppowmod(x, order, f, p) != [1]:
        return False
    return all(_ppowmod(x, order // r, f, p) != [1] for r in prime_factors(order))


def _eval_poly_at(g, y, f, p):
    acc = []
    for c in reversed(g):
        acc = _pmod(_padd(_pmul(acc, y, p), [c]), f, p)
    return acc


def _padd(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


@lru_cache(maxsize=None)
def conway_polynomial(p: int, n: int) -> tuple[int, ...]:
    """Search for the Conway polynomial of degree ``n`` over GF(p).

    Candidates ``x^n - a1 x^(n-1) + a2 x^(n-2) - ...`` are tried with
    ``(a1, ..., an)`` in lexicographic order; the first primitive one that
    is compatible with every proper-divisor degree wins.  Only used to
    build and check the embedded table.
    """
    if n == 1:
        g = next(g for g in range(1, p) if p == 2 or all(pow(g, (p - 1) // r, p) != 1 for r in prime_factors(p - 1)))
        return ((-g) % p, 1)
    lower = [(m, conway_polynomial(p, m)) for m in range(1, n) if n % m == 0]
    for alphas in itertools.product(range(p), repeat=n):
        if alphas[-1] == 0:
            continue
        f = [0] * (n + 1)
        f[n] = 1
        for i, a in enumerate(alphas, start=1):
            f[n - i] = (-a if i % 2 else a) % p
        if not _is_primitive(f, p):
            continue
        ok = True
        for m, g in lower:
            y = _ppowmod([0, 1], (p**n - 1) // (p**m - 1), f, p)
            if _eval_poly_at(list(g), y, f, p):
                ok = False
                break
        if ok:
            return tuple(f)
    raise RuntimeError(f"no Conway polynomial found for ({p}, {n})")  # pragma: no cover


# --------------------------------------------------------------------------


class Field:
    """The finite field GF(p^h) with a pinned modulus.

    Parameters
    ----------
    p : int
        Prime characteristic.
    h : int
        Extension degree; ``p**h`` must not exceed 4096.
    """

    def __init__(self, p: int, h: int = 1):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if h < 1:
            raise ValueError("extension degree must be positive")
        q = p**h
        if q > MAX_ORDER:
            raise OrderTooLarge(f"q = {q} exceeds {MAX_ORDER}")
        self.p = p
        self.h = h
        self.q = q
        if h == 1:
            self.modulus = (0, 1)
        else:
            self.modulus = MODULI[(p, h)]
            if not is_irreducible(list(self.modulus), p):  # pragma: no cover
                raise ValueError(f"table modulus for ({p}, {h}) is reducible")
        self._pow_p = [p**i for i in range(h)]
        self.dtype = np.uint8 if q <= 256 else np.uint16
        self._build_tables()

    # -- construction -------------------------------------------------------
    def _slow_mul(self, a: int, b: int) -> int:
        if self.h == 1:
            return a * b % self.p
        return self.encode(_pmulmod(self.decode(a), self.decode(b), list(self.modulus), self.p))

    def _build_tables(self):
        q, p = self.q, self.p
        exp = None
        for g in range(2 if q > 2 else 1, q):
            seq = [1]
            x = g
            while x != 1:
                seq.append(x)
                x = self._slow_mul(x, g)
            if len(seq) == q - 1:
                exp = seq
                break
        if exp is None:  # pragma: no cover - cyclicity is a theorem
            raise ValueError("multiplicative group is not cyclic")
        self.primitive_element = exp[1] if q > 2 else 1
        self._exp = np.array(exp + exp, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        log[np.array(exp)] = np.arange(q - 1)
        self._log = log
        elems = np.arange(q, dtype=np.int64)
        digits = (elems[:, None] // np.array(self._pow_p)) % p
        self._digits = digits
        self._neg = self._from_digits((-digits) % p)
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = self._exp[(q - 1 - log[1:]) % (q - 1)]
        self._inv = inv
        if q <= TABLE_ORDER:
            a, b = np.meshgrid(elems, elems, indexing="ij")
            self._mul = self._vmul_log(a, b).astype(self.dtype)
            if p == 2:
                self._add = (a ^ b).astype(self.dtype)
            else:
                self._add = self._from_digits((digits[:, None, :] + digits[None, :, :]) % p).astype(self.dtype)
        else:
            self._mul = None
            self._add = None

    def _from_digits(self, digits):
        return (np.asarray(digits) * np.array(self._pow_p)).sum(axis=-1)

    def _vmul_log(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    # -- identity / misc ----------------------------------------------------
    zero = 0
    one = 1

    def __repr__(self):
        return f"GF({self.p}^{self.h})" if self.h > 1 else f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.h) == (other.p, other.h)

    def __hash__(self):
        return hash((self.p, self.h))

    def __reduce__(self):
        return (get_field, (self.p, self.h))

    def __len__(self):
        return self.q

    def __iter__(self):
        return iter(range(self.q))

    def __call__(self, value) -> "FieldElem":
        if isinstance(value, FieldElem):
            return value
        return FieldElem(self, int(value) % self.q if self.h > 1 else int(value) % self.p)

    def elements(self):
        return range(self.q)

    def encode(self, coeffs) -> int:
        """Integer encoding of a coefficient vector (low degree first)."""
        coeffs = list(coeffs)
        return sum((int(c) % self.p) * self.p**i for i, c in enumerate(coeffs))

    def decode(self, a: int) -> list[int]:
        """Coefficient vector of length h (low degree first)."""
        a = int(a)
        out = []
        for _ in range(self.h):
            a, d = divmod(a, self.p)
            out.append(d)
        return out

    # -- scalar ops on encoded ints ------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self._add is not None:
            return int(self._add[a, b])
        return int(self._from_digits((self._digits[a] + self._digits[b]) % self.p))

    def neg(self, a: int) -> int:
        return int(self._neg[a])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self._exp[self._log[a] + self._log[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return int(self._inv[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        """``a**e`` by square-and-multiply; negative exponents invert first."""
        if e < 0:
            a = self.inv(a)
            e = -e
        result = 1
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def frobenius(self, a: int, k: int = 1) -> int:
        return self.pow(a, self.p**k)

    def log(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("log of zero")
        return int(self._log[a])

    def trace(self, a: int) -> int:
        """Absolute trace to GF(p), returned as an element of the prime field."""
        t = 0
        x = a
        for _ in range(self.h):
            t = self.add(t, x)
            x = self.frobenius(x)
        return t

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` in the prime subfield."""
        return n % self.p

    # -- vectorised ops ------------------------------------------------------
    def vadd(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self._add is not None:
            return self._add[a, b]
        da = self._digits[a]
        db = self._digits[b]
        return self._from_digits((da + db) % self.p).astype(self.dtype)

    def vneg(self, a):
        return self._neg[np.asarray(a)].astype(self.dtype)

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        if self._mul is not None:
            return self._mul[np.asarray(a), np.asarray(b)]
        return self._vmul_log(a, b).astype(self.dtype)

    def vinv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise DivisionByZero("inverse of zero")
        return self._inv[a].astype(self.dtype)

    def vsum(self, a, axis=-1):
        """Field sum along ``axis``."""
        a = np.moveaxis(np.asarray(a), axis, -1)
        if self.p == 2:
            return np.bitwise_xor.reduce(a, axis=-1)
        acc = a[..., 0]
        for k in range(1, a.shape[-1]):
            acc = self.vadd(acc, a[..., k])
        return acc

    def matmul(self, A, B):
        """Matrix product over the field, broadcasting over leading axes."""
        A = np.asarray(A)
        B = np.asarray(B)
        prod = self.vmul(A[..., :, :, None], B[..., None, :, :])
        return self.vsum(prod, axis=-2)

    def matvec(self, A, v):
        A = np.asarray(A)
        v = np.asarray(v)
        return self.vsum(self.vmul(A, v[..., None, :]), axis=-1)

    def array(self, rows):
        return np.asarray(rows, dtype=self.dtype)


@lru_cache(maxsize=None)
def get_field(p: int, h: int = 1) -> Field:
    """Cached :class:`Field` constructor; the same (p, h) yields the same object."""
    return Field(p, h)


def field_new(p: int, h: int = 1) -> Field:
    return get_field(p, h)


def field_of_order(q: int) -> Field:
    p, h = prime_power(q)
    return get_field(p, h)


def frac_exponent(num: int, den: int, q: int) -> int:
    """Exponent ``e`` with ``den * e == num (mod q - 1)``.

    The map ``t -> t**e`` then realises ``t**(num/den)`` on GF(q); zero is
    sent to zero.  A result congruent to 0 is reported as ``q - 1``.
    """
    m = q - 1
    if math.gcd(den, m) != 1:
        raise NotInvertible(f"{den} is not invertible modulo {m}")
    e = num * pow(den, -1, m) % m
    return e if e else m


class FieldElem:
    """An element of a :class:`Field` with arithmetic operators."""

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value: int):
        self.field = field
        self.value = value

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other.value
        return self.field.from_int(int(other))

    def __add__(self, other):
        return FieldElem(self.field, self.field.add(self.value, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.field, self.field.sub(self.value, self._coerce(other)))

    def __rsub__(self, other):
        return FieldElem(self.field, self.field.sub(self._coerce(other), self.value))

    def __mul__(self, other):
        return FieldElem(self.field, self.field.mul(self.value, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElem(self.field, self.field.div(self.value, self._coerce(other)))

    def __rtruediv__(self, other):
        return FieldElem(self.field, self.field.div(self._coerce(other), self.value))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FieldElem(self.field, self.field.pow(self.value, e))

    def inverse(self):
        return FieldElem(self.field, self.field.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.h, self.value))

    def __lt__(self, other):
        return self.value < self._coerce(other)

    def __int__(self):
        return self.value

    __index__ = __int__

    def __bool__(self):
        return self.value != 0

    @property
    def coeffs(self):
        return self.field.decode(self.value)

    def __repr__(self):
        return f"{self.field!r}({self.value})"
