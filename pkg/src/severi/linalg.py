"""Exact scalar fields and dense exact linear algebra.

Two fields are supported: the prime field F_p (p > 3) with elements stored as
``int64`` arrays reduced into ``[0, p)``, and the rationals with elements
stored as ``object`` arrays of :class:`fractions.Fraction`.  Every routine in
this module takes the field explicitly, so the same code path serves both.

Row reduction pivots on the leftmost nonzero column and, inside it, on the
first nonzero row.  No other heuristic is used, which keeps every output
bit-for-bit reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from sympy import isprime
from sympy.ntheory import sqrt_mod

DEFAULT_PRIMES = (31991, 65537, 1000003)


class PrimeField:
    """The field F_p for a prime 3 < p < 2**24.

    The upper bound keeps int64 dot products of length up to 2**15 exact.
    """

    characteristic: int
    dtype = np.int64

    def __init__(self, p: int):
        p = int(p)
        if p <= 3 or not isprime(p):
            raise ValueError(f"need a prime p > 3, got {p}")
        if p >= 2**24:
            raise ValueError("p must stay below 2**24 so int64 dot products stay exact")
        self.p = p
        self.characteristic = p

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("F", self.p))

    @property
    def name(self) -> str:
        return f"F_{self.p}"

    def __call__(self, value) -> int:
        if isinstance(value, Fraction):
            return self.div(value.numerator, value.denominator)
        return int(value) % self.p

    def array(self, values) -> np.ndarray:
        values = np.asarray(values, dtype=object)
        out = np.empty(values.shape, dtype=np.int64)
        flat = out.reshape(-1)
        for i, v in enumerate(values.reshape(-1)):
            flat[i] = self(v)
        return out

    def reduce(self, a):
        if isinstance(a, np.ndarray):
            return np.mod(a, self.p)
        return int(a) % self.p

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def inv(self, a) -> int:
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError(f"division by zero in {self.name}")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b) -> int:
        return int(a) % self.p * self.inv(b) % self.p

    def sqrt(self, a) -> int | None:
        """A square root of ``a`` in the field, or None."""
        a = int(a) % self.p
        if a == 0:
            return 0
        r = sqrt_mod(a, self.p)
        return None if r is None else int(r)

    def random(self, rng: np.random.Generator, shape=()) -> np.ndarray:
        return rng.integers(0, self.p, size=shape, dtype=np.int64)

    def to_fraction(self, a) -> Fraction:
        return Fraction(int(a))

    def encode(self, a) -> str:
        return str(int(a))


class RationalField:
    """The rationals, as ``Fraction`` objects kept in lowest terms."""

    characteristic = 0
    dtype = object

    def __init__(self, height: int = 10):
        self.height = int(height)

    def __repr__(self) -> str:
        return "RationalField()"

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("Q")

    name = "Q"

    def __call__(self, value) -> Fraction:
        return Fraction(value)

    def array(self, values) -> np.ndarray:
        values = np.asarray(values, dtype=object)
        out = np.empty(values.shape, dtype=object)
        flat = out.reshape(-1)
        for i, v in enumerate(values.reshape(-1)):
            flat[i] = Fraction(v)
        return out

    def reduce(self, a):
        return a

    def zeros(self, shape) -> np.ndarray:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = Fraction(1)
        return out

    def inv(self, a) -> Fraction:
        if a == 0:
            raise ZeroDivisionError("division by zero in Q")
        return 1 / Fraction(a)

    def div(self, a, b) -> Fraction:
        return Fraction(a) * self.inv(b)

    def sqrt(self, a) -> Fraction | None:
        a = Fraction(a)
        if a < 0:
            return None
        n, d = a.numerator, a.denominator
        rn, rd = _isqrt_exact(n), _isqrt_exact(d)
        if rn is None or rd is None:
            return None
        return Fraction(rn, rd)

    def random(self, rng: np.random.Generator, shape=()) -> np.ndarray:
        raw = rng.integers(-self.height, self.height + 1, size=shape)
        return Fraction(int(raw)) if shape == () else self.array(raw)

    def to_fraction(self, a) -> Fraction:
        return Fraction(a)

    def encode(self, a) -> str:
        return str(Fraction(a))


def _isqrt_exact(n: int) -> int | None:
    from math import isqrt

    r = isqrt(n)
    return r if r * r == n else None


Field = PrimeField | RationalField


def make_field(spec) -> Field:
    """``'q'``/``'Q'``/``0`` give the rationals; an int gives F_p."""
    if isinstance(spec, (PrimeField, RationalField)):
        return spec
    if spec in ("q", "Q", 0, None):
        return RationalField()
    return PrimeField(int(spec))


# --------------------------------------------------------------------------
# row reduction


@dataclass(frozen=True)
class RREF:
    rank: int
    rows: np.ndarray  # nonzero rows of the reduced echelon form
    pivots: tuple[int, ...]
    kernel: np.ndarray  # right kernel, itself in reduced echelon form


def _rref_inplace(A: np.ndarray, field: Field) -> list[int]:
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c] != 0)
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r] = field.reduce(A[r] * field.inv(A[r, c]))
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col != 0)
        if hit.size:
            A[hit] = field.reduce(A[hit] - np.outer(col[hit], A[r]))
        pivots.append(c)
        r += 1
    return pivots


def echelon(M, field: Field) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row echelon form without the kernel: (nonzero rows, pivots)."""
    A = np.array(M, dtype=field.dtype, copy=True)
    if A.ndim != 2:
        A = A.reshape(len(A), -1)
    pivots = _rref_inplace(A, field)
    return A[: len(pivots)].copy(), tuple(pivots)


def _kernel_from_rref(R: np.ndarray, pivots: Sequence[int], cols: int, field: Field) -> np.ndarray:
    free = [c for c in range(cols) if c not in set(pivots)]
    K = field.zeros((len(free), cols))
    for k, f in enumerate(free):
        K[k, f] = 1
        for i, c in enumerate(pivots):
            K[k, c] = field.reduce(-R[i, f])
    return K


def rref(M, field: Field) -> RREF:
    """Rank, row space and right kernel of ``M``, all in canonical form."""
    M = np.asarray(M)
    cols = M.shape[1]
    R, pivots = echelon(M, field)
    K = _kernel_from_rref(R, pivots, cols, field)
    if len(K):
        K, _ = echelon(K, field)
    return RREF(len(pivots), R, pivots, K)


def rank(M, field: Field) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(echelon(M, field)[1])


def kernel(M, field: Field) -> np.ndarray:
    """Canonical basis (as rows) of {v : M v = 0}."""
    return rref(M, field).kernel


def left_kernel(M, field: Field) -> np.ndarray:
    return kernel(np.asarray(M).T, field)


def span(vectors, field: Field, width: int | None = None) -> np.ndarray:
    """Canonical basis of the span of the given row vectors."""
    V = np.asarray(vectors, dtype=field.dtype)
    if V.size == 0:
        return field.zeros((0, width if width is not None else 0))
    return echelon(V.reshape(len(V), -1), field)[0]


def annihilator(U: np.ndarray, field: Field, width: int) -> np.ndarray:
    """Basis of the linear forms vanishing on span(U)."""
    if len(U) == 0:
        return field.eye(width)
    return kernel(U, field)


def intersect_subspaces(U, V, field: Field) -> np.ndarray:
    """Canonical basis of span(U) ∩ span(V)."""
    U = np.asarray(U, dtype=field.dtype)
    V = np.asarray(V, dtype=field.dtype)
    if U.ndim != 2 or V.ndim != 2 or U.shape[1] != V.shape[1]:
        raise ValueError("subspaces live in ambient spaces of different dimension")
    width = U.shape[1]
    A = np.vstack([annihilator(U, field, width), annihilator(V, field, width)])
    if len(A) == 0:
        return field.eye(width)
    return kernel(A, field)


def in_span(v, U, field: Field) -> bool:
    U = np.asarray(U, dtype=field.dtype)
    if len(U) == 0:
        return not np.any(np.asarray(v) != 0)
    return rank(np.vstack([U, np.asarray(v, dtype=field.dtype)[None, :]]), field) == len(U)


def coordinates(v, U, field: Field):
    """Coefficients c with c @ U = v, or None if v is not in span(U)."""
    U = np.asarray(U, dtype=field.dtype)
    v = np.asarray(v, dtype=field.dtype)
    k = len(U)
    aug = np.hstack([U.T, v[:, None]])
    res = rref(aug, field)
    if k in res.pivots:
        return None
    sol = field.zeros(k)
    for i, c in enumerate(res.pivots):
        sol[c] = res.rows[i, k]
    return sol


def matmul(A, B, field: Field):
    return field.reduce(np.asarray(A) @ np.asarray(B))


def det(M, field: Field):
    """Determinant by elimination."""
    A = np.array(M, dtype=field.dtype, copy=True)
    n = A.shape[0]
    d = field(1)
    for c in range(n):
        nz = np.flatnonzero(A[c:, c] != 0)
        if nz.size == 0:
            return field(0)
        i = c + int(nz[0])
        if i != c:
            A[[c, i]] = A[[i, c]]
            d = field.reduce(-d)
        piv = A[c, c]
        d = field.reduce(d * piv)
        inv = field.inv(piv)
        below = A[c + 1 :, c].copy()
        hit = np.flatnonzero(below != 0)
        if hit.size:
            rows = c + 1 + hit
            A[rows] = field.reduce(A[rows] - np.outer(field.reduce(below[hit] * inv), A[c]))
    return d


# --------------------------------------------------------------------------
# large modular elimination


def _modmul_f64(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """Exact (A @ B) mod p through float64 BLAS.

    Entries lie in [0, p); the inner dimension is chunked so every partial
    sum stays below 2**53.
    """
    k = A.shape[1]
    step = max(1, (2**52) // ((p - 1) ** 2))
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.float64)
    for s in range(0, k, step):
        part = A[:, s : s + step].astype(np.float64) @ B[s : s + step].astype(np.float64)
        out += np.fmod(part, p)
        np.fmod(out, p, out=out)
    return out.astype(np.int64)


class StreamingEchelon:
    """Reduced row echelon basis of a row space fed in batches (F_p only).

    The basis is kept fully reduced after every batch, so the final state is
    the canonical RREF of all rows seen, independent of batch boundaries.
    """

    def __init__(self, cols: int, field: PrimeField):
        if not isinstance(field, PrimeField):
            raise TypeError("streaming elimination is implemented over F_p only")
        self.field = field
        self.cols = cols
        self.basis = np.zeros((0, cols), dtype=np.int64)
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, batch: np.ndarray) -> int:
        """Absorb a batch of rows; returns the rank increase."""
        p = self.field.p
        B = np.mod(np.asarray(batch, dtype=np.int64), p)
        if self.pivots:
            B = np.mod(B - _modmul_f64(B[:, self.pivots], self.basis, p), p)
        keep = np.flatnonzero(np.any(B != 0, axis=1))
        if keep.size == 0:
            return 0
        R, piv = echelon(B[keep], self.field)
        if not piv:
            return 0
        if self.pivots:
            self.basis = np.mod(self.basis - _modmul_f64(self.basis[:, list(piv)], R, p), p)
        self.basis = np.vstack([self.basis, R])
        self.pivots.extend(piv)
        return len(piv)

    def result(self) -> RREF:
        order = np.argsort(self.pivots, kind="stable")
        R = self.basis[order]
        pivots = tuple(int(self.pivots[i]) for i in order)
        K = _kernel_from_rref(R, pivots, self.cols, self.field)
        if len(K):
            K, _ = echelon(K, self.field)
        return RREF(len(pivots), R, pivots, K)


# --------------------------------------------------------------------------
# binary forms
#
# A binary form of degree d is a coefficient sequence (c_0, ..., c_d) standing
# for sum_i c_i s^(d-i) t^i.


def _trim(poly: list) -> list:
    i = 0
    while i < len(poly) and poly[i] == 0:
        i += 1
    return poly[i:]


def _prem(a: list, b: list, field: Field) -> list:
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b (coefficients high → low)."""
    db = len(b) - 1
    lc = b[0]
    r = list(a)
    e = len(a) - len(b) + 1
    while r and len(r) - 1 >= db:
        coef = r[0]
        r = [field.reduce(lc * x) for x in r]
        for i, bc in enumerate(b):
            r[i] = field.reduce(r[i] - coef * bc)
        r = _trim(r[1:])
        e -= 1
    scale = _fpow(lc, e, field)
    return _trim([field.reduce(scale * x) for x in r])


def _subresultant_gcd(f: list, g: list, field: Field) -> list:
    """Monic gcd through the subresultant polynomial remainder sequence."""
    a, b = _trim(list(f)), _trim(list(g))
    if not a:
        return _monic(b, field)
    if not b:
        return _monic(a, field)
    if len(a) < len(b):
        a, b = b, a
    gg = field(1)
    h = field(1)
    while True:
        delta = len(a) - len(b)
        r = _prem(a, b, field)
        if not r:
            return _monic(b, field)
        if len(r) == 1:
            return [field(1)]
        a = b
        denom = field.reduce(gg * _fpow(h, delta, field))
        inv = field.inv(denom)
        b = [field.reduce(x * inv) for x in r]
        gg = a[0]
        if delta:
            h = field.reduce(_fpow(gg, delta, field) * field.inv(_fpow(h, delta - 1, field)))


def _fpow(x, e: int, field: Field):
    out = field(1)
    for _ in range(e):
        out = field.reduce(out * x)
    return out


def _monic(a: list, field: Field) -> list:
    a = _trim(list(a))
    if not a:
        return a
    inv = field.inv(a[0])
    return [field.reduce(x * inv) for x in a]


@dataclass(frozen=True)
class BinaryGCD:
    """gcd of binary forms; ``degree`` is None when every input vanishes."""

    degree: int | None
    coeffs: tuple

    @property
    def is_zero(self) -> bool:
        return self.degree is None


def binary_form_gcd(forms: Iterable[Sequence], field: Field) -> BinaryGCD:
    """Greatest common divisor of binary forms over the field.

    The degree counts roots over the algebraic closure with multiplicity; no
    root finding happens here.  Coefficients are returned as a binary form of
    that degree, normalised so the first nonzero coefficient is 1.
    """
    forms = [[field(c) for c in f] for f in forms]
    if not forms:
        raise ValueError("binary_form_gcd needs at least one form")
    nonzero = [f for f in forms if any(c != 0 for c in f)]
    if not nonzero:
        return BinaryGCD(None, ())
    # multiplicity of the root (1:0) is the number of leading zero coefficients
    t_mult = min(next(i for i, c in enumerate(f) if c != 0) for f in nonzero)
    g: list = []
    for f in nonzero:
        # dehomogenise at t = 1: sum c_i s^(d-i), high → low in s
        g = _subresultant_gcd(g, _trim(f), field)
        if len(g) == 1:
            break
    affine_deg = len(g) - 1
    degree = affine_deg + t_mult
    coeffs = (field(0),) * t_mult + tuple(g)
    return BinaryGCD(degree, tuple(field(c) for c in coeffs))


def binary_roots(form: Sequence, field: Field) -> list[tuple]:
    """Rational roots (s:t) of a binary form of degree ≤ 2, with multiplicity."""
    form = [field(c) for c in form]
    lead = next((i for i, c in enumerate(form) if c != 0), None)
    if lead is None:
        raise ValueError("the zero form has no finite root set")
    roots = [(field(1), field(0))] * lead
    # the remaining roots have t != 0; dehomogenise at t = 1
    poly = _trim(form)
    deg = len(poly) - 1
    if deg == 0:
        return roots
    if deg == 1:
        return roots + [(field.reduce(-poly[1] * field.inv(poly[0])), field(1))]
    if deg == 2:
        a, b, c = poly
        disc = field.reduce(b * b - 4 * a * c)
        r = field.sqrt(disc)
        if r is None:
            return roots
        inv2a = field.inv(field.reduce(2 * a))
        r1 = field.reduce((-b + r) * inv2a)
        r2 = field.reduce((-b - r) * inv2a)
        return roots + [(r1, field(1)), (r2, field(1))]
    raise NotImplementedError("root extraction only for degree ≤ 2")
