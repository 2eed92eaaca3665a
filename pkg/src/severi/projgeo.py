"""Projective incidence layer over a :class:`~severi.jordan.JordanSpace`.

Linear subspaces of P^N are stored by the canonical reduced echelon basis of
their cone, so two subspaces are equal exactly when their bases are equal.
X (rank <= 1) is cut out by the coordinates of the adjoint map, SX by the
cubic norm; restricting either to a subspace gives forms in the subspace's
basis coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from itertools import combinations_with_replacement

import numpy as np

from . import linalg
from .errors import PreconditionError
from .jordan import JordanSpace


def _as_rows(obj) -> np.ndarray:
    if isinstance(obj, ProjSubspace):
        return obj.basis
    if isinstance(obj, ProjPoint):
        return obj.rep[None, :]
    arr = np.asarray(obj)
    return arr[None, :] if arr.ndim == 1 else arr


@dataclass(frozen=True, eq=False)
class ProjPoint:
    """A point of P^N; ``rep`` has its first nonzero coordinate equal to 1."""

    space: JordanSpace
    rep: np.ndarray

    @classmethod
    def of(cls, space: JordanSpace, v) -> "ProjPoint":
        v = np.asarray(v, dtype=space.field.dtype)
        nz = np.flatnonzero(v != 0)
        if nz.size == 0:
            raise PreconditionError("the zero vector is not a projective point")
        rep = space.field.reduce(v * space.field.inv(v[nz[0]]))
        return cls(space, rep)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ProjPoint)
            and self.space == other.space
            and np.array_equal(self.rep, other.rep)
        )

    def __hash__(self) -> int:
        return hash((self.space, self.rep.tobytes()))

    @property
    def rank(self) -> int:
        return self.space.rank_of(self.rep)


@dataclass(frozen=True, eq=False)
class ProjSubspace:
    """A linear subspace P(V) of P^N; ``basis`` is the canonical RREF of V."""

    space: JordanSpace
    basis: np.ndarray

    @classmethod
    def span(cls, space: JordanSpace, *parts) -> "ProjSubspace":
        rows = [_as_rows(p) for p in parts if len(_as_rows(p))]
        if not rows:
            return cls(space, space.field.zeros((0, space.dim)))
        stacked = np.vstack([np.asarray(r, dtype=space.field.dtype) for r in rows])
        return cls(space, linalg.span(stacked, space.field, space.dim))

    @classmethod
    def kernel_of(cls, space: JordanSpace, M) -> "ProjSubspace":
        """P(ker M) for a matrix acting on the ambient coordinates."""
        return cls(space, linalg.kernel(M, space.field))

    @classmethod
    def whole(cls, space: JordanSpace) -> "ProjSubspace":
        return cls(space, space.field.eye(space.dim))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ProjSubspace)
            and self.space == other.space
            and self.basis.shape == other.basis.shape
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self) -> int:
        return hash((self.space, self.basis.shape, self.basis.tobytes()))

    def __repr__(self) -> str:
        return f"ProjSubspace(dim={self.dim}, {self.space!r})"

    @property
    def dim(self) -> int:
        """Projective dimension (-1 for the empty subspace)."""
        return len(self.basis) - 1

    @property
    def is_empty(self) -> bool:
        return len(self.basis) == 0

    def contains(self, other) -> bool:
        rows = _as_rows(other)
        if len(rows) == 0:
            return True
        if self.is_empty:
            return False
        stacked = np.vstack([self.basis, np.asarray(rows, dtype=self.space.field.dtype)])
        return linalg.rank(stacked, self.space.field) == len(self.basis)

    def intersect(self, other: "ProjSubspace") -> "ProjSubspace":
        if self.is_empty or other.is_empty:
            return ProjSubspace(self.space, self.space.field.zeros((0, self.space.dim)))
        return ProjSubspace(
            self.space, linalg.intersect_subspaces(self.basis, other.basis, self.space.field)
        )

    def point(self, coeffs) -> np.ndarray:
        """The vector sum_i coeffs[i] * basis[i]."""
        c = np.asarray(coeffs, dtype=self.space.field.dtype)
        return self.space.field.reduce(c @ self.basis)

    def coords(self, v):
        return linalg.coordinates(v, self.basis, self.space.field)

    def random_point(self, rng: np.random.Generator) -> np.ndarray:
        F = self.space.field
        while True:
            v = self.point(F.random(rng, len(self.basis)))
            if np.any(v != 0):
                return v

    def equations(self) -> np.ndarray:
        """Linear forms (rows) cutting out the subspace."""
        return linalg.annihilator(self.basis, self.space.field, self.space.dim)


def join(A, B) -> ProjSubspace:
    """Linear span of two subspaces or points."""
    space = A.space if isinstance(A, (ProjSubspace, ProjPoint)) else B.space
    return ProjSubspace.span(space, A, B)


# --------------------------------------------------------------------------
# restricted quadratic and cubic forms


def quadratic_monomials(k: int) -> list[tuple[int, int]]:
    return list(combinations_with_replacement(range(k), 2))


def cubic_monomials(k: int) -> list[tuple[int, int, int]]:
    return list(combinations_with_replacement(range(k), 3))


def pairwise_cross(space: JordanSpace, B: np.ndarray) -> np.ndarray:
    """P[i, j] = B[i] × B[j] for all pairs of rows."""
    F = space.field
    B = np.asarray(B, dtype=F.dtype)
    # contract C[k, a, b] with B[j, b], then with B[i, a]
    half = F.reduce(np.tensordot(space._C, B, axes=([2], [1])))  # (k, a, j)
    full = F.reduce(np.tensordot(B, half, axes=([1], [1])))  # (i, k, j)
    return np.transpose(full, (0, 2, 1))


@dataclass(frozen=True)
class QuadraticSystem:
    """Quadratic forms in the coordinates of a subspace basis.

    ``coeffs[r, m]`` is the coefficient of the monomial ``monomials[m]`` in
    the r-th form.  ``span`` is the canonical basis of the span of the forms.
    """

    field: object
    nvars: int
    monomials: tuple
    coeffs: np.ndarray
    span: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.span)

    @property
    def vanishes(self) -> bool:
        return self.rank == 0

    def evaluate(self, lam) -> np.ndarray:
        F = self.field
        lam = np.asarray(lam, dtype=F.dtype)
        mons = np.array([F.reduce(lam[i] * lam[j]) for i, j in self.monomials], dtype=F.dtype)
        return F.reduce(self.coeffs @ mons)

    def polar_matrix(self, form) -> np.ndarray:
        """Symmetric S with q(lam) = lam^T S lam."""
        F = self.field
        S = F.zeros((self.nvars, self.nvars))
        half = F.inv(2)
        for (i, j), c in zip(self.monomials, form):
            if i == j:
                S[i, i] = c
            else:
                S[i, j] = S[j, i] = F.reduce(c * half)
        return S


def restrict_adjoint(M) -> QuadraticSystem:
    """Coordinates of the adjoint restricted to a subspace, as quadratic forms.

    adjoint(sum_i l_i m_i) = sum_i l_i^2 m_i# + sum_{i<j} l_i l_j (m_i × m_j);
    X ∩ M is the common zero locus.
    """
    space = M.space
    F = space.field
    B = M.basis
    k = len(B)
    mons = quadratic_monomials(k)
    if k == 0:
        z = F.zeros((space.dim, 0))
        return QuadraticSystem(F, 0, (), z, F.zeros((0, 0)))
    P = pairwise_cross(space, B)
    cols = []
    half = space._inv2
    for i, j in mons:
        cols.append(F.reduce(P[i, i] * half) if i == j else P[i, j])
    coeffs = np.stack(cols, axis=1)  # (dim J, #monomials)
    return QuadraticSystem(F, k, tuple(mons), coeffs, linalg.span(coeffs, F, len(mons)))


def restrict_norm(M) -> tuple[list[tuple[int, int, int]], np.ndarray]:
    """N restricted to a subspace: (monomials, coefficients) of a cubic form."""
    space = M.space
    F = space.field
    B = M.basis
    k = len(B)
    P = pairwise_cross(space, B)
    G = space._G
    # t[i, j, l] = T(m_i × m_j, m_l)
    Bg = F.reduce(B @ G)  # rows: T(m_l, .)
    t = F.reduce(np.tensordot(P, Bg, axes=([2], [1])))
    mons = cubic_monomials(k)
    inv6, inv2 = F.inv(6), F.inv(2)
    coeffs = []
    for i, j, l in mons:
        distinct = len({i, j, l})
        w = 1 if distinct == 3 else (inv2 if distinct == 2 else inv6)
        coeffs.append(F.reduce(t[i, j, l] * w))
    return mons, np.array(coeffs, dtype=F.dtype)


def subspace_in_SX(M: ProjSubspace) -> bool:
    """True iff the trilinear norm vanishes on every triple of basis vectors."""
    if M.is_empty:
        return True
    _, coeffs = restrict_norm(M)
    return not np.any(coeffs != 0)


# --------------------------------------------------------------------------
# lines


@dataclass(eq=False)
class LineRecord:
    """A line of P^N with cached classification data and generation trace."""

    line: ProjSubspace
    trace: dict = dc_field(default_factory=dict)
    cache: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.line.dim != 1:
            raise PreconditionError(f"a line needs a 2-element basis, got dim {self.line.dim}")

    @classmethod
    def through(cls, space: JordanSpace, a, b, **trace) -> "LineRecord":
        return cls(ProjSubspace.span(space, a, b), dict(trace))

    @property
    def space(self) -> JordanSpace:
        return self.line.space

    @property
    def a(self) -> np.ndarray:
        return self.line.basis[0]

    @property
    def b(self) -> np.ndarray:
        return self.line.basis[1]

    def point(self, s, t) -> np.ndarray:
        return self.line.point([s, t])


@dataclass(frozen=True)
class LineIntersection:
    """L ∩ X as a scheme: ``length`` in {0, 1, 2, inf}."""

    length: float
    support: tuple  # rational support points (ProjPoint)
    gcd: tuple  # binary form whose roots are L ∩ X
    tangent: bool = False  # length 2 supported at a single geometric point


def line_X_intersection(L: LineRecord) -> LineIntersection:
    """Scheme-theoretic L ∩ X via the gcd of all restricted adjoint coordinates."""
    if "x_intersection" in L.cache:
        return L.cache["x_intersection"]
    space = L.space
    F = space.field
    Q = restrict_adjoint(L.line)
    if Q.vanishes:
        res = LineIntersection(math.inf, (), ())
    else:
        g = linalg.binary_form_gcd([list(r) for r in Q.span], F)
        disc_zero = False
        support = []
        if g.degree:
            if g.degree == 2:
                c0, c1, c2 = g.coeffs
                disc_zero = F.reduce(c1 * c1 - 4 * c0 * c2) == 0
            for s, t in _unique(linalg.binary_roots(g.coeffs, F)):
                support.append(ProjPoint.of(space, L.point(s, t)))
        res = LineIntersection(g.degree, tuple(support), tuple(g.coeffs), disc_zero)
    L.cache["x_intersection"] = res
    return res


def _unique(roots):
    out = []
    for r in roots:
        if r not in out:
            out.append(r)
    return out
