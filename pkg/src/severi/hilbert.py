"""Zero loci of systems of quadrics over the algebraic closure.

Used to decide X ∩ K for a linear space K from the restricted adjoint.  The
cheap cases are settled by dimension counting; otherwise the Hilbert
function of the ideal is computed from Macaulay matrices:

* the zero locus in P^(k-1) is empty iff the ideal contains every form of
  degree k + 1 (Lazard's bound for forms of degree 2 in k variables);
* if h(D) = h(D + 1) = c <= D then, by Gotzmann persistence, the Hilbert
  polynomial is the constant c: a finite scheme of length c.  c = 1 means a
  single reduced point, necessarily rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import comb

import numpy as np

from . import linalg
from .projgeo import ProjSubspace, QuadraticSystem

DEFAULT_MAX_VARS = 6


@dataclass(frozen=True)
class QuadricLocus:
    """Zero locus of a quadric system on a linear space.

    ``status`` is one of ``empty``, ``point`` (one reduced point), ``finite``
    (length ``degree`` > 1), ``linear`` (the whole space), ``nonempty`` or
    ``undecided``.  ``witnesses`` are rational points in ambient coordinates.
    """

    status: str
    degree: int | None = None
    witnesses: tuple = ()

    @property
    def nonempty(self) -> bool | None:
        if self.status == "undecided":
            return None
        return self.status != "empty"

    @property
    def singleton(self) -> bool:
        return self.status == "point"


def monomials(k: int, D: int) -> list[tuple[int, ...]]:
    return list(combinations_with_replacement(range(k), D))


def _macaulay(forms: np.ndarray, k: int, D: int, field) -> np.ndarray:
    """Rows: every degree-(D-2) monomial times every quadric; columns: degree-D monomials."""
    cols = {m: i for i, m in enumerate(monomials(k, D))}
    quad = monomials(k, 2)
    shifts = monomials(k, D - 2)
    rows = field.zeros((len(forms) * len(shifts), len(cols)))
    r = 0
    for f in forms:
        nz = [(quad[j], c) for j, c in enumerate(f) if c != 0]
        for s in shifts:
            for m, c in nz:
                rows[r, cols[tuple(sorted(s + m))]] = c
            r += 1
    return rows


def _macaulay_rank(forms, k, D, field) -> int:
    M = _macaulay(forms, k, D, field)
    if isinstance(field, linalg.PrimeField) and M.shape[1] > 200:
        se = linalg.StreamingEchelon(M.shape[1], field)
        for start in range(0, len(M), 512):
            se.add(M[start:start + 512])
        return se.rank
    return linalg.rank(M, field)


def hilbert_function(forms: np.ndarray, k: int, D: int, field) -> int:
    """h(D) = dim S_D - dim I_D for the ideal generated by the quadrics ``forms``."""
    total = comb(k - 1 + D, D)
    if D < 2 or len(forms) == 0:
        return total
    return total - _macaulay_rank(forms, k, D, field)


def _point_from_degree(forms, k, D, field) -> np.ndarray:
    """The point of a length-one scheme, read off the annihilator of I_D."""
    M = _macaulay(forms, k, D, field)
    ev = linalg.kernel(M, field)[0]  # proportional to (P^alpha) over degree-D monomials
    index = {m: i for i, m in enumerate(monomials(k, D))}
    j = next(j for j in range(k) if ev[index[(j,) * D]] != 0)
    return field.array(
        [ev[index[tuple(sorted((i,) + (j,) * (D - 1)))]] for i in range(k)]
    )


def analyse_quadrics(Q: QuadraticSystem, K: ProjSubspace, max_vars: int | None = None) -> QuadricLocus:
    """Decide the zero locus of ``Q`` (forms in the coordinates of ``K.basis``)."""
    max_vars = DEFAULT_MAX_VARS if max_vars is None else max_vars
    F = K.space.field
    if K.is_empty:
        return QuadricLocus("empty", 0)
    k = len(K.basis)
    if Q.vanishes:
        if k == 1:
            return QuadricLocus("point", 1, (K.basis[0],))
        return QuadricLocus("linear", None, tuple(K.basis))
    r = Q.rank
    if r <= k - 2:
        # r hypersurfaces in P^(k-1) meet in dimension >= k - 1 - r >= 1
        return QuadricLocus("nonempty")
    if k > max_vars:
        return QuadricLocus("nonempty") if r <= k - 1 else QuadricLocus("undecided")
    forms = Q.span
    D = k + 1
    hD = hilbert_function(forms, k, D, F)
    if hD == 0:
        return QuadricLocus("empty", 0)
    hD1 = hilbert_function(forms, k, D + 1, F)
    if hD == hD1 and hD <= D:
        if hD == 1:
            lam = _point_from_degree(forms, k, D, F)
            return QuadricLocus("point", 1, (K.point(lam),))
        return QuadricLocus("finite", hD)
    return QuadricLocus("nonempty")


def supported_at(Q: QuadraticSystem, K: ProjSubspace, x) -> bool | None:
    """Whether the zero locus of ``Q`` on ``K`` is set-theoretically the point x.

    Work in coordinates mu with x = (1, 0, ..., 0).  When the locus is a
    finite scheme of length c, stable from degree D on, I agrees with its
    saturation in degrees d >= max(D, c), and the locus is {x} iff it misses
    the hyperplane mu_0 = 0 and every mu_i^c mu_0^(d-c) (i > 0) lies in I_d.
    Returns None when the locus is not certified finite.
    """
    F = K.space.field
    k = len(K.basis)
    c = K.coords(x)
    if c is None:
        return False
    if Q.vanishes:
        return k == 1
    # change of basis with first column the coordinates of x
    j = next(i for i in range(k) if c[i] != 0)
    G = F.eye(k)
    G[:, j] = c
    G[:, [0, j]] = G[:, [j, 0]]
    quad = monomials(k, 2)
    forms = []
    for f in Q.span:
        S = F.reduce(G.T @ F.reduce(Q.polar_matrix(f) @ G))
        forms.append([S[a, a] if a == b else F.reduce(2 * S[a, b]) for a, b in quad])
    forms = np.array(forms, dtype=F.dtype)
    # points on the hyperplane mu_0 = 0
    sub = [m for m in quad if 0 not in m]
    sub_forms = np.array([[f[quad.index(m)] for m in sub] for f in forms], dtype=F.dtype)
    sub_forms = sub_forms[np.any(sub_forms != 0, axis=1)]
    if len(sub_forms) == 0 or hilbert_function(sub_forms, k - 1, k, F) != 0:
        return False
    D = k + 1
    length = hilbert_function(forms, k, D, F)
    if length != hilbert_function(forms, k, D + 1, F) or length > D:
        return None
    d = max(D, length)
    M = _macaulay(forms, k, d, F)
    base = linalg.rank(M, F)
    cols = {m: i for i, m in enumerate(monomials(k, d))}
    for i in range(1, k):
        v = F.zeros(len(cols))
        v[cols[tuple(sorted((0,) * (d - length) + (i,) * length))]] = 1
        if linalg.rank(np.vstack([M, v[None, :]]), F) != base:
            return False
    return True
