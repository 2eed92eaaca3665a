"""Tangent spaces, contact loci and the secant fibration of SX.

For a rank-two point p the tangent hyperplane to SX is H_p = {T(p#, .) = 0};
it touches SX along the contact locus Σ_p, computed here as the linear space
{u : p × u ∈ span(p#)}.  On Σ_p the adjoint factors as u# = q(u) p#, and the
quadric q = 0 is the secant quadric Q_p = Σ_p ∩ X.

Every dimension the geometry guarantees is checked at runtime.  A failed
check on a generic construction raises :class:`DegenerateSample`; a failed
structural claim raises :class:`InvariantViolation`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DegenerateSample, InvariantViolation, PreconditionError, SameContact
from .jordan import JordanSpace
from .projgeo import (
    ProjPoint,
    ProjSubspace,
    join,
    quadratic_monomials,
    restrict_adjoint,
    restrict_norm,
    subspace_in_SX,
)


def _vec(space: JordanSpace, x) -> np.ndarray:
    if isinstance(x, ProjPoint):
        return x.rep
    return np.asarray(x, dtype=space.field.dtype)


def _require_rank(space: JordanSpace, x, expected: int, what: str) -> np.ndarray:
    v = _vec(space, x)
    r = space.rank_of(v)
    if r != expected:
        raise PreconditionError(f"{what} needs a rank-{expected} point, got rank {r}")
    return v


def tangent_hyperplane(space: JordanSpace, p) -> ProjSubspace:
    """H_p = {y : T(p#, y) = 0}, the tangent hyperplane to SX at p."""
    p = _require_rank(space, p, 2, "tangent_hyperplane")
    return ProjSubspace.kernel_of(space, space.trace_covector(space.adjoint(p))[None, :])


def tangent_space_X(space: JordanSpace, x) -> ProjSubspace:
    """The embedded tangent space of X at x: P(ker(y -> x × y))."""
    x = _require_rank(space, x, 1, "tangent_space_X")
    T = ProjSubspace.kernel_of(space, space.cross_matrix(x))
    if T.dim != space.n:
        raise DegenerateSample(f"tangent space has dimension {T.dim}, expected {space.n}")
    return T


def quadratic_form_matrix(field, nvars: int, coeffs) -> np.ndarray:
    """Symmetric S with q(l) = l^T S l, from coefficients on the monomials l_i l_j (i <= j)."""
    S = field.zeros((nvars, nvars))
    half = field.inv(2)
    for (i, j), c in zip(quadratic_monomials(nvars), coeffs):
        if i == j:
            S[i, i] = c
        else:
            S[i, j] = S[j, i] = field.reduce(c * half)
    return S


@dataclass(frozen=True, eq=False)
class SecantFrame:
    """A rank-two point together with H_p, Σ_p and the quadric Q_p on Σ_p.

    ``gram`` is the symmetric matrix of q in the coordinates of ``Sigma.basis``,
    normalised by u# = q(u) p#.
    """

    space: JordanSpace
    p: ProjPoint
    sharp: np.ndarray
    H: ProjSubspace
    Sigma: ProjSubspace
    gram: np.ndarray

    def q(self, v) -> object:
        """Value of the quadric at a vector of Σ̂_p."""
        F = self.space.field
        c = np.asarray(self.Sigma.coords(v), dtype=F.dtype)
        return F.reduce(c @ F.reduce(self.gram @ c))

    def bilinear(self, v, w) -> object:
        F = self.space.field
        c = np.asarray(self.Sigma.coords(v), dtype=F.dtype)
        d = np.asarray(self.Sigma.coords(w), dtype=F.dtype)
        return F.reduce(c @ F.reduce(self.gram @ d))

    def in_Q(self, v) -> bool:
        v = _vec(self.space, v)
        return self.Sigma.contains(v) and self.q(v) == 0

    def tangent_space_Q(self, x) -> ProjSubspace:
        """Embedded tangent space of Q_p at a point x of Q_p."""
        x = _vec(self.space, x)
        if not self.in_Q(x):
            raise PreconditionError("tangent_space_Q needs a point of Q_p")
        F = self.space.field
        c = np.asarray(self.Sigma.coords(x), dtype=F.dtype)
        form = F.reduce(c @ self.gram)  # l -> B(x, l) in Σ coordinates
        sub = linalg.kernel(form[None, :], F)
        return ProjSubspace.span(self.space, F.reduce(sub @ self.Sigma.basis))

    def random_Q_point(self, rng: np.random.Generator, tries: int = 64) -> np.ndarray:
        """A rational point of Q_p: the image U_p(x) of a random x ∈ X.

        U_p maps X into X ∪ {0} and its image lies in Σ_p, so U_p(x) is a
        point of Q_p whenever it is nonzero; this works over Q as well, where
        random lines of Σ_p rarely meet Q_p rationally.
        """
        from .sampler import random_X_vector

        F = self.space.field
        U = self.space.U(self.p.rep)
        for _ in range(tries):
            v = F.reduce(U @ random_X_vector(self.space, rng))
            if np.any(v != 0):
                return v
        raise DegenerateSample("U_p vanished on every sampled point of X")


def contact_locus(space: JordanSpace, p) -> SecantFrame:
    """Build the secant frame of a rank-two point, verifying its shape.

    Checks: dim Σ_p = n/2 + 1, p ∈ Σ_p ⊂ H_p, the restricted adjoint takes
    values in span(p#), and the quadric it induces is nonsingular.
    """
    p = _require_rank(space, p, 2, "contact_locus")
    F = space.field
    sharp = space.adjoint(p)
    # solve p × u = t p#  for (u, t)
    A = np.concatenate([space.cross_matrix(p), F.reduce(-sharp)[:, None]], axis=1)
    ker = linalg.kernel(A, F)
    Sigma = ProjSubspace.span(space, ker[:, :-1])
    if Sigma.dim != space.n // 2 + 1:
        raise DegenerateSample(f"contact locus has dimension {Sigma.dim}, expected {space.n // 2 + 1}")
    H = ProjSubspace.kernel_of(space, space.trace_covector(sharp)[None, :])
    if not H.contains(Sigma) or not Sigma.contains(p):
        raise DegenerateSample("contact locus is not inside the tangent hyperplane")
    Q = restrict_adjoint(Sigma)
    # every column of the coefficient matrix must be a multiple of p#
    i0 = int(np.flatnonzero(sharp != 0)[0])
    q = F.reduce(Q.coeffs[i0] * F.inv(sharp[i0]))
    if np.any(F.reduce(np.outer(sharp, q) - Q.coeffs) != 0):
        raise DegenerateSample("restricted adjoint is not proportional to p#")
    gram = quadratic_form_matrix(F, len(Sigma.basis), q)
    if linalg.rank(gram, F) != len(Sigma.basis):
        raise DegenerateSample("secant quadric is singular")
    return SecantFrame(space, ProjPoint.of(space, p), sharp, H, Sigma, gram)


@dataclass(frozen=True)
class SecantIntersection:
    """Σ_p ∩ Σ_q; ``kind`` is 'point' (dimension 0) or 'space' (dimension n/4)."""

    kind: str
    W: ProjSubspace

    @property
    def dim(self) -> int:
        return self.W.dim


def secant_intersection(fp: SecantFrame, fq: SecantFrame) -> SecantIntersection:
    """Intersect two contact loci; the result must be a point or a P^(n/4) in X."""
    space = fp.space
    if fp.Sigma == fq.Sigma:
        raise SameContact("the two points share their contact locus")
    W = fp.Sigma.intersect(fq.Sigma)
    if W.is_empty:
        raise InvariantViolation("contact loci are disjoint")
    if not restrict_adjoint(W).vanishes:
        raise InvariantViolation(f"Σ_p ∩ Σ_q (dim {W.dim}) is not contained in X")
    if W.dim == 0:
        return SecantIntersection("point", W)
    if W.dim == space.n // 4:
        return SecantIntersection("space", W)
    raise InvariantViolation(f"Σ_p ∩ Σ_q has dimension {W.dim}, expected 0 or {space.n // 4}")


# --------------------------------------------------------------------------
# fibres of the projection from Σ_p


@dataclass(frozen=True)
class FibreResult:
    """Outcome of :func:`fibre_type`.

    Type 1: ``fibre`` = join(u, T̂_x Q_p) for the unique ``witness_x``.
    Type 2: ``fibre`` = join(u, Σ_p) ⊂ SX and ``Pi`` is the linear
    P^(n/4+1) with X ∩ fibre = Q_p ∪ Pi.
    """

    kind: int
    fibre: ProjSubspace
    witness_x: ProjPoint | None = None
    Pi: ProjSubspace | None = None
    Lambda: ProjSubspace | None = None


def _check_fibre_input(fp: SecantFrame, u) -> np.ndarray:
    space = fp.space
    u = _vec(space, u)
    if not np.any(u != 0):
        raise PreconditionError("u must be nonzero")
    if space.norm_form(u) != 0:
        raise PreconditionError("u is not on SX")
    if not fp.H.contains(u):
        raise PreconditionError("u is not in the tangent hyperplane H_p")
    if fp.Sigma.contains(u):
        raise PreconditionError("u lies in Σ_p")
    return u


@dataclass(frozen=True)
class _AffineSecantSystem:
    """Points u + σ of X with σ ∈ Σ̂_p: u × σ + t p# = -u# and t = q(σ).

    ``base`` and ``directions`` describe the affine solution set of the
    linear part in the (σ-coordinates, t) space; None when inconsistent.
    """

    base: np.ndarray | None
    directions: np.ndarray


def _affine_system(fp: SecantFrame, u: np.ndarray) -> _AffineSecantSystem:
    space, F = fp.space, fp.space.field
    B = fp.Sigma.basis
    k = len(B)
    cols = F.reduce(space.cross_matrix(u) @ B.T)  # u × b_i
    A = np.concatenate([cols, fp.sharp[:, None]], axis=1)
    rhs = F.reduce(-space.adjoint(u))
    aug = np.concatenate([A, rhs[:, None]], axis=1)
    ker = linalg.kernel(aug, F)  # vectors (c, t, w) with A (c, t) + w rhs = 0
    with_w = ker[ker[:, -1] != 0]
    if len(with_w) == 0:
        return _AffineSecantSystem(None, F.zeros((0, k + 1)))
    v = with_w[0]
    base = F.reduce(-v[:-1] * F.inv(v[-1]))
    directions = linalg.kernel(A, F)
    return _AffineSecantSystem(base, directions)


def _residual_quadratic(fp: SecantFrame, sys: _AffineSecantSystem):
    """g = q(σ) - t restricted to the affine solution set, as (const, lin, quad)."""
    F = fp.space.field
    k = len(fp.Sigma.basis)
    S = fp.gram
    c0, t0 = sys.base[:k], sys.base[k]
    D = sys.directions
    const = F.reduce(c0 @ F.reduce(S @ c0) - t0)
    if len(D) == 0:
        return const, F.zeros(0), F.zeros((0, 0))
    Dc, Dt = D[:, :k], D[:, k]
    lin = F.reduce(2 * F.reduce(Dc @ F.reduce(S @ c0)) - Dt)
    quad = F.reduce(Dc @ F.reduce(S @ Dc.T))
    return const, lin, quad


def _find_off_sigma_X_point(fp: SecantFrame, u: np.ndarray, rng: np.random.Generator, tries: int = 64):
    """A rational z = u + σ in X with σ ∈ Σ̂_p, or None."""
    space, F = fp.space, fp.space.field
    if space.rank_of(u) == 1:
        return u
    sys = _affine_system(fp, u)
    if sys.base is None:
        return None
    k = len(fp.Sigma.basis)
    const, lin, quad = _residual_quadratic(fp, sys)
    D = sys.directions
    for _ in range(tries):
        a = sys.base.copy()
        if len(D):
            a = F.reduce(a + F.random(rng, len(D)) @ D)
            d = F.reduce(F.random(rng, len(D)) @ D)
        else:
            d = F.zeros(k + 1)
        # g(a + s d) = g(a) + s (2B(σa, σd) - td) + s^2 q(σd)
        ca, cd = a[:k], d[:k]
        g0 = F.reduce(ca @ F.reduce(fp.gram @ ca) - a[k])
        g1 = F.reduce(2 * F.reduce(ca @ F.reduce(fp.gram @ cd)) - d[k])
        g2 = F.reduce(cd @ F.reduce(fp.gram @ cd))
        if g0 == 0:
            sol = a
        elif g1 == 0 and g2 == 0:
            continue
        else:
            # binary form g2 s^2 + g1 s t + g0 t^2 with roots (s : 1)
            sol = None
            for s, t in linalg.binary_roots([g2, g1, g0], F):
                if t != 0:
                    sol = F.reduce(a + F.reduce(s * F.inv(t)) * d)
                    break
            if sol is None:
                continue
        z = F.reduce(u + sol[:k] @ fp.Sigma.basis)
        if space.rank_of(z) == 1:
            return z
    return None


def second_fibre_criterion(fp: SecantFrame, u) -> tuple[bool, bool]:
    """(join(u, Σ_p) ⊂ SX, join(u, Σ_p) ∩ X ⊄ Q_p), decided over the closure.

    The second value asks whether u + σ lies in X for some σ ∈ Σ̂_p, i.e.
    whether u × σ + t p# = -u# together with t = q(σ) has a solution.  On the
    affine solution set of the linear part, q(σ) - t is a polynomial; it has
    a zero over the closure iff it is nonconstant or identically zero.
    """
    u = _check_fibre_input(fp, u)
    M = join(u, fp.Sigma)
    in_sx = subspace_in_SX(M)
    sys = _affine_system(fp, u)
    if sys.base is None:
        return in_sx, False
    const, lin, quad = _residual_quadratic(fp, sys)
    nonconstant = bool(np.any(lin != 0) or np.any(quad != 0))
    return in_sx, nonconstant or const == 0


def _linear_form_in(M: ProjSubspace, H_rows: np.ndarray) -> np.ndarray:
    """Coordinates on M of a linear form vanishing on the hyperplane spanned by H_rows."""
    F = M.space.field
    coords = np.array([M.coords(h) for h in H_rows], dtype=F.dtype)
    ker = linalg.kernel(coords, F)
    if len(ker) != 1:
        raise InvariantViolation("expected a hyperplane of the fibre")
    return ker[0]


def _cubic_from_linear(F, k: int, forms) -> np.ndarray:
    """Coefficients (on sorted cubic monomials) of a product of three linear forms."""
    from itertools import combinations_with_replacement, product

    index = {m: i for i, m in enumerate(combinations_with_replacement(range(k), 3))}
    out = F.zeros(len(index))
    a, b, c = forms
    for i, j, l in product(range(k), repeat=3):
        coef = F.reduce(F.reduce(a[i] * b[j]) * c[l])
        if coef != 0:
            key = tuple(sorted((i, j, l)))
            out[index[key]] = F.reduce(out[index[key]] + coef)
    return out


def _proportional(F, v, w) -> bool:
    return bool(np.any(v != 0)) and linalg.rank(np.vstack([v, w]), F) == 1


def fibre_type(fp: SecantFrame, u, rng: np.random.Generator | None = None) -> FibreResult:
    """Decide the type of the fibre of the projection from Σ_p through u.

    Type 2 when join(u, Σ_p) lies in SX; then X meets it in Q_p and a linear
    P^(n/4+1).  Otherwise type 1: the fibre is join(u, T̂_x Q_p) for the unique
    x ∈ Q_p with u ∈ T̂_x X, and N restricted to join(u, Σ_p) is
    (equation of Σ_p)^2 times the equation of the fibre.
    """
    space, F = fp.space, fp.space.field
    u = _check_fibre_input(fp, u)
    rng = rng if rng is not None else np.random.default_rng(0)
    M = join(u, fp.Sigma)
    n = space.n
    if subspace_in_SX(M):
        z = _find_off_sigma_X_point(fp, u, rng)
        if z is None:
            raise InvariantViolation("type-2 fibre without a point of X off Q_p")
        Lam = fp.Sigma.intersect(tangent_space_X(space, z))
        Pi = join(z, Lam)
        if Lam.dim != n // 4 or Pi.dim != n // 4 + 1 or not restrict_adjoint(Pi).vanishes:
            raise InvariantViolation(
                f"Π has dimension {Pi.dim} (Λ: {Lam.dim}); expected a P^{n // 4 + 1} inside X"
            )
        return FibreResult(2, M, None, Pi, Lam)

    K = fp.Sigma.intersect(ProjSubspace.kernel_of(space, space.cross_matrix(u)))
    x = _unique_Q_point(fp, K)
    if x is None:
        raise InvariantViolation(f"type-1 witness is not unique (kernel dim {K.dim})")
    TQ = fp.tangent_space_Q(x)
    fibre = join(u, TQ)
    # N|_M must be (form of Σ_p)^2 (form of the fibre), up to a scalar
    ls = _linear_form_in(M, fp.Sigma.basis)
    lr = _linear_form_in(M, fibre.basis)
    _, cubic = restrict_norm(M)
    if not _proportional(F, cubic, _cubic_from_linear(F, len(M.basis), (ls, ls, lr))):
        raise InvariantViolation("SX ∩ join(u, Σ_p) is not 2Σ_p + fibre")
    return FibreResult(1, fibre, ProjPoint.of(space, x))


def _unique_Q_point(fp: SecantFrame, K: ProjSubspace):
    """The single point of Q_p ∩ K over the closure, or None if it is not a single point."""
    F = fp.space.field
    if K.is_empty:
        return None
    if K.dim == 0:
        v = K.basis[0]
        return v if fp.q(v) == 0 else None
    if K.dim == 1:
        a, b = K.basis
        qa, qb, qab = fp.q(a), fp.q(b), fp.bilinear(a, b)
        # q(s a + t b) must be a nonzero square: discriminant zero
        if F.reduce(qab * qab - qa * qb) != 0 or (qa == 0 and qb == 0 and qab == 0):
            return None
        roots = linalg.binary_roots([qa, F.reduce(2 * qab), qb], F)
        s, t = roots[0]
        return F.reduce(s * a + t * b)
    return None


# --------------------------------------------------------------------------
# the family Q^x


@dataclass(frozen=True)
class QuadricFit:
    """A quadric hypersurface in a linear span, in the span's coordinates."""

    span: ProjSubspace
    gram: np.ndarray

    def value(self, v) -> object:
        F = self.span.space.field
        c = np.asarray(self.span.coords(v), dtype=F.dtype)
        return F.reduce(c @ F.reduce(self.gram @ c))

    def polar(self, v, w) -> object:
        F = self.span.space.field
        c = np.asarray(self.span.coords(v), dtype=F.dtype)
        d = np.asarray(self.span.coords(w), dtype=F.dtype)
        return F.reduce(c @ F.reduce(self.gram @ d))


def fit_quadric(space: JordanSpace, points: np.ndarray) -> QuadricFit:
    """The unique quadric through sampled points inside their span."""
    F = space.field
    span = ProjSubspace.span(space, points)
    k = len(span.basis)
    mons = quadratic_monomials(k)
    coords = np.array([span.coords(v) for v in points], dtype=F.dtype)
    if len(points) < 2 * len(mons):
        raise PreconditionError("not enough points to fit a quadric")
    E = np.stack([F.reduce(coords[:, i] * coords[:, j]) for i, j in mons], axis=1)
    ker = linalg.kernel(E, F)
    if len(ker) != 1:
        raise DegenerateSample(f"quadric fit has a {len(ker)}-dimensional solution space")
    return QuadricFit(span, quadratic_form_matrix(F, k, ker[0]))


def family_quadric(space: JordanSpace, x, rng: np.random.Generator) -> QuadricFit:
    """Q^x: the closure of {[x × y] : y ∈ X}, the Gauss image of the cone S(x, X).

    For z = x + y with x, y in X, z# = x × y.  The fit is verified to be a
    smooth quadric of dimension n/2.
    """
    from .sampler import random_X_vector

    x = _require_rank(space, x, 1, "family_quadric")
    F = space.field
    m = space.n // 2 + 2
    count = 2 * (m * (m + 1) // 2) + 8
    pts = []
    while len(pts) < count:
        v = space.cross(x, random_X_vector(space, rng))
        if np.any(v != 0):
            pts.append(v)
    fit = fit_quadric(space, np.array(pts, dtype=F.dtype))
    if fit.span.dim != space.n // 2 + 1 or linalg.rank(fit.gram, F) != len(fit.span.basis):
        raise DegenerateSample("Q^x is not a smooth quadric of dimension n/2")
    return fit


def qx_tangent_cone_criterion(space: JordanSpace, x, p, q, rng=None) -> tuple[bool, bool]:
    """(Q_p ∩ Q_q is positive dimensional, [q#] lies in the tangent cone of Q^x at [p#]).

    The tangent cone of a smooth quadric at one of its points is the quadric
    cut with the embedded tangent hyperplane there.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    x = _require_rank(space, x, 1, "qx_tangent_cone_criterion")
    p = _require_rank(space, p, 2, "qx_tangent_cone_criterion")
    q = _require_rank(space, q, 2, "qx_tangent_cone_criterion")
    fp, fq = contact_locus(space, p), contact_locus(space, q)
    if not (fp.in_Q(x) and fq.in_Q(x)):
        raise PreconditionError("x must lie on both secant quadrics")
    if fp.Sigma == fq.Sigma:
        positive = True
    else:
        positive = secant_intersection(fp, fq).dim > 0
    Qx = family_quadric(space, x, rng)
    ps, qs = space.adjoint(p), space.adjoint(q)
    if Qx.value(ps) != 0 or Qx.value(qs) != 0:
        raise InvariantViolation("Gauss images of p, q are not on Q^x")
    in_cone = Qx.polar(ps, qs) == 0
    return positive, bool(in_cone)
