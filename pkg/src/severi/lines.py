"""Lines on the secant cubic SX: classification, tangency loci, constructions.

For n > 2 every line on SX has one of five types:

  V    contained in X
  IV   meets X in a scheme of length 2 (secant, or tangent when non-reduced)
  III  meets X in one point
  II   misses X; two of its points have contact loci meeting in a P^(n/4)
  I    misses X; contact loci of its points meet in a single point

For the Veronese surface (n = 2) lines on SX are secant, tangent or
non-secant.  Types are decided by gcd degrees and subspace dimensions, i.e.
over the algebraic closure, never by counting rational points.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DegenerateSample, InvariantViolation, NotInCubic, PreconditionError, SameContact
from .hilbert import QuadricLocus, analyse_quadrics
from .jordan import JordanSpace
from .projgeo import LineRecord, ProjPoint, ProjSubspace, join, line_X_intersection, restrict_adjoint, subspace_in_SX
from .sampler import (
    line_in_X,
    line_in_tangent_space,
    make_rng,
    random_X_vector,
    type2_configuration,
)
from .secant import contact_locus, fibre_type, secant_intersection, tangent_space_X


class LineType(enum.Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    V = "V"
    SECANT = "SECANT"
    TANGENT = "TANGENT"
    NONSECANT = "NONSECANT"


FIVE_TYPES = (LineType.I, LineType.II, LineType.III, LineType.IV, LineType.V)
VERONESE_TYPES = (LineType.SECANT, LineType.TANGENT, LineType.NONSECANT)


def feasible_types(space: JordanSpace) -> tuple[LineType, ...]:
    return VERONESE_TYPES if space.n == 2 else FIVE_TYPES


def _require_in_SX(L: LineRecord) -> None:
    if "in_sx" not in L.cache:
        L.cache["in_sx"] = subspace_in_SX(L.line)
    if not L.cache["in_sx"]:
        raise NotInCubic("the line is not contained in SX")


def _off_X_points(L: LineRecord, count: int = 2) -> list[np.ndarray]:
    """Distinct rank-two points of L, chosen deterministically."""
    space, F = L.space, L.space.field
    out = []
    for s, t in [(1, 0), (0, 1), (1, 1), (1, 2), (2, 1), (1, -1), (1, 3)]:
        v = L.point(F(s), F(t))
        if space.rank_of(v) == 2:
            out.append(v)
            if len(out) == count:
                return out
    raise InvariantViolation("could not find two rank-two points on a line of SX")


def _contact_pair(L: LineRecord):
    space = L.space
    p, q = _off_X_points(L)
    fp, fq = contact_locus(space, p), contact_locus(space, q)
    try:
        return secant_intersection(fp, fq)
    except SameContact as exc:
        raise InvariantViolation("two points of the line share a contact locus") from exc


def classify_line(L: LineRecord) -> LineType:
    """The type of a line on SX (see the module docstring)."""
    if "type" in L.cache:
        return L.cache["type"]
    _require_in_SX(L)
    space = L.space
    inter = line_X_intersection(L)
    veronese = space.n == 2
    if inter.length == math.inf:
        if veronese:
            raise InvariantViolation("the Veronese surface contains no lines")
        kind = LineType.V
    elif inter.length == 2:
        L.cache["tangent"] = inter.tangent
        if veronese:
            kind = LineType.TANGENT if inter.tangent else LineType.SECANT
        else:
            kind = LineType.IV
    elif inter.length == 1:
        if veronese:
            raise InvariantViolation("a line on the Veronese secant cubic meets X in length 1")
        W = _contact_pair(L)
        if W.dim == 0:
            raise InvariantViolation("type III line whose contact loci meet in a point")
        L.cache["contact_intersection"] = W
        kind = LineType.III
    else:
        if veronese:
            kind = LineType.NONSECANT
        else:
            W = _contact_pair(L)
            L.cache["contact_intersection"] = W
            kind = LineType.I if W.kind == "point" else LineType.II
    L.cache["type"] = kind
    return kind


# --------------------------------------------------------------------------
# tangency loci


@dataclass(frozen=True)
class TangencyLocus:
    """Points x ∈ X whose tangent space contains L.

    ``kernel_space`` is P{y : y × a = y × b = 0} for a basis a, b of L, and
    ``points`` describes X ∩ kernel_space over the closure.
    """

    kernel_space: ProjSubspace
    points: QuadricLocus

    @property
    def status(self) -> str:
        return self.points.status

    @property
    def decided(self) -> bool:
        return self.points.status != "undecided"

    @property
    def nonempty(self) -> bool | None:
        return self.points.nonempty


def tangency_locus(L: LineRecord, max_vars: int | None = None) -> TangencyLocus:
    _require_in_SX(L)
    if "tangency" in L.cache:
        return L.cache["tangency"]
    space = L.space
    M = np.concatenate([space.cross_matrix(L.a), space.cross_matrix(L.b)], axis=0)
    K = ProjSubspace.kernel_of(space, M)
    locus = analyse_quadrics(restrict_adjoint(K), K, max_vars=max_vars)
    res = TangencyLocus(K, locus)
    L.cache["tangency"] = res
    return res


# --------------------------------------------------------------------------
# constructions


def _draw(space: JordanSpace, kind: LineType, rng: np.random.Generator):
    """Two spanning points of a candidate line of the requested type."""
    if kind in (LineType.I, LineType.NONSECANT):
        _, a, b = line_in_tangent_space(space, rng)
        return a, b
    if kind in (LineType.IV, LineType.SECANT):
        return random_X_vector(space, rng), random_X_vector(space, rng)
    if kind is LineType.TANGENT:
        x = random_X_vector(space, rng)
        return x, tangent_space_X(space, x).random_point(rng)
    if kind is LineType.V:
        return line_in_X(space, rng)
    p, z = type2_configuration(space, rng)
    fp = contact_locus(space, p)
    if kind is LineType.II:
        M = join(z, fp.Sigma)
        return M.random_point(rng), M.random_point(rng)
    # type III: a point of Π off Λ joined with a point of Σ_p off Q_p
    fib = fibre_type(fp, z, rng)
    return fib.Pi.random_point(rng), fp.Sigma.random_point(rng)


def construct_line(space: JordanSpace, kind: LineType | str, seed: int, retries: int = 64) -> LineRecord:
    """A line of the requested type, confirmed by :func:`classify_line`.

    Candidates come from the standard constructions: lines in a tangent space
    (I), generic lines in a type-2 fibre (II), lines joining Π and Σ_p - Q_p
    (III), secant lines (IV) and lines in X (V).  Candidates that classify
    otherwise are counted as degenerate and redrawn.
    """
    kind = LineType(kind)
    if kind not in feasible_types(space):
        raise PreconditionError(f"type {kind.value} does not occur for the {space.model} model")
    rng = make_rng(seed)
    degenerate = 0
    for attempt in range(retries):
        try:
            a, b = _draw(space, kind, rng)
            if linalg.rank(np.vstack([a, b]), space.field) != 2:
                raise DegenerateSample("coincident points")
            L = LineRecord.through(space, a, b, seed=seed, attempt=attempt, requested=kind.value)
            if classify_line(L) is kind:
                L.trace["degenerate"] = degenerate
                return L
        except DegenerateSample:
            pass
        degenerate += 1
    raise DegenerateSample(f"no line of type {kind.value} after {retries} attempts")


def closure_pencil(space: JordanSpace, rng: np.random.Generator):
    """Lines L_t = span(a, t b + (1 - t) x) in T̂_x X, a, b generic.

    L_t is of type I for general t and passes through x at t = 0.
    Returns (x, function t -> LineRecord).
    """
    x, a, b = line_in_tangent_space(space, rng)
    F = space.field

    def line(t):
        t = F(t)
        return LineRecord.through(space, a, F.reduce(t * b + (1 - t) * x), pencil_t=str(t))

    return x, line


# --------------------------------------------------------------------------
# the Veronese case


@dataclass(frozen=True)
class GaussImage:
    """Kernels of the rank-two symmetric matrices on a non-secant Veronese line.

    ``span`` is the 2-dimensional span U of the kernels in k^3 and
    ``annihilator`` spans Ann(U); ``tangency_point`` is the rank-one matrix
    v v^T for v = annihilator.
    """

    span: np.ndarray
    kernels: tuple
    annihilator: np.ndarray
    tangency_point: ProjPoint


def veronese_gauss_image(L: LineRecord, points: int = 4) -> GaussImage:
    space = L.space
    if space.model != "veronese":
        raise PreconditionError("veronese_gauss_image needs the veronese model")
    if classify_line(L) is not LineType.NONSECANT:
        raise PreconditionError("veronese_gauss_image needs a non-secant line")
    F = space.field
    kernels = []
    for i in range(points):
        v = L.point(F(1), F(i)) if i else L.point(F(0), F(1))
        K = linalg.kernel(space.as_matrix(v), F)
        if len(K) != 1:
            raise InvariantViolation("a point of a non-secant line is not of rank two")
        kernels.append(K[0])
    U = linalg.span(np.array(kernels, dtype=F.dtype), F, 3)
    if len(U) != 2:
        raise InvariantViolation(f"kernels span a {len(U)}-dimensional space, expected 2")
    ann = linalg.annihilator(U, F, 3)[0]
    x = space.from_matrix(np.outer(ann, ann))
    return GaussImage(U, tuple(kernels), ann, ProjPoint.of(space, F.reduce(x)))
