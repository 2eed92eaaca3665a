"""Plücker coordinates, Fano tangent spaces and the quadric envelope.

A line through a, b lies on SX iff the binary cubic
N(s a + t b) = s^3 N(a) + s^2 t T(a#, b) + s t^2 T(a, b#) + t^3 N(b)
vanishes.  Moving the frame to (a + α, b + β) with α, β in a complement W of
the line gives local equations of F(SX) in Hom(L, W) ≅ k^(2(N-1)); their
differentials at α = β = 0 are

    d/dα: ( T(a#, ·), T(a × b, ·), T(b#, ·), 0 )
    d/dβ: ( 0, T(a#, ·), T(a × b, ·), T(b#, ·) )

so the Zariski tangent space of F(SX) at L has dimension 2(N-1) minus the
rank of this 4 x 2(N-1) matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from . import linalg
from .errors import InvariantViolation, NotInCubic, PreconditionError
from .jordan import JordanSpace
from .projgeo import LineRecord, subspace_in_SX

# --------------------------------------------------------------------------
# Plücker coordinates


def plucker_index(n_coords: int) -> list[tuple[int, int]]:
    return list(combinations(range(n_coords), 2))


def wedge(a, b, field) -> np.ndarray:
    """Plücker vector (a_i b_j - a_j b_i)_{i<j}."""
    a = np.asarray(a, dtype=field.dtype)
    b = np.asarray(b, dtype=field.dtype)
    i, j = np.triu_indices(len(a), k=1)
    return field.reduce(a[i] * b[j] - a[j] * b[i])


def plucker(L: LineRecord) -> np.ndarray:
    """Plücker coordinates of a line from its canonical basis.

    The canonical basis makes the coordinate at the pivot pair equal to 1,
    which is the ProjPoint normalisation.
    """
    return wedge(L.a, L.b, L.space.field)


def plucker_relations(n_coords: int) -> list[dict]:
    """The quadrics p_ij p_kl - p_ik p_jl + p_il p_jk, i < j < k < l.

    Each is returned as {(m1, m2): coefficient} over index pairs m1 <= m2 of
    Plücker coordinates.
    """
    pos = {pair: idx for idx, pair in enumerate(plucker_index(n_coords))}
    rels = []
    for i, j, k, l in combinations(range(n_coords), 4):
        rel = {}
        for (x, y), sign in (((pos[i, j], pos[k, l]), 1), ((pos[i, k], pos[j, l]), -1), ((pos[i, l], pos[j, k]), 1)):
            rel[tuple(sorted((x, y)))] = sign
        rels.append(rel)
    return rels


def quadric_monomial_count(n_plucker: int) -> int:
    return n_plucker * (n_plucker + 1) // 2


def _monomial_position(m: int):
    """Index of the pair (x, y), x <= y, in the lexicographic list of pairs of range(m)."""

    def pos(x, y):
        return x * m - x * (x - 1) // 2 + (y - x)

    return pos


def plucker_relations_space(N: int, field) -> np.ndarray:
    """Canonical basis (RREF) of the quadrics vanishing on the Grassmannian of lines in P^N.

    The Plücker relations span this space; it has dimension C(N + 1, 4).
    """
    n = N + 1
    m = comb(n, 2)
    pos = _monomial_position(m)
    rels = plucker_relations(n)
    M = field.zeros((len(rels), quadric_monomial_count(m)))
    for r, rel in enumerate(rels):
        for (x, y), c in rel.items():
            M[r, pos(x, y)] = field(c)
    return linalg.span(M, field, M.shape[1])


def quadric_evaluations(points: np.ndarray, field) -> np.ndarray:
    """Rows: (w_x w_y)_{x <= y} for each Plücker vector w."""
    points = np.asarray(points, dtype=field.dtype)
    m = points.shape[1]
    x, y = np.triu_indices(m)
    return field.reduce(points[:, x] * points[:, y])


# --------------------------------------------------------------------------
# tangent spaces of the Fano scheme


def fano_jacobian(space: JordanSpace, a, b, complement: np.ndarray) -> np.ndarray:
    """Differential of the four chart equations at the frame (a, b).

    ``complement`` has N - 1 rows spanning a complement of span(a, b).
    """
    F = space.field
    forms = np.stack(
        [
            space.trace_covector(space.adjoint(a)),
            space.trace_covector(space.cross(a, b)),
            space.trace_covector(space.adjoint(b)),
        ]
    )
    vals = F.reduce(forms @ np.asarray(complement, dtype=F.dtype).T)  # (3, N-1)
    zero = F.zeros((1, vals.shape[1]))
    d_alpha = np.vstack([vals, zero])
    d_beta = np.vstack([zero, vals])
    return np.concatenate([d_alpha, d_beta], axis=1)


def _coordinate_complement(basis: np.ndarray, field) -> np.ndarray:
    _, pivots = linalg.echelon(basis, field)
    dim = basis.shape[1]
    others = [i for i in range(dim) if i not in pivots]
    return field.eye(dim)[others]


def _random_chart(space: JordanSpace, L: LineRecord, rng: np.random.Generator):
    F = space.field
    while True:
        g = F.random(rng, (2, 2))
        if F.reduce(g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]) != 0:
            break
    a, b = F.reduce(g @ L.line.basis)
    while True:
        C = F.random(rng, (space.dim - 2, space.dim))
        if linalg.rank(np.vstack([a, b, C]), F) == space.dim:
            return a, b, C


@dataclass(frozen=True)
class FanoTangent:
    dim: int
    chart_dims: tuple


def fano_tangent(L: LineRecord, rng: np.random.Generator | None = None) -> FanoTangent:
    """Zariski tangent dimension of F(SX) at L, computed in two charts.

    The first chart uses the canonical frame and the coordinate complement of
    its pivots; the second a random frame and random complement.  Disagreement
    is an invariant violation.
    """
    space = L.space
    F = space.field
    if not subspace_in_SX(L.line):
        raise NotInCubic("the line is not contained in SX")
    rng = rng if rng is not None else np.random.default_rng(0)
    total = 2 * (space.dim - 2)
    J1 = fano_jacobian(space, L.a, L.b, _coordinate_complement(L.line.basis, F))
    a, b, C = _random_chart(space, L, rng)
    J2 = fano_jacobian(space, a, b, C)
    d1 = total - linalg.rank(J1, F)
    d2 = total - linalg.rank(J2, F)
    if d1 != d2:
        raise InvariantViolation(f"Fano tangent dimension depends on the chart ({d1} vs {d2})")
    return FanoTangent(d1, (d1, d2))


def fano_tangent_dim(L: LineRecord) -> int:
    return fano_tangent(L).dim


# --------------------------------------------------------------------------
# the quadric envelope


@dataclass(frozen=True)
class Envelope:
    """Quadrics on Plücker space vanishing at every sample.

    ``basis`` is the canonical RREF basis over the monomials w_x w_y (x <= y);
    ``history`` lists (samples used, envelope dimension) checkpoints.
    """

    dim: int
    basis: np.ndarray
    equals_plucker: bool
    stabilized: bool
    samples: int
    history: tuple


def _envelope_of_rows(rows_iter, m: int, field, checkpoints) -> tuple[list, np.ndarray]:
    """Feed evaluation rows and snapshot the kernel at each checkpoint count."""
    snaps = []
    if isinstance(field, linalg.PrimeField):
        se = linalg.StreamingEchelon(m, field)
        seen = 0
        for batch in rows_iter:
            se.add(batch)
            seen += len(batch)
            if seen in checkpoints:
                snaps.append((seen, se.result().kernel))
        return snaps
    acc = None
    seen = 0
    for batch in rows_iter:
        acc = batch if acc is None else np.vstack([acc, batch])
        seen += len(batch)
        if seen in checkpoints:
            acc = linalg.rref(acc, field).rows
            snaps.append((seen, linalg.kernel(acc, field)))
    return snaps


def quadric_envelope(samples, field, N: int | None = None, batch: int = 512) -> Envelope:
    """Quadrics through the Plücker points ``samples`` (one per row).

    Needs at least 2 dim Sym^2 samples.  The envelope of the first half is
    compared with that of all samples; equality is the stabilisation check.
    The envelope always contains the Plücker relations when the samples come
    from lines; failing that containment raises InvariantViolation.
    """
    samples = np.asarray(samples, dtype=field.dtype)
    n_pl = samples.shape[1]
    m = quadric_monomial_count(n_pl)
    if len(samples) < 2 * m:
        raise PreconditionError(f"need at least {2 * m} samples, got {len(samples)}")
    if N is None:
        N = int(round((1 + (1 + 8 * n_pl) ** 0.5) / 2)) - 1
    half = len(samples) // 2

    def rows(stop_points):
        start = 0
        for stop in stop_points:
            for s in range(start, stop, batch):
                yield quadric_evaluations(samples[s:min(s + batch, stop)], field)
            start = stop

    # batch boundaries land exactly on the two checkpoints
    snaps = _envelope_of_rows(rows([half, len(samples)]), m, field, {half, len(samples)})
    (_, K_half), (_, K_all) = snaps
    stabilized = K_half.shape == K_all.shape and np.array_equal(K_half, K_all)
    P = plucker_relations_space(N, field)
    if len(K_all) < len(P) or linalg.rank(np.vstack([K_all, P]), field) != len(K_all):
        raise InvariantViolation("quadric envelope misses a Plücker relation")
    equals = K_all.shape == P.shape and np.array_equal(K_all, P)
    return Envelope(
        len(K_all), K_all, bool(equals), bool(stabilized), len(samples),
        ((half, len(K_half)), (len(samples), len(K_all))),
    )
