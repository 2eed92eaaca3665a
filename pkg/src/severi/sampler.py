"""Seeded, reproducible sampling of points, rank-two points and lines.

Every stream is a NumPy ``Generator`` over the counter-based Philox bit
generator keyed by ``(seed, index)``, so sample ``i`` of a campaign can be
regenerated on its own, in any worker, on any platform.

Configurations with a prescribed incidence (type-2 fibres, lines in X) are
built in a fixed normal form and then moved by a random element of the
structure group, a product of quadratic representations U_g with N(g) != 0.
These preserve X and SX and carry contact loci to contact loci.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DegenerateSample, PreconditionError
from .jordan import JordanSpace
from .projgeo import LineRecord, ProjPoint, join
from .secant import contact_locus, tangent_space_X

_MASK64 = (1 << 64) - 1


def make_rng(seed: int, index: int = 0) -> np.random.Generator:
    """Philox stream for sample ``index`` of a run seeded with ``seed``."""
    key = (seed & _MASK64) | ((index & _MASK64) << 64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class SampleConfig:
    model: str
    field: object = 31991  # a prime, or "q" for the rationals
    seed: int = 0
    retries: int = 64
    degenerate_threshold: float = 0.05  # fraction of degenerate samples tolerated by campaigns

    def space(self) -> JordanSpace:
        return _space(self.model, self.field)

    def rng(self, index: int) -> np.random.Generator:
        return make_rng(self.seed, index)


_SPACES: dict = {}


def _space(model, field) -> JordanSpace:
    key = (model, field)
    if key not in _SPACES:
        _SPACES[key] = JordanSpace(model, field)
    return _SPACES[key]


# --------------------------------------------------------------------------
# points


def random_X_vector(space: JordanSpace, rng: np.random.Generator, tries: int = 64) -> np.ndarray:
    """A point of X from a random composition-algebra triple."""
    F = space.field
    for _ in range(tries):
        try:
            return space.rank_one_point(F.random(rng, 3 * space.algebra.dim))
        except DegenerateSample:
            continue
    raise DegenerateSample("could not sample a point of X")


def random_rank2_vector(space: JordanSpace, rng: np.random.Generator, tries: int = 64) -> np.ndarray:
    """x + y for two random points of X, resampled until it has rank two."""
    F = space.field
    for _ in range(tries):
        v = F.reduce(random_X_vector(space, rng) + random_X_vector(space, rng))
        if space.rank_of(v) == 2:
            return v
    raise DegenerateSample("could not sample a rank-two point")


def sample_X(cfg: SampleConfig, index: int = 0) -> ProjPoint:
    space = cfg.space()
    return ProjPoint.of(space, random_X_vector(space, cfg.rng(index), cfg.retries))


def sample_SX_rank2(cfg: SampleConfig, index: int = 0) -> ProjPoint:
    space = cfg.space()
    return ProjPoint.of(space, random_rank2_vector(space, cfg.rng(index), cfg.retries))


def random_invertible(space: JordanSpace, rng: np.random.Generator) -> np.ndarray:
    while True:
        g = space.random(rng)
        if space.norm_form(g) != 0:
            return g


def random_structure_map(space: JordanSpace, rng: np.random.Generator, factors: int = 3) -> np.ndarray:
    """Matrix of U_{g_k} ... U_{g_1} for random invertible g_i."""
    F = space.field
    M = F.eye(space.dim)
    for _ in range(factors):
        M = F.reduce(space.U(random_invertible(space, rng)) @ M)
    return M


def null_element(space: JordanSpace, rng: np.random.Generator) -> np.ndarray:
    """A nonzero element of the composition algebra with norm zero."""
    A, F = space.algebra, space.field
    if A.dim == 1:
        raise PreconditionError("the base field has no nonzero null elements")

    def nonzero():
        while True:
            c = F.random(rng)
            if c != 0:
                return c

    if A.dim == 2:
        return F.array([nonzero(), 0])
    if A.dim == 4:
        # rank-one 2x2 matrix (u0, u1)^T (v0, v1)
        u0, u1, v0, v1 = nonzero(), F.random(rng), nonzero(), F.random(rng)
        return F.array([u0 * v0, u0 * v1, u1 * v0, u1 * v1])
    a = nonzero()
    uv = F.random(rng, 6)
    b = F.reduce(F.reduce(uv[:3] @ uv[3:]) * F.inv(a))
    return F.reduce(F.array([a, *uv, b]))


def type2_configuration(space: JordanSpace, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """(p, z): a rank-two p and z ∈ X ∩ H_p outside Σ_p, so join(z, Σ_p) is a type-2 fibre.

    Normal form p = diag(1, 1, 0), z = E11 + (null element in the b slot).
    """
    if space.n < 4:
        raise PreconditionError("type-2 fibres need n >= 4")
    F, d = space.field, space.algebra.dim
    zero = F.zeros(d)
    p = space.diag(1, 1, 0)
    z = space.from_parts(1, 0, 0, zero, null_element(space, rng), zero)
    g = random_structure_map(space, rng)
    return F.reduce(g @ p), F.reduce(g @ z)


def line_in_X(space: JordanSpace, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Two points spanning a line in X: E11 and a null element in the c slot (x × y = 0)."""
    if space.n < 4:
        raise PreconditionError("X contains no lines when n = 2")
    F, d = space.field, space.algebra.dim
    zero = F.zeros(d)
    x = space.E(1)
    y = space.from_parts(0, 0, 0, zero, zero, null_element(space, rng))
    g = random_structure_map(space, rng)
    return F.reduce(g @ x), F.reduce(g @ y)


# --------------------------------------------------------------------------
# lines


class Strategy(enum.Enum):
    IN_TANGENT_SPACE = "in-tangent-space"
    IN_TYPE2_FIBRE = "in-type2-fibre"
    SECANT = "secant"
    IN_X = "in-x"
    MIXED = "mixed"


def line_in_tangent_space(space: JordanSpace, rng: np.random.Generator):
    """(x, a, b): a random line span(a, b) inside T̂_x X for a random x ∈ X."""
    x = random_X_vector(space, rng)
    T = tangent_space_X(space, x)
    return x, T.random_point(rng), T.random_point(rng)


def sample_line(cfg: SampleConfig, strategy: Strategy, index: int = 0) -> LineRecord:
    """A line on SX drawn with the given strategy; the record carries its trace."""
    space = cfg.space()
    rng = cfg.rng(index)
    strategy = Strategy(strategy)
    trace = {"seed": cfg.seed, "index": index, "strategy": strategy.value}
    if strategy is Strategy.MIXED:
        feasible = [Strategy.IN_TANGENT_SPACE, Strategy.SECANT]
        if space.n >= 4:
            feasible += [Strategy.IN_TYPE2_FIBRE, Strategy.IN_X]
        strategy = feasible[int(rng.integers(len(feasible)))]
        trace["drawn"] = strategy.value
    for attempt in range(cfg.retries):
        try:
            a, b = _draw_line(space, strategy, rng)
        except DegenerateSample:
            continue
        if not np.any(a != 0) or not np.any(b != 0):
            continue
        if linalg.rank(np.vstack([a, b]), space.field) != 2:
            continue
        trace["attempts"] = attempt + 1
        return LineRecord.through(space, a, b, **trace)
    raise DegenerateSample(f"strategy {strategy.value} exhausted {cfg.retries} retries")


def _draw_line(space: JordanSpace, strategy: Strategy, rng):
    if strategy is Strategy.SECANT:
        return random_X_vector(space, rng), random_X_vector(space, rng)
    if strategy is Strategy.IN_TANGENT_SPACE:
        _, a, b = line_in_tangent_space(space, rng)
        return a, b
    if strategy is Strategy.IN_X:
        return line_in_X(space, rng)
    if strategy is Strategy.IN_TYPE2_FIBRE:
        p, z = type2_configuration(space, rng)
        fibre = join(z, contact_locus(space, p).Sigma)
        return fibre.random_point(rng), fibre.random_point(rng)
    raise ValueError(f"unknown strategy {strategy}")
