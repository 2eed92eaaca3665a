"""Verification campaigns, one per structural claim.

Each experiment evaluates independent samples indexed 0..K-1; sample i uses
the Philox stream (seed, i), so results do not depend on worker count or
completion order.  A sample ends as one of

  pass        the claim held
  fail        the claim failed (a serialized witness is attached)
  degenerate  a generic construction hit a special case; not counted either way
  undecided   the decision procedure declined to answer

and may contribute tallies (value counts per key) to the report.
"""

from __future__ import annotations

import math
import os
import warnings
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import linalg
from .errors import DegenerateSample, InvariantViolation
from .fano import fano_tangent, plucker, quadric_envelope, quadric_monomial_count, wedge
from .hilbert import analyse_quadrics, supported_at
from .jordan import MODELS, JordanSpace, model_name
from .lines import (
    LineType,
    classify_line,
    closure_pencil,
    construct_line,
    feasible_types,
    tangency_locus,
    veronese_gauss_image,
)
from .projgeo import LineRecord, ProjPoint, join, restrict_adjoint
from .report import Counts, Report, encode_vector
from .sampler import (
    SampleConfig,
    Strategy,
    make_rng,
    random_rank2_vector,
    random_X_vector,
    sample_line,
    type2_configuration,
)
from .secant import (
    contact_locus,
    fibre_type,
    qx_tangent_cone_criterion,
    second_fibre_criterion,
    secant_intersection,
    tangent_hyperplane,
    tangent_space_X,
)

WORKERS_ENV = "SEVERI_WORKERS"


@dataclass
class Outcome:
    status: str  # pass | fail | degenerate | undecided
    tallies: dict = dc_field(default_factory=dict)
    witness: dict | None = None


class ConfigError(ValueError):
    """Unknown experiment or an infeasible model/field combination."""


@dataclass(frozen=True)
class Experiment:
    name: str
    claim: str
    sample: Callable | None
    models: tuple = tuple(MODELS)
    default_samples: int = 100
    rational_ok: bool = True
    finalize: Callable | None = None
    run: Callable | None = None  # whole-campaign override


REGISTRY: dict[str, Experiment] = {}


def experiment(name, claim, models=tuple(MODELS), default_samples=100, rational_ok=True, finalize=None):
    def deco(fn):
        REGISTRY[name] = Experiment(name, claim, fn, tuple(models), default_samples, rational_ok, finalize)
        return fn

    return deco


def _w(**vectors) -> dict:
    return {k: (encode_vector(v) if isinstance(v, np.ndarray) else v) for k, v in vectors.items()}


def _fail(witness: dict, **tallies) -> Outcome:
    return Outcome("fail", tallies, witness)


# --------------------------------------------------------------------------
# shared constructions


def _generic_fibre_point(space: JordanSpace, fp, rng, tries: int = 32) -> np.ndarray:
    """A generic rank-two point of SX ∩ H_p off Σ_p.

    On the line through x ∈ Q_p and a ∈ H_p, N(x + s a) = s^2 T(x, a#) + s^3 N(a),
    so the third intersection with SX is rational.
    """
    F = space.field
    for _ in range(tries):
        x = fp.random_Q_point(rng)
        a = fp.H.random_point(rng)
        Na = space.norm_form(a)
        if Na == 0:
            continue
        s = F.reduce(-space.trace_form(x, space.adjoint(a)) * F.inv(Na))
        u = F.reduce(x + s * a)
        if space.rank_of(u) == 2 and not fp.Sigma.contains(u):
            return u
    raise DegenerateSample("no generic point in the tangent hyperplane section")


def _fibre_sample(space: JordanSpace, rng, index: int):
    """(frame, u, expected kind): alternately generic and type-2 fibre points."""
    if space.n < 4 or index % 2 == 0:
        fp = contact_locus(space, random_rank2_vector(space, rng))
        return fp, _generic_fibre_point(space, fp, rng), None
    p, z = type2_configuration(space, rng)
    fp = contact_locus(space, p)
    M = join(z, fp.Sigma)
    for _ in range(32):
        u = M.random_point(rng)
        if space.rank_of(u) == 2 and not fp.Sigma.contains(u):
            return fp, u, 2
    raise DegenerateSample("no rank-two point in the type-2 fibre")


# --------------------------------------------------------------------------
# contact loci and secant quadrics


@experiment(
    "contact-dims",
    "For rank-two p: dim Σ_p = n/2 + 1, p ∈ Σ_p ⊂ H_p, Q_p = Σ_p ∩ X is a smooth quadric "
    "of dimension n/2, and every rank-two point of Σ_p has tangent hyperplane H_p.",
)
def _contact_dims(space, rng, index):
    p = random_rank2_vector(space, rng)
    fp = contact_locus(space, p)
    F = space.field
    for _ in range(16):
        u = fp.Sigma.random_point(rng)
        if fp.q(u) != 0:
            break
    else:
        raise DegenerateSample("no point of Σ_p off Q_p")
    tallies = {"dim_sigma": fp.Sigma.dim, "quadric_rank": linalg.rank(fp.gram, F)}
    if fp.Sigma.dim != space.n // 2 + 1 or tallies["quadric_rank"] != space.n // 2 + 2:
        return _fail(_w(p=p, reason="wrong dimension or singular quadric"), **tallies)
    if not fp.Sigma.contains(p) or fp.Sigma.intersect(fp.H) != fp.Sigma:
        return _fail(_w(p=p, reason="Σ_p does not contain p or is not inside H_p"), **tallies)
    if space.rank_of(u) != 2 or tangent_hyperplane(space, u) != fp.H:
        return _fail(_w(p=p, u=u, reason="tangent hyperplane differs along Σ_p"), **tallies)
    return Outcome("pass", tallies)


@experiment(
    "quadric-tangent",
    "For x ∈ Q_p the tangent space of Q_p at x equals T̂_x X ∩ Σ_p.",
)
def _quadric_tangent(space, rng, index):
    fp = contact_locus(space, random_rank2_vector(space, rng))
    x = fp.random_Q_point(rng)
    lhs = tangent_space_X(space, x).intersect(fp.Sigma)
    rhs = fp.tangent_space_Q(x)
    if lhs != rhs:
        return _fail(_w(p=fp.p.rep, x=x, dims=[lhs.dim, rhs.dim]))
    return Outcome("pass", {"dim": rhs.dim})


@experiment(
    "unique-tangency",
    "Distinct points of X have distinct embedded tangent spaces.",
    default_samples=50,
)
def _unique_tangency(space, rng, index):
    x, y = random_X_vector(space, rng), random_X_vector(space, rng)
    if ProjPoint.of(space, x) == ProjPoint.of(space, y):
        raise DegenerateSample("coincident points")
    Tx, Ty = tangent_space_X(space, x), tangent_space_X(space, y)
    if Tx == Ty:
        return _fail(_w(x=x, y=y))
    return Outcome("pass", {"dim": Tx.dim})


@experiment(
    "secant-intersections",
    "Σ_p ∩ Σ_q lies in X and is a point or a P^(n/4); it is a point when q ∉ H_p, and a "
    "P^(n/4) for two points of a type-2 fibre.",
)
def _secant_intersections(space, rng, index):
    p, q = random_rank2_vector(space, rng), random_rank2_vector(space, rng)
    fp, fq = contact_locus(space, p), contact_locus(space, q)
    W = secant_intersection(fp, fq)
    off = not fp.H.contains(q)
    tallies = {"random_dim": W.dim, "q_off_Hp": off}
    if off and W.dim != 0:
        return _fail(_w(p=p, q=q, reason="q off H_p but positive-dimensional intersection"), **tallies)
    if space.n >= 4:
        p2, z = type2_configuration(space, rng)
        f2 = contact_locus(space, p2)
        M = join(z, f2.Sigma)
        u = M.random_point(rng)
        if space.rank_of(u) != 2 or f2.Sigma.contains(u):
            raise DegenerateSample("fibre point of rank one")
        W2 = secant_intersection(f2, contact_locus(space, u))
        tallies["fibre_pair_dim"] = W2.dim
        if W2.dim != space.n // 4:
            return _fail(_w(p=p2, u=u, reason="type-2 pair without a P^(n/4)"), **tallies)
    return Outcome("pass", tallies)


@experiment(
    "qx-cone",
    "For p, q ∈ S(x, X) - X: Q_p ∩ Q_q is positive dimensional iff [q#] lies in the tangent "
    "cone of Q^x at [p#].",
    default_samples=40,
)
def _qx_cone(space, rng, index):
    F = space.field
    mode = index % 3
    if mode == 2 and space.n >= 4:
        # positive-dimensional pair: two points of a type-2 fibre and x on Σ_p ∩ Σ_u
        p, z = type2_configuration(space, rng)
        fp = contact_locus(space, p)
        u = join(z, fp.Sigma).random_point(rng)
        if space.rank_of(u) != 2 or fp.Sigma.contains(u):
            raise DegenerateSample("fibre point of rank one")
        W = secant_intersection(fp, contact_locus(space, u))
        x, q = W.W.random_point(rng), u
    else:
        x = random_X_vector(space, rng)
        p = F.reduce(x + random_X_vector(space, rng))
        q = p if mode == 1 else F.reduce(x + random_X_vector(space, rng))
        if space.rank_of(p) != 2 or space.rank_of(q) != 2:
            raise DegenerateSample("rank-one sum")
    a, b = qx_tangent_cone_criterion(space, x, p, q, rng)
    tallies = {"pair": f"{a}/{b}"}
    if a != b:
        return _fail(_w(x=x, p=p, q=q, booleans=[a, b]), **tallies)
    return Outcome("pass", tallies)


# --------------------------------------------------------------------------
# fibres of the projection from Σ_p


@experiment(
    "fibre-types",
    "For u ∈ SX ∩ H_p - Σ_p the fibre through u is either join(u, T̂_x Q_p) for a unique "
    "x ∈ Q_p, with SX ∩ join(u, Σ_p) = 2Σ_p + fibre, or join(u, Σ_p) ⊂ SX meeting X in "
    "Q_p and a P^(n/4+1).",
)
def _fibre_types(space, rng, index):
    fp, u, expected = _fibre_sample(space, rng, index)
    res = fibre_type(fp, u, rng)
    pair = second_fibre_criterion(fp, u)
    tallies = {"kind": res.kind, "criterion": f"{pair[0]}/{pair[1]}"}
    if pair[0] != pair[1] or pair[0] != (res.kind == 2):
        return _fail(_w(p=fp.p.rep, u=u, reason="criterion disagrees with the fibre type"), **tallies)
    if expected is not None and res.kind != expected:
        return _fail(_w(p=fp.p.rep, u=u, reason="constructed type-2 point classified as type 1"), **tallies)
    return Outcome("pass", tallies)


@experiment(
    "second-fibre",
    "join(u, Σ_p) ⊂ SX iff join(u, Σ_p) meets X outside Q_p.",
    models=("segre", "grass", "e6"),
)
def _second_fibre(space, rng, index):
    fp, u, expected = _fibre_sample(space, rng, index)
    a, b = second_fibre_criterion(fp, u)
    tallies = {"criterion": f"{a}/{b}"}
    if a != b:
        return _fail(_w(p=fp.p.rep, u=u, booleans=[a, b]), **tallies)
    if expected == 2 and not a:
        return _fail(_w(p=fp.p.rep, u=u, reason="constructed type-2 fibre not in SX"), **tallies)
    return Outcome("pass", tallies)


@experiment(
    "position-intersection",
    "For q ∈ SX ∩ H_p - Σ_p: Q_p ∩ Q_q is a point if q is in a type-1 fibre and positive "
    "dimensional if q is in a type-2 fibre.",
    models=("segre", "grass", "e6"),
)
def _position_intersection(space, rng, index):
    fp, q, _ = _fibre_sample(space, rng, index)
    kind = fibre_type(fp, q, rng).kind
    W = secant_intersection(fp, contact_locus(space, q))
    tallies = {"kind/dim": f"{kind}/{W.dim}"}
    if (kind == 1) != (W.dim == 0):
        return _fail(_w(p=fp.p.rep, q=q, kind=kind, dim=W.dim), **tallies)
    return Outcome("pass", tallies)


# --------------------------------------------------------------------------
# lines


def _field_key(space: JordanSpace):
    c = space.field.characteristic
    return "q" if c == 0 else c


def _sub_seed(rng) -> int:
    return int(rng.integers(0, 2**63 - 1))


def _reparametrized(L: LineRecord, rng) -> LineRecord:
    F = L.space.field
    while True:
        g = F.random(rng, (2, 2))
        if F.reduce(g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]) != 0:
            a, b = F.reduce(g @ L.line.basis)
            return LineRecord.through(L.space, a, b)


@experiment(
    "five-types",
    "Lines built by the standard constructions classify as requested (secant/tangent/"
    "non-secant for n = 2, types I-V for n > 2), independently of the chosen basis.",
)
def _five_types(space, rng, index):
    kinds = feasible_types(space)
    kind = kinds[index % len(kinds)]
    L = construct_line(space, kind, _sub_seed(rng))
    again = classify_line(_reparametrized(L, rng))
    tallies = {"type": kind.value, "first_draw": L.trace.get("degenerate", 0) == 0}
    if again is not kind:
        return _fail(_w(a=L.a, b=L.b, requested=kind.value, got=again.value), **tallies)
    return Outcome("pass", tallies)


def _lines_in_tangent_finalize(space, outcomes) -> list:
    undecided = sum(o.status == "undecided" for o in outcomes)
    if outcomes and Fraction(undecided, len(outcomes)) >= Fraction(1, 10):
        return [{"reason": f"undecided rate {undecided}/{len(outcomes)} is not below 10%"}]
    return []


@experiment(
    "lines-in-tangent",
    "For n > 2, lines of types I, III, IV, V lie in some T̂_x X, and type II lines do when "
    "n >= 8; the point x is unique for type I.",
    models=("segre", "grass", "e6"),
    default_samples=250,
    finalize=_lines_in_tangent_finalize,
)
def _lines_in_tangent(space, rng, index):
    kind = feasible_types(space)[index % 5]
    L = construct_line(space, kind, _sub_seed(rng))
    tl = tangency_locus(L)
    tallies = {f"{kind.value}": tl.status}
    for x in tl.points.witnesses:
        if space.rank_of(x) != 1 or np.any(space.cross(x, L.a) != 0) or np.any(space.cross(x, L.b) != 0):
            return _fail(_w(a=L.a, b=L.b, x=x, reason="witness does not contain the line"), **tallies)
    if not tl.decided:
        return Outcome("undecided", tallies)
    if kind is LineType.I and tl.status != "point":
        return _fail(_w(a=L.a, b=L.b, status=tl.status), **tallies)
    if kind is LineType.II and space.n == 4:
        return Outcome("pass", tallies)  # reported, no universal claim
    if not tl.nonempty:
        return _fail(_w(a=L.a, b=L.b, type=kind.value, status=tl.status), **tallies)
    return Outcome("pass", tallies)


def _fano_expected(space: JordanSpace, kind: LineType) -> int | None:
    """Expected tangent dimension for the cells the claim covers (None: report only)."""
    if kind in (LineType.I, LineType.II, LineType.NONSECANT, LineType.SECANT):
        return 2 * space.N - 6
    return None


def _secant_component_dim(space: JordanSpace, x, y) -> int:
    """Dimension of the family of secant lines at span(x, y), from its parametrisation.

    The differential of (x, y) -> x ∧ y maps T̂_x X × T̂_y X onto the span of
    ξ ∧ y and x ∧ η; its projective dimension is the family's dimension.
    """
    F = space.field
    Tx, Ty = tangent_space_X(space, x).basis, tangent_space_X(space, y).basis
    vecs = [wedge(v, y, F) for v in Tx] + [wedge(x, w, F) for w in Ty]
    return linalg.rank(np.array(vecs, dtype=F.dtype), F) - 1


@experiment(
    "fano-dims",
    "F(SX) has the expected dimension 2N - 6 = 3n - 2: the Zariski tangent space has that "
    "dimension at lines of types I and II (n > 2) and on both components (secant and "
    "non-secant lines) for n = 2.",
    default_samples=40,
)
def _fano_dims(space, rng, index):
    if space.n == 2:
        cells = (LineType.NONSECANT, LineType.SECANT, LineType.TANGENT)
    else:
        cells = (LineType.I, LineType.II, LineType.III, LineType.IV, LineType.V)
    kind = cells[index % len(cells)]
    L = construct_line(space, kind, _sub_seed(rng))
    t = fano_tangent(L, rng)
    expected = _fano_expected(space, kind)
    tallies = {kind.value: t.dim}
    if space.n == 2 and kind is LineType.SECANT:
        tallies["SECANT component dim"] = _secant_component_dim(space, *_two_X_points(L))
    if expected is not None and t.dim != expected:
        return _fail(_w(a=L.a, b=L.b, type=kind.value, tangent_dim=t.dim, expected=expected), **tallies)
    return Outcome("pass", tallies)


def _two_X_points(L: LineRecord):
    from .projgeo import line_X_intersection

    pts = line_X_intersection(L).support
    if len(pts) != 2:
        raise DegenerateSample("secant line with irrational points")
    return pts[0].rep, pts[1].rep


@experiment(
    "n4-closure",
    "Type-I lines in T̂_x X specialising to a line through x have limits of type III or IV.",
    models=("segre", "grass", "e6"),
    default_samples=20,
)
def _n4_closure(space, rng, index):
    x, line = closure_pencil(space, rng)
    general = [classify_line(line(t)) for t in (1, 2, 3)]
    limit = classify_line(line(0))
    tallies = {"limit": limit.value, "general": "/".join(k.value for k in general)}
    if any(k is not LineType.I for k in general):
        raise DegenerateSample("pencil member is not of type I")
    if limit not in (LineType.III, LineType.IV):
        return _fail(_w(x=x, limit=limit.value), **tallies)
    return Outcome("pass", tallies)


# --------------------------------------------------------------------------
# the Veronese surface


def _veronese_components_finalize(space, outcomes) -> list:
    seen = Counter()
    for o in outcomes:
        seen.update(o.tallies.get("_components", []))
        o.tallies.pop("_components", None)
    missing = [c for c in ("C1", "C2") if not seen[c]]
    return [{"reason": f"component {c} never realised"} for c in missing]


@experiment(
    "veronese-components",
    "Lines on the Veronese secant cubic are secant/tangent (one component) or non-secant "
    "lines in a tangent plane (the other), each non-secant line having a unique tangency point.",
    models=("veronese",),
    finalize=_veronese_components_finalize,
)
def _veronese_components(space, rng, index):
    strategies = (Strategy.SECANT, Strategy.IN_TANGENT_SPACE, Strategy.MIXED, "tangent")
    strat = strategies[index % len(strategies)]
    if strat == "tangent":
        L = construct_line(space, LineType.TANGENT, _sub_seed(rng))
    else:
        cfg = SampleConfig("veronese", _field_key(space), seed=_sub_seed(rng))
        L = sample_line(cfg, strat)
    kind = classify_line(L)
    comps = {LineType.SECANT: ["C1"], LineType.TANGENT: ["C1", "C2"], LineType.NONSECANT: ["C2"]}[kind]
    tallies = {"type": kind.value, "_components": comps}
    if kind is LineType.NONSECANT:
        tl = tangency_locus(L)
        tallies["tangency"] = tl.status
        if tl.status != "point":
            return _fail(_w(a=L.a, b=L.b, status=tl.status), **tallies)
    return Outcome("pass", tallies)


@experiment(
    "veronese-gauss",
    "For a non-secant Veronese line the kernels of its rank-two points span a fixed plane U, "
    "Ann(U) is its unique tangency point, and X ∩ T̂_x X = {x}.",
    models=("veronese",),
)
def _veronese_gauss(space, rng, index):
    L = construct_line(space, LineType.NONSECANT, _sub_seed(rng))
    g = veronese_gauss_image(L, points=5)
    tl = tangency_locus(L)
    if tl.status != "point" or ProjPoint.of(space, tl.points.witnesses[0]) != g.tangency_point:
        return _fail(_w(a=L.a, b=L.b, reason="Ann(U) is not the tangency point"))
    x = random_X_vector(space, rng)
    T = tangent_space_X(space, x)
    Q = restrict_adjoint(T)
    loc = analyse_quadrics(Q, T)
    if loc.status == "point":
        only_x = ProjPoint.of(space, loc.witnesses[0]) == ProjPoint.of(space, x)
    else:
        only_x = loc.status == "finite" and supported_at(Q, T, x)
    if not only_x:
        return _fail(_w(x=x, reason="X ∩ T̂_x X is not {x}", status=loc.status))
    return Outcome("pass", {"span_dim": len(g.span), "scheme_length": loc.degree})


# --------------------------------------------------------------------------
# the quadric envelope


def _envelope_run(exp: Experiment, space: JordanSpace, cfg: SampleConfig, samples: int):
    n_pl = space.dim * (space.dim - 1) // 2
    m = quadric_monomial_count(n_pl)
    total = max(samples, 2 * m)
    pts, drawn = [], Counter()
    degenerate = 0
    for i in range(total):
        try:
            L = sample_line(cfg, Strategy.MIXED, i)
        except DegenerateSample:
            degenerate += 1
            continue
        drawn[L.trace["drawn"]] += 1
        pts.append(plucker(L))
    F = space.field
    E = quadric_envelope(np.array(pts, dtype=F.dtype)[: 2 * (len(pts) // 2)], F, space.N)
    # sanity oracle: random lines of P^N give exactly the Plücker relations
    rng = make_rng(cfg.seed, 2**62)
    grass_pts = [wedge(F.random(rng, space.dim), F.random(rng, space.dim), F) for _ in range(2 * m)]
    oracle = quadric_envelope(np.array(grass_pts, dtype=F.dtype), F, space.N)
    feasible = {s.value for s in (Strategy.IN_TANGENT_SPACE, Strategy.SECANT)}
    if space.n >= 4:
        feasible |= {Strategy.IN_TYPE2_FIBRE.value, Strategy.IN_X.value}
    notes = [f"stratum {s} absent from the sample" for s in sorted(feasible - set(drawn))]
    for note in notes:
        warnings.warn(note)
    ok = E.equals_plucker and E.stabilized and oracle.equals_plucker
    tallies = {
        "envelope_dim": {str(E.dim): 1},
        "plucker_dim": {str(math.comb(space.dim, 4)): 1},
        "equals_plucker": {str(E.equals_plucker).lower(): 1},
        "stabilized": {str(E.stabilized).lower(): 1},
        "grassmannian_oracle": {str(oracle.equals_plucker).lower(): 1},
        "strata": dict(drawn),
        "history": {f"{a}:{b}": 1 for a, b in E.history},
    }
    counts = Counts(total, degenerate, len(pts) if ok else 0, 0 if ok else len(pts))
    witnesses = [] if ok else [{"reason": "envelope differs from the Plücker relations", "dim": E.dim}]
    return counts, tallies, witnesses, notes


REGISTRY["torelli-envelope"] = Experiment(
    "torelli-envelope",
    "The quadrics on Plücker space containing F(SX) are exactly the quadrics containing "
    "the Grassmannian of lines.",
    None,
    models=("veronese", "segre", "grass"),
    default_samples=0,
    rational_ok=False,
    run=_envelope_run,
)


# --------------------------------------------------------------------------
# running


def _evaluate(name: str, model: str, field, seed: int, index: int) -> Outcome:
    exp = REGISTRY[name]
    space = SampleConfig(model, field, seed).space()
    rng = make_rng(seed, index)
    try:
        return exp.sample(space, rng, index)
    except DegenerateSample:
        return Outcome("degenerate")
    except InvariantViolation as exc:
        return Outcome("fail", {}, {"reason": f"invariant violation: {exc}", "index": index})


def _evaluate_star(args):
    return _evaluate(*args)


def workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _run_field(exp: Experiment, model: str, field, seed: int, samples: int):
    space = SampleConfig(model, field, seed).space()
    if exp.run is not None:
        return exp.run(exp, space, SampleConfig(model, field, seed), samples)
    jobs = [(exp.name, model, field, seed, i) for i in range(samples)]
    n = workers()
    if n > 1 and samples > 1:
        with ProcessPoolExecutor(max_workers=n) as pool:
            outcomes = list(pool.map(_evaluate_star, jobs, chunksize=max(1, samples // (4 * n))))
    else:
        outcomes = [_evaluate(*j) for j in jobs]
    extra = exp.finalize(space, outcomes) if exp.finalize else []
    counts = Counts(samples)
    tallies: dict = {}
    witnesses = []
    for i, o in enumerate(outcomes):
        if o.status == "pass":
            counts.passed += 1
        elif o.status == "fail":
            counts.failed += 1
            witnesses.append({"index": i, **(o.witness or {})})
        elif o.status == "degenerate":
            counts.degenerate += 1
        else:
            counts.undecided += 1
        for k, v in o.tallies.items():
            if k.startswith("_"):
                continue
            key = v if isinstance(v, str) else str(v).lower() if isinstance(v, bool) else str(v)
            tallies.setdefault(k, Counter())[key] += 1
    if extra:
        counts.failed += len(extra)
        witnesses.extend(extra)
    return counts, {k: dict(v) for k, v in tallies.items()}, witnesses, []


def replication_primes(prime: int) -> list[int]:
    """The requested prime followed by the first default prime different from it."""
    second = next(p for p in linalg.DEFAULT_PRIMES if p != prime)
    return [prime, second]


def run_experiment(
    name: str,
    model: str,
    field: str = "fp",
    prime: int = linalg.DEFAULT_PRIMES[0],
    seed: int = 0,
    samples: int | None = None,
    degenerate_threshold: Fraction = Fraction(1, 20),
) -> Report:
    """Run a campaign and aggregate it into a report.

    Over F_p the campaign is repeated over a second prime and passes only if
    both runs do.
    """
    if name not in REGISTRY:
        raise ConfigError(f"unknown experiment {name!r}")
    exp = REGISTRY[name]
    try:
        model = model_name(model)
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"unknown model {model!r}") from exc
    if model not in exp.models:
        raise ConfigError(f"experiment {name} does not apply to the {model} model")
    if field not in ("fp", "q"):
        raise ConfigError("field must be 'fp' or 'q'")
    if field == "q" and not exp.rational_ok:
        raise ConfigError(f"experiment {name} runs over F_p only")
    if field == "fp":
        try:
            linalg.PrimeField(prime)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    samples = exp.default_samples if samples is None else samples
    if samples < 0:
        raise ConfigError("samples must be nonnegative")
    fields = replication_primes(prime) if field == "fp" else ["q"]

    total = Counts()
    runs, tallies, witnesses, notes = [], {}, [], []
    for fld in fields:
        c, t, w, n = _run_field(exp, model, fld, seed, samples)
        runs.append({"field": str(fld), "samples": c.as_dict(), "tallies": t})
        for attr in ("attempted", "degenerate", "passed", "failed", "undecided"):
            setattr(total, attr, getattr(total, attr) + getattr(c, attr))
        for k, v in t.items():
            agg = tallies.setdefault(k, Counter())
            agg.update(v)
        witnesses.extend({"field": str(fld), **wi} for wi in w)
        notes.extend(n)
    if total.failed:
        status = "fail"
    elif total.attempted and Fraction(total.degenerate, total.attempted) > degenerate_threshold:
        status = "degenerate"
    else:
        status = "pass"
    return Report(
        experiment=name,
        claim=exp.claim,
        model=model,
        field=field,
        primes=[p for p in fields if p != "q"],
        seed=seed,
        counts=total,
        runs=runs,
        tallies={k: dict(sorted(v.items())) for k, v in tallies.items()},
        witnesses=witnesses,
        notes=notes,
        status=status,
        degenerate_threshold=degenerate_threshold,
    )
