from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from severi.errors import PreconditionError, SameContact
from severi.jordan import JordanSpace
from severi.projgeo import ProjSubspace, join, subspace_in_SX
from severi.sampler import random_rank2_vector, random_X_vector, type2_configuration
from severi.secant import (
    contact_locus,
    family_quadric,
    fibre_type,
    fit_quadric,
    qx_tangent_cone_criterion,
    second_fibre_criterion,
    secant_intersection,
    tangent_hyperplane,
    tangent_space_X,
)

MODELS = ("veronese", "segre", "grass", "e6")
seeds = st.integers(0, 2**32 - 1)
_SPACES = {m: JordanSpace(m, 65537) for m in MODELS}


def test_veronese_contact_locus_of_diag():
    J = JordanSpace("veronese", "q")
    fp = contact_locus(J, J.diag(1, 1, 0))
    assert fp.Sigma == ProjSubspace.span(J, J.E(1), J.E(2), J.basis_vector(5))
    # q = l1 l2 - l3^2 in the coordinates of (E11, E22, c)
    h = Fraction(1, 2)
    assert fp.gram.tolist() == [[0, h, 0], [h, 0, 0], [0, 0, -1]]
    assert fp.H == ProjSubspace.kernel_of(J, J.trace_covector(J.E(3))[None, :])


@pytest.mark.parametrize("model", MODELS)
def test_contact_locus_shape(model, rng):
    J = _SPACES[model]
    for _ in range(5):
        fp = contact_locus(J, random_rank2_vector(J, rng))
        assert fp.Sigma.dim == J.n // 2 + 1
        assert fp.H.contains(fp.Sigma) and fp.Sigma.contains(fp.p.rep)
        x = fp.random_Q_point(rng)
        assert J.rank_of(x) == 1 and fp.in_Q(x)
        v = fp.Sigma.random_point(rng)
        if J.rank_of(v) == 2:
            assert tangent_hyperplane(J, v) == fp.H


def test_contact_locus_rejects_rank_one():
    J = _SPACES["segre"]
    with pytest.raises(PreconditionError):
        contact_locus(J, J.E(1))


@given(st.sampled_from(MODELS), seeds)
@settings(max_examples=20)
def test_quadric_tangent_space(model, seed):
    J = _SPACES[model]
    rng = np.random.default_rng(seed)
    fp = contact_locus(J, random_rank2_vector(J, rng))
    x = fp.random_Q_point(rng)
    T = fp.tangent_space_Q(x)
    assert T == tangent_space_X(J, x).intersect(fp.Sigma)
    assert T.dim == J.n // 2


@pytest.mark.parametrize("model", MODELS)
def test_tangent_space_of_X(model, rng):
    J = _SPACES[model]
    x = random_X_vector(J, rng)
    T = tangent_space_X(J, x)
    assert T.dim == J.n and T.contains(x)


@pytest.mark.parametrize("model", MODELS)
def test_secant_intersections(model, rng):
    J = _SPACES[model]
    p, q = random_rank2_vector(J, rng), random_rank2_vector(J, rng)
    assert secant_intersection(contact_locus(J, p), contact_locus(J, q)).dim == 0
    fp = contact_locus(J, p)
    u = fp.Sigma.random_point(rng)
    with pytest.raises(SameContact):
        secant_intersection(fp, contact_locus(J, u))


@pytest.mark.parametrize("model", ["segre", "grass", "e6"])
def test_type2_fibre_structure(model, rng):
    J = _SPACES[model]
    p, z = type2_configuration(J, rng)
    fp = contact_locus(J, p)
    u = join(z, fp.Sigma).random_point(rng)
    res = fibre_type(fp, u, rng)
    assert res.kind == 2
    assert res.Pi.dim == J.n // 4 + 1 and res.Lambda.dim == J.n // 4
    assert second_fibre_criterion(fp, u) == (True, True)
    assert secant_intersection(fp, contact_locus(J, u)).dim == J.n // 4


@pytest.mark.parametrize("model", MODELS)
def test_type1_fibre_has_unique_witness(model, rng):
    J = _SPACES[model]
    F = J.field
    fp = contact_locus(J, random_rank2_vector(J, rng))
    for _ in range(20):
        x, a = fp.random_Q_point(rng), fp.H.random_point(rng)
        if J.norm_form(a) != 0:
            break
    u = F.reduce(x + F.reduce(-J.trace_form(x, J.adjoint(a)) * F.inv(J.norm_form(a))) * a)
    res = fibre_type(fp, u, rng)
    w = res.witness_x.rep
    assert res.kind == 1 and fp.in_Q(w)
    assert res.fibre == join(u, fp.tangent_space_Q(w))
    assert subspace_in_SX(res.fibre)
    assert second_fibre_criterion(fp, u) == (False, False)


def test_fibre_input_checks(rng):
    J = _SPACES["grass"]
    fp = contact_locus(J, random_rank2_vector(J, rng))
    with pytest.raises(PreconditionError):
        fibre_type(fp, fp.Sigma.random_point(rng))
    with pytest.raises(PreconditionError):
        fibre_type(fp, J.identity())


def test_fit_quadric_recovers_conic():
    J = JordanSpace("veronese", "q")
    # the conic of rank-one matrices diag-block [[s^2, st], [st, t^2]]
    pts = [J.rank_one_point([s, t, 0]) for s in range(1, 5) for t in range(-3, 4) if t]
    fit = fit_quadric(J, np.array(pts, dtype=object))
    assert fit.span.dim == 2
    assert all(fit.value(v) == 0 for v in pts)
    assert fit.value(J.diag(1, 1, 0)) != 0


@pytest.mark.parametrize("model", ["veronese", "segre", "grass"])
def test_family_quadric_and_cone_criterion(model, rng):
    J = _SPACES[model]
    F = J.field
    x = random_X_vector(J, rng)
    Qx = family_quadric(J, x, rng)
    assert Qx.span.dim == J.n // 2 + 1
    p = F.reduce(x + random_X_vector(J, rng))
    q = F.reduce(x + random_X_vector(J, rng))
    assert qx_tangent_cone_criterion(J, x, p, q, rng) == (False, False)
    assert qx_tangent_cone_criterion(J, x, p, p, rng) == (True, True)
