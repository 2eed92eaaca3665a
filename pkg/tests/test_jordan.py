from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from severi.jordan import ALGEBRAS, JordanSpace, adjoint_direct, model_name, norm_direct

MODELS = ("veronese", "segre", "grass", "e6")

seeds = st.integers(0, 2**32 - 1)
models = st.sampled_from(MODELS)
fields = st.sampled_from([31991, "q"])


def space(model, field):
    return _SPACES.setdefault((model, field), JordanSpace(model, field))


_SPACES: dict = {}


@pytest.mark.parametrize("model,dims", [("veronese", (6, 5, 2)), ("segre", (9, 8, 4)), ("grass", (15, 14, 8)), ("e6", (27, 26, 16))])
def test_dimensions(model, dims):
    J = JordanSpace(model)
    assert (J.dim, J.N, J.n) == dims


def test_aliases_and_errors():
    assert model_name("split-octonion") == "e6"
    with pytest.raises(ValueError):
        model_name("g2")
    with pytest.raises(ValueError):
        JordanSpace("segre", 3)


@pytest.mark.parametrize("d", [1, 2, 4, 8])
def test_algebra_unit_and_norm(d, rng):
    A = ALGEBRAS[d]
    one = np.asarray(A.one(), dtype=np.int64)
    for _ in range(20):
        x, y = rng.integers(-5, 6, size=d), rng.integers(-5, 6, size=d)
        assert np.array_equal(A.mul(one, x), x) and np.array_equal(A.mul(x, one), x)
        assert A.norm(A.mul(x, y)) == A.norm(x) * A.norm(y)
        # x conj(x) = n(x) 1
        assert np.array_equal(A.mul(x, A.conj(x)), A.norm(x) * one)


def test_split_complex_unit_is_not_first_basis_vector():
    A = ALGEBRAS[2]
    assert list(np.asarray(A.one(), dtype=int)) == [1, 1]


@given(models, fields, seeds)
def test_adjoint_identities(model, field, seed):
    J = space(model, field)
    F = J.field
    x = J.random(np.random.default_rng(seed))
    N = J.norm_form(x)
    xs = J.adjoint(x)
    assert np.array_equal(J.adjoint(xs), F.reduce(N * x))
    assert J.norm_form(xs) == F.reduce(N * N)
    assert J.trace_form(xs, x) == F.reduce(3 * N)
    assert np.array_equal(J.cross(x, x), F.reduce(2 * xs))


@given(models, seeds)
def test_structure_constants_match_direct_formulas(model, seed):
    # the bilinear/trilinear tables against the Hermitian-matrix formulas
    J = space(model, "q")
    x = J.random(np.random.default_rng(seed))
    assert J.norm_form(x) == norm_direct(J.algebra, x)
    assert np.array_equal(J.adjoint(x), adjoint_direct(J.algebra, x))


@given(models, seeds)
def test_trilinear_form_is_symmetric(model, seed):
    J = space(model, 31991)
    rng = np.random.default_rng(seed)
    x, y, z = (J.random(rng) for _ in range(3))
    t = J.trilinear_norm(x, y, z)
    assert t == J.trilinear_norm(y, z, x) == J.trilinear_norm(z, y, x)
    assert J.trace_form(J.cross(x, y), z) == t


@given(models, seeds)
def test_U_multiplies_norm(model, seed):
    J = space(model, 65537)
    F = J.field
    rng = np.random.default_rng(seed)
    g, y = J.random(rng), J.random(rng)
    Ng = J.norm_form(g)
    assert J.norm_form(F.reduce(J.U(g) @ y)) == F.reduce(Ng * Ng * J.norm_form(y))


@pytest.mark.parametrize("model", MODELS)
@pytest.mark.parametrize("field", [31991, "q"])
def test_rank_one_point_gate_always_passes(model, field, rng):
    J = JordanSpace(model, field)
    d = J.algebra.dim
    for _ in range(200 if field != "q" else 40):
        x = J.rank_one_point(J.field.random(rng, 3 * d))
        assert J.rank_of(x) == 1


def test_ranks_of_diagonal_elements(spaces):
    J = spaces("grass")
    assert J.rank_of(J.E(1)) == 1
    assert J.rank_of(J.diag(1, 1, 0)) == 2
    assert J.rank_of(J.identity()) == 3
    assert J.rank_of(J.zero()) == 0
    assert J.norm_form(J.identity()) == 1


@pytest.mark.parametrize("model", ["veronese", "segre"])
def test_matrix_models_against_determinant(model, rng):
    # N is the determinant and # the adjugate (sympy oracle)
    J = JordanSpace(model, "q")
    for _ in range(10):
        x = J.random(rng)
        M = sympy.Matrix(J.as_matrix(x).tolist())
        assert J.norm_form(x) == M.det()
        adj = M.adjugate()
        assert np.array_equal(J.as_matrix(J.adjoint(x)), np.array(adj.tolist(), dtype=object))
        assert np.array_equal(J.from_matrix(J.as_matrix(x)), x)


def test_veronese_rank_one_is_v_vt():
    J = JordanSpace("veronese", "q")
    v = [Fraction(1), Fraction(2), Fraction(-3)]
    x = J.rank_one_point(v)
    assert np.array_equal(J.as_matrix(x), np.outer(v, v))
