import numpy as np
import pytest

from severi import linalg
from severi.jordan import JordanSpace
from severi.lines import LineType, classify_line
from severi.sampler import (
    SampleConfig,
    Strategy,
    line_in_X,
    make_rng,
    random_X_vector,
    sample_line,
    sample_SX_rank2,
    sample_X,
    type2_configuration,
)
from severi.secant import contact_locus

MODELS = ("veronese", "segre", "grass", "e6")


def test_philox_streams_are_keyed_by_seed_and_index():
    a = make_rng(5, 0).integers(0, 2**62, 4)
    assert np.array_equal(a, make_rng(5, 0).integers(0, 2**62, 4))
    assert not np.array_equal(a, make_rng(5, 1).integers(0, 2**62, 4))
    assert not np.array_equal(a, make_rng(6, 0).integers(0, 2**62, 4))


@pytest.mark.parametrize("model", MODELS)
def test_X_samples_pass_gate_and_span(model):
    cfg = SampleConfig(model, 31991, seed=1)
    J = cfg.space()
    pts = [sample_X(cfg, i) for i in range(1000 if model != "e6" else 300)]
    assert all(p.rank == 1 for p in pts)
    # not all in one hyperplane
    assert linalg.rank(np.array([p.rep for p in pts[:3 * J.dim]]), J.field) == J.dim


@pytest.mark.parametrize("model", MODELS)
def test_rank_two_samples(model):
    cfg = SampleConfig(model, 31991, seed=2)
    J = cfg.space()
    rng = cfg.rng(0)
    sums = [J.field.reduce(random_X_vector(J, rng) + random_X_vector(J, rng)) for _ in range(1000)]
    assert sum(J.rank_of(v) == 2 for v in sums) >= 990
    for i in range(50):
        p = sample_SX_rank2(cfg, i)
        assert p.rank == 2 and J.norm_form(p.rep) == 0


def test_veronese_sample_is_symmetric_square():
    cfg = SampleConfig("veronese", "q", seed=3)
    J = cfg.space()
    M = J.as_matrix(sample_X(cfg).rep)
    assert linalg.rank(M, J.field) == 1 and np.array_equal(M, M.T)


def test_diag_is_rank_two():
    J = JordanSpace("e6", 31991)
    assert J.rank_of(J.field.reduce(J.E(1) + J.E(2))) == 2


@pytest.mark.parametrize("model", MODELS)
def test_reproducible_lines(model):
    cfg = SampleConfig(model, 65537, seed=77)
    for i in range(5):
        a, b = sample_line(cfg, Strategy.MIXED, i), sample_line(cfg, Strategy.MIXED, i)
        assert a.line == b.line and a.trace == b.trace
        assert a.trace["seed"] == 77 and a.trace["index"] == i


def test_strategy_outcomes():
    cfg = SampleConfig("grass", 31991, seed=5)
    assert all(classify_line(sample_line(cfg, Strategy.SECANT, i)) is LineType.IV for i in range(20))
    kinds = [classify_line(sample_line(cfg, Strategy.IN_TANGENT_SPACE, i)) for i in range(50)]
    assert kinds.count(LineType.I) >= 45
    assert all(classify_line(sample_line(cfg, Strategy.IN_X, i)) is LineType.V for i in range(10))


def test_veronese_mixed_reaches_both_components():
    cfg = SampleConfig("veronese", 31991, seed=6)
    kinds = {classify_line(sample_line(cfg, Strategy.MIXED, i)) for i in range(40)}
    assert LineType.NONSECANT in kinds and LineType.SECANT in kinds


@pytest.mark.parametrize("model", ["segre", "grass", "e6"])
def test_configurations(model):
    J = JordanSpace(model, 31991)
    rng = np.random.default_rng(0)
    p, z = type2_configuration(J, rng)
    fp = contact_locus(J, p)
    assert J.rank_of(z) == 1 and fp.H.contains(z) and not fp.Sigma.contains(z)
    x, y = line_in_X(J, rng)
    assert not np.any(J.cross(x, y)) and J.rank_of(x) == J.rank_of(y) == 1
