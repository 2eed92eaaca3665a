import numpy as np
import pytest

from severi.errors import NotInCubic, PreconditionError
from severi.jordan import JordanSpace
from severi.lines import (
    LineType,
    classify_line,
    closure_pencil,
    construct_line,
    feasible_types,
    tangency_locus,
    veronese_gauss_image,
)
from severi.projgeo import LineRecord, ProjPoint

MODELS = ("veronese", "segre", "grass", "e6")
_SPACES = {m: JordanSpace(m, 31991) for m in MODELS}

# status of X ∩ {y : y × a = y × b = 0} per line type, decided over the closure
TANGENCY = {
    "segre": {"I": "point", "II": "empty", "III": "point", "IV": "finite", "V": "linear"},
    "grass": {"I": "point", "II": "point", "III": "linear", "IV": "nonempty", "V": "nonempty"},
    "e6": {"I": "point", "II": "linear", "III": "linear", "IV": "nonempty", "V": "nonempty"},
}


@pytest.mark.parametrize("model", MODELS)
def test_every_feasible_type_round_trips(model):
    J = _SPACES[model]
    for kind in feasible_types(J):
        for seed in range(3):
            L = construct_line(J, kind, seed)
            assert classify_line(LineRecord.through(J, L.b, J.field.reduce(L.a + L.b))) is kind
            assert L.trace["requested"] == kind.value


def test_infeasible_type_is_rejected():
    with pytest.raises(PreconditionError):
        construct_line(_SPACES["veronese"], LineType.V, 0)
    with pytest.raises(PreconditionError):
        construct_line(_SPACES["segre"], LineType.SECANT, 0)


def test_line_off_SX_is_rejected():
    J = _SPACES["grass"]
    with pytest.raises(NotInCubic):
        classify_line(LineRecord.through(J, J.identity(), J.E(1)))


@pytest.mark.parametrize("model", ["segre", "grass", "e6"])
def test_tangency_statuses(model):
    J = _SPACES[model]
    for name, status in TANGENCY[model].items():
        L = construct_line(J, LineType(name), 11)
        tl = tangency_locus(L)
        assert tl.status == status
        for x in tl.points.witnesses:
            assert J.rank_of(x) == 1
            assert not np.any(J.cross(x, L.a)) and not np.any(J.cross(x, L.b))


def test_type_one_tangency_point_contains_line():
    J = _SPACES["grass"]
    L = construct_line(J, LineType.I, 5)
    x = tangency_locus(L).points.witnesses[0]
    from severi.secant import tangent_space_X

    assert tangent_space_X(J, x).contains(L.line)


@pytest.mark.parametrize("model", ["segre", "grass"])
def test_closure_pencil_limit(model):
    J = _SPACES[model]
    x, line = closure_pencil(J, np.random.default_rng(8))
    assert classify_line(line(2)) is LineType.I
    assert line(0).line.contains(x)
    assert classify_line(line(0)) in (LineType.III, LineType.IV)


def test_veronese_types_and_gauss_image():
    J = _SPACES["veronese"]
    L = construct_line(J, LineType.NONSECANT, 3)
    g = veronese_gauss_image(L)
    assert g.span.shape == (2, 3)
    tl = tangency_locus(L)
    assert tl.status == "point"
    assert ProjPoint.of(J, tl.points.witnesses[0]) == g.tangency_point
    with pytest.raises(PreconditionError):
        veronese_gauss_image(construct_line(J, LineType.SECANT, 3))


def test_tangent_flag_on_tangent_lines():
    J = _SPACES["veronese"]
    L = construct_line(J, LineType.TANGENT, 1)
    assert L.cache["tangent"] is True
    assert construct_line(J, LineType.SECANT, 1).cache["tangent"] is False
