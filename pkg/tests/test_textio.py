import pytest
from hypothesis import given, settings, strategies as st

from quiverhom.corpus import CORPUS_QUIVERS
from quiverhom.linalg import QQ
from quiverhom.quiver import AInfinity, Circular, FiniteQuiver, decorated_ainfinity, linear_quiver
from quiverhom.rep import Representation
from quiverhom.textio import (
    ParseError,
    Scenario,
    parse_matrix,
    parse_quiver,
    parse_rep,
    parse_scenario,
    serialize_quiver,
    serialize_rep,
    serialize_scenario,
)
from strategies import corpus_reps


def test_a2_text():
    q = parse_quiver("vertex 1\nvertex 2\narrow a: 1 -> 2")
    assert q == FiniteQuiver.build([1, 2], [("a", 1, 2)])


def test_families():
    assert parse_quiver("# spine\nfamily ainfinity\n") == AInfinity()
    assert parse_quiver("family circular 4") == Circular(3)
    assert parse_quiver("family decorated-ainfinity").has_vertex("b7")


@pytest.mark.parametrize("q", [linear_quiver(3), Circular(2), AInfinity(), decorated_ainfinity()] + [f() for f in CORPUS_QUIVERS.values()])
def test_quiver_round_trip(q):
    back = parse_quiver(serialize_quiver(q))
    if isinstance(q, FiniteQuiver):
        assert back == q
    else:
        assert serialize_quiver(back) == serialize_quiver(q)


@pytest.mark.parametrize(
    "text, needle",
    [
        ("vertex 1\narrow a: 1 -> 2", "undeclared endpoint"),
        ("vertex 1\nvertex 1", "duplicate vertex"),
        ("vertex 1\nvertex 2\narrow a: 1 -> 2\narrow a: 2 -> 1", "duplicate arrow"),
        ("vertex 1\nfamily ainfinity", "cannot be mixed"),
        ("edge 1 2", "unknown declaration"),
        ("family circular zero", "integer"),
        ("vertex 1\narrow a 1 -> 1", "expected"),
    ],
)
def test_quiver_errors(text, needle):
    with pytest.raises(ParseError, match=needle) as info:
        parse_quiver(text)
    assert "line" in str(info.value)


def test_matrix_text():
    assert parse_matrix("[[1, 2], [3/2, 0]]") == [[1, 2], [QQ.parse("3/2"), 0]]
    assert parse_matrix("[]") == []
    with pytest.raises(ValueError):
        parse_matrix("[[1,2],[3]")


def test_rep_shape_error_names_arrow():
    q = linear_quiver(2)
    with pytest.raises(ParseError, match="a1") as info:
        parse_rep("dim 1 2\ndim 2 1\nmap a1 = [[1]]", q)
    assert info.value.line == 3


def test_ainfinity_rep_equals_hand_built():
    q = AInfinity()
    x = parse_rep("dim 0 1\ndim 1 1\nmap a0 = [[2]]\n", q)
    assert x == Representation(q, {0: 1, 1: 1}, {"a0": [[2]]})


def test_rep_errors():
    q = linear_quiver(2)
    with pytest.raises(ParseError, match="not a vertex|vertex"):
        parse_rep("dim 7 1", q)
    with pytest.raises(ParseError, match="twice"):
        parse_rep("dim 1 1\ndim 1 2", q)
    with pytest.raises(ParseError):
        parse_rep("map zz = [[1]]", q)


@settings(max_examples=100, deadline=None)
@given(corpus_reps())
def test_rep_round_trip(x):
    assert parse_rep(serialize_rep(x), x.quiver, x.field) == x


def test_scenario_defaults_and_round_trip():
    sc = parse_scenario("flavor circular 4\nphi random 9\nthresholds 1 2 3\nzeta 2 0 = 1 1\n")
    assert sc.flavor == "circular" and sc.circular_size == 4
    assert sc.kmax == 3 and sc.depth == 20
    assert sc.build_ladder().zeta(sc.build_ladder().limits()[1], 0).k == 1
    assert parse_scenario(serialize_scenario(sc)) == sc


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from(["ainf", "decorated-ainfinity", "circular"]),
    st.integers(1, 4),
    st.integers(1, 25),
    st.sampled_from(["witness", "zero", "random"]),
    st.integers(0, 99),
    st.lists(st.integers(0, 9), max_size=4),
    st.booleans(),
)
def test_scenario_round_trip(flavor, kmax, depth, phi, seed, thresholds, broken):
    sc = Scenario(
        flavor=flavor,
        circular_size=3 if flavor == "circular" else 0,
        kmax=kmax,
        depth=depth,
        phi=phi,
        phi_seed=seed if phi == "random" else 0,
        thresholds=thresholds[:kmax],
        uniformizer="broken" if broken else "coloring",
        broken_at=(1, 0) if broken else None,
    )
    assert parse_scenario(serialize_scenario(sc)) == sc


@pytest.mark.parametrize(
    "text",
    [
        "flavor hyperbolic",
        "kmax 0",
        "kmax 2\nthresholds 1 2 3",
        "zeta 1 0 = 0 5",
        "phi sometimes",
        "depth 3\ndepth 4",
        "thresholds -1",
    ],
)
def test_scenario_errors(text):
    with pytest.raises(ParseError):
        parse_scenario(text)
