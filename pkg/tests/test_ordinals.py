import pytest
from hypothesis import given, strategies as st

from quiverhom.ordinals import LadderError, LadderSystem, OrdinalT, default_ladder, limit, parse_ordinal

ords = st.builds(OrdinalT, st.integers(0, 5), st.integers(0, 30))


def test_printing_and_parsing():
    assert str(OrdinalT(0, 3)) == "3"
    assert str(OrdinalT(1, 0)) == "w"
    assert str(OrdinalT(2, 3)) == "w*2+3"
    assert parse_ordinal("w*2+3") == OrdinalT(2, 3)
    assert parse_ordinal("w") == limit(1)
    with pytest.raises(ValueError):
        parse_ordinal("w^2")


@given(ords)
def test_parse_round_trip(o):
    assert parse_ordinal(str(o)) == o


@given(ords, ords)
def test_lexicographic_order(a, b):
    assert (a < b) == ((a.k, a.n) < (b.k, b.n))


@given(ords)
def test_successor_decomposition(o):
    if o.is_successor:
        assert o.delta.is_limit or o.delta.is_zero
        assert OrdinalT(o.delta.k, o.delta.n + o.n_gamma + 1) == o
    else:
        with pytest.raises(ValueError):
            o.n_gamma


def test_default_ladder_values():
    lad = default_ladder(3, 20)
    assert [lad.zeta(limit(1), n) for n in range(4)] == [OrdinalT(0, n + 1) for n in range(4)]
    assert [lad.zeta(limit(2), n) for n in range(3)] == [OrdinalT(0, 1), OrdinalT(1, 2), OrdinalT(1, 3)]
    assert lad.zeta(limit(3), 5) == OrdinalT(2, 6)


@given(st.integers(1, 5), st.integers(0, 25))
def test_default_ladder_invariants(kmax, depth):
    lad = default_ladder(kmax, depth)
    for alpha, n, z in lad.points():
        assert z.is_successor and z.n_gamma == n
        assert z < alpha
    for alpha in lad.limits():
        # every limit block below alpha is met once the depth allows it
        if depth >= alpha.k - 1:
            assert lad.blocks_reached(alpha) == list(range(alpha.k))


def test_shared_points_only_at_bottom():
    lad = default_ladder(3, 20)
    shared = lad.shared_points()
    assert OrdinalT(0, 1) in shared
    assert all(n <= 1 for pts in shared.values() for _, n in pts)


def test_invalid_ladders_rejected():
    lad = default_ladder(2, 3)
    with pytest.raises(LadderError):
        lad.with_override(2, 1, OrdinalT(1, 3))  # successor index must be 1
    with pytest.raises(LadderError):
        lad.with_override(1, 2, OrdinalT(1, 3))  # not below w
    with pytest.raises(LadderError):
        LadderSystem(1, 2, {(1, 0): OrdinalT(0, 1), (1, 1): OrdinalT(0, 2)})
    ok = lad.with_override(2, 0, OrdinalT(1, 1))
    assert ok.zeta(limit(2), 0) == OrdinalT(1, 1)
