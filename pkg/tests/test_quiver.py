import itertools

import pytest
from hypothesis import given, settings, strategies as st

from quiverhom.quiver import (
    AInfinity,
    Circular,
    ClosureError,
    FiniteQuiver,
    Path,
    QuiverError,
    a3_sink,
    closure,
    compose,
    d4_sink,
    decorated_ainfinity,
    is_acyclic,
    is_closed_in,
    linear_quiver,
    paths_from,
    paths_into,
    power_cycle,
    stationary,
)


@st.composite
def small_quivers(draw, max_v=4, max_a=5, acyclic=False):
    n = draw(st.integers(1, max_v))
    m = draw(st.integers(0, max_a))
    arrows = []
    for i in range(m):
        s = draw(st.integers(0, n - 1))
        t = draw(st.integers(0, n - 1))
        if acyclic and s >= t:
            s, t = min(s, t), max(s, t)
            if s == t:
                continue
        arrows.append((f"x{i}", s, t))
    return FiniteQuiver.build(range(n), arrows)


def brute_paths(q, max_len):
    """Every composable arrow word of length <= max_len, plus stationary paths."""
    out = [stationary(v) for v in q.vertices()]
    for L in range(1, max_len + 1):
        for word in itertools.product(q.arrows(), repeat=L):
            if all(a.target == b.source for a, b in zip(word, word[1:])):
                out.append(Path(word[0].source, word[-1].target, tuple(a.name for a in word)))
    return out


def reach_matrix(q):
    vs = list(q.vertices())
    idx = {v: i for i, v in enumerate(vs)}
    n = len(vs)
    r = [[i == j for j in range(n)] for i in range(n)]
    for a in q.arrows():
        r[idx[a.source]][idx[a.target]] = True
    for k in range(n):
        for i in range(n):
            for j in range(n):
                r[i][j] = r[i][j] or (r[i][k] and r[k][j])
    return vs, idx, r


def test_a2_from_declarations():
    q = FiniteQuiver.build([1, 2], [("a", 1, 2)])
    assert q.arrow("a").source == 1 and q.arrow("a").target == 2
    assert q.path("a") == Path(1, 2, ("a",))


def test_bad_declarations():
    with pytest.raises(QuiverError):
        FiniteQuiver.build([1, 1], [])
    with pytest.raises(QuiverError):
        FiniteQuiver.build([1], [("a", 1, 2)])
    with pytest.raises(QuiverError):
        FiniteQuiver.build([1, 2], [("a", 1, 2), ("a", 2, 1)])


def test_composition_rule():
    q = linear_quiver(3)
    a1, a2 = q.path("a1"), q.path("a2")
    assert compose(a1, a2) == q.path("a1", "a2")
    assert compose(a2, a1) is None
    assert compose(q.e(1), a1) == a1
    assert compose(a1, q.e(2)) == a1
    assert compose(q.e(2), a1) is None
    with pytest.raises(QuiverError):
        q.path("a2", "a1")


def test_acyclicity_examples():
    assert is_acyclic(linear_quiver(4))
    assert is_acyclic(d4_sink())
    assert not is_acyclic(Circular(3))
    assert not is_acyclic(FiniteQuiver.build([0], [("l", 0, 0)]))


@settings(max_examples=100, deadline=None)
@given(small_quivers())
def test_acyclic_matches_pigeonhole(q):
    # a cycle exists iff some path of length |Q_0| exists
    n = len(q.vertices())
    has_long = any(p.length == n for p in brute_paths(q, n))
    assert is_acyclic(q) == (not has_long)


@settings(max_examples=100, deadline=None)
@given(small_quivers(), st.data())
def test_closure_is_forward_reachability(q, data):
    seed = data.draw(st.lists(st.sampled_from(q.vertices()), min_size=1, max_size=2))
    c = closure(q, seed)
    vs, idx, r = reach_matrix(q)
    want = {w for w in vs if any(r[idx[s]][idx[w]] for s in seed)}
    assert set(c.vertices()) == want
    assert {a.name for a in c.arrows()} == {a.name for a in q.arrows() if a.source in want}
    assert is_closed_in(c, q)
    assert closure(q, c.vertices()) == c


@settings(max_examples=80, deadline=None)
@given(small_quivers(max_a=4), st.integers(0, 3), st.data())
def test_paths_into_matches_brute_force(q, L, data):
    v = data.draw(st.sampled_from(q.vertices()))
    got = paths_into(q, v, L)
    want = sorted((p for p in brute_paths(q, L) if p.target == v), key=Path.sort_key)
    assert got == want
    got_from = paths_from(q, v, L)
    assert got_from == sorted((p for p in brute_paths(q, L) if p.source == v), key=Path.sort_key)


@settings(max_examples=60, deadline=None)
@given(small_quivers(acyclic=True))
def test_unbounded_enumeration_on_acyclic(q):
    n = len(q.vertices())
    for v in q.vertices():
        assert paths_into(q, v) == sorted((p for p in brute_paths(q, n) if p.target == v), key=Path.sort_key)


def test_unbounded_enumeration_refused():
    with pytest.raises(ClosureError):
        paths_into(Circular(2), 0)
    with pytest.raises(ClosureError):
        paths_into(AInfinity(), 0)


def test_ainfinity_closures_finite_and_acyclic():
    q = AInfinity()
    for seed in ([0], [5], [3, 7], [12]):
        c = closure(q, seed)
        assert set(c.vertices()) == set(range(max(seed) + 1))
        assert is_acyclic(c)
    assert q.arrow("a4").source == 5 and q.arrow("a4").target == 4
    assert len(paths_into(q, 0, 7)) == 8
    assert [p.length for p in paths_from(q, 4)] == [0, 1, 2, 3, 4]


def test_circular_arrows():
    q = Circular(3)
    assert q.size == 4
    assert [(a.source, a.target) for a in q.arrows()] == [(0, 1), (1, 2), (2, 3), (3, 0)]
    assert q.cycle() == q.path("a0", "a1", "a2", "a3")


def test_power_cycle_matches_repeated_compose():
    for k in (0, 1, 3):
        q = Circular(k)
        cur = q.e(0)
        for n in range(11):
            assert power_cycle(q, n) == cur
            assert power_cycle(q, n).length == n * (k + 1)
            cur = compose(cur, q.cycle())


def test_decorated_quiver_enumeration():
    q = decorated_ainfinity()
    assert q.arrow("c").source == "b0" and q.arrow("c").target == 2
    assert q.arrow("c3").source == "b4" and q.arrow("c3").target == "b3"
    for L in range(12):
        got = paths_into(q, 0, L)
        # spine paths i -> 0 plus branch paths b_j -> ... -> b0 -> 2 -> 1 -> 0 of length j + 3
        assert len(got) == (L + 1) + max(0, L - 2)
        assert len(set(got)) == len(got)
    c = closure(q, ["b3"])
    assert set(c.vertices()) == {"b3", "b2", "b1", "b0", 2, 1, 0}
    assert is_acyclic(c)


def test_a3_sink_paths():
    q = a3_sink()
    assert [str(p) for p in paths_into(q, 2)] == ["e2", "a1", "a2"]
