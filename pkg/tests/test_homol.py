import itertools

import pytest
from hypothesis import given, settings

from quiverhom.corpus import restriction_shadow
from quiverhom.homol import (
    BoundsError,
    _Spine,
    check_cor_1_3,
    euler_form,
    ext1_against_algebra,
    ext1_dim,
    is_projective_structural,
    minimal_resolution,
    prop16_forced_coset,
    standard_resolution,
    truncated_spine,
)
from quiverhom.linalg import GF, Matrix, rank
from quiverhom.pathalg import AlgebraElement, coset_reduce
from quiverhom.quiver import AInfinity, Circular, ClosureError, linear_quiver, paths_into
from quiverhom.rep import Representation, direct_sum, hom_space_dim, projective_rep, top_dims
from strategies import corpus_reps, rep_pairs

A2 = linear_quiver(2)
S1 = Representation(A2, {1: 1})
S2 = Representation(A2, {2: 1})
P1 = projective_rep(A2, 1)


def ringel_ext(x, y):
    """dim coker of (+)_v Hom(X_v, Y_v) -> (+)_a Hom(X_s(a), Y_t(a)), built from scratch."""
    f = x.field
    q = x.quiver
    dom = [(v, i, j) for v in q.vertices() for i in range(y.dim(v)) for j in range(x.dim(v))]
    cod = [(a.name, i, j) for a in q.arrows() for i in range(y.dim(a.target)) for j in range(x.dim(a.source))]
    if not cod:
        return 0
    col = {c: k for k, c in enumerate(dom)}
    rows = []
    for a in q.arrows():
        s, t = a.source, a.target
        xa = x.map(a.name) if x.dim(s) and x.dim(t) else None
        ya = y.map(a.name) if y.dim(s) and y.dim(t) else None
        for i in range(y.dim(t)):
            for j in range(x.dim(s)):
                # (phi_t X_a - Y_a phi_s)[i, j]
                row = [f.zero] * len(dom)
                if xa is not None:
                    for k in range(x.dim(t)):
                        if xa[k, j]:
                            row[col[(t, i, k)]] += xa[k, j]
                if ya is not None:
                    for k in range(y.dim(s)):
                        if ya[i, k]:
                            row[col[(s, k, j)]] -= ya[i, k]
                rows.append(row)
    return len(cod) - rank(Matrix.from_rows(rows, f, ncols=len(dom)))


def test_a2_simples():
    assert ext1_dim(S1, P1) == 0
    assert ext1_dim(S1, S2) == 1
    assert ext1_against_algebra(S1) == 1
    assert ext1_against_algebra(S2) == 0
    assert ext1_against_algebra(P1) == 0
    assert hom_space_dim(P1, P1) == 1
    assert not is_projective_structural(S1)
    assert is_projective_structural(S2) and is_projective_structural(P1)


def test_minimal_resolution_of_simple():
    pres = minimal_resolution(S1)
    assert pres.p0_multiplicities() == {1: 1}
    assert pres.p1_multiplicities() == {2: 1}
    assert pres.check()["exact"]


def test_euler_form_values():
    assert euler_form({1: 1}, {2: 1}, A2) == -1
    assert euler_form({1: 1}, {1: 1}, A2) == 1
    assert euler_form({1: 2, 2: 1}, {1: 1, 2: 3}, A2) == 2 + 3 - 2 * 3


@settings(max_examples=150, deadline=None)
@given(rep_pairs())
def test_ext_matches_ringel_cokernel(pair):
    x, y = pair
    assert ext1_dim(x, y) == ringel_ext(x, y)


@settings(max_examples=100, deadline=None)
@given(rep_pairs())
def test_euler_identity(pair):
    x, y = pair
    assert hom_space_dim(x, y) - ext1_dim(x, y) == euler_form(x.dims, y.dims, x.quiver)


@settings(max_examples=100, deadline=None)
@given(corpus_reps())
def test_resolutions_exact_and_agree(x):
    std = standard_resolution(x)
    mini = minimal_resolution(x)
    assert std.check()["exact"] and mini.check()["exact"]
    assert mini.p0_multiplicities() == top_dims(x)
    for v in x.quiver.vertices():
        y = projective_rep(x.quiver, v, x.field)
        assert ext1_dim(x, y, std) == ext1_dim(x, y, mini)


@settings(max_examples=100, deadline=None)
@given(corpus_reps())
def test_cor13_agreement(x):
    v = check_cor_1_3(x)
    assert v.agree
    assert v.as_dict()["agree"] is True


@settings(max_examples=40, deadline=None)
@given(corpus_reps())
def test_ext_vanishes_on_projective_sums(x):
    q = x.quiver
    s = direct_sum([projective_rep(q, v, x.field) for v in q.vertices()])
    assert ext1_against_algebra(s) == 0
    assert ext1_dim(s, x) == 0


def test_restriction_shadow_small():
    for name in ("a3", "d4-sink"):
        res = restriction_shadow(name, "q", n_random=60)
        assert res.ok and res.checked > 0


def test_ainfinity_uses_support_closure():
    q = AInfinity()
    s0 = Representation(q, {1: 1})
    assert ext1_against_algebra(s0) == 1
    assert ext1_against_algebra(projective_rep(q, 3)) == 0


def test_cyclic_support_refused():
    x = Representation(Circular(1), {0: 1, 1: 1})
    with pytest.raises(ClosureError):
        standard_resolution(x)


def test_prop16_small_n():
    for n in range(6):
        rep = prop16_forced_coset(n)
        assert rep.ok, rep.as_dict()
        assert rep.compat_checked > 0
    with pytest.raises(BoundsError):
        prop16_forced_coset(3, max_len=2)
    with pytest.raises(BoundsError):
        prop16_forced_coset(4, p=truncated_spine(3))


@pytest.mark.parametrize("n", range(5))
def test_coset_emptiness_by_enumeration_over_f2(n):
    """No x in KQ_{<=n} e_{v_0} over F_2 lies in every forced coset."""
    F2 = GF(2)
    p = truncated_spine(n + 2)
    S = _Spine(p, list(range(n + 3)), F2)
    short = [q for q in paths_into(p, 0, n)]
    hits = 0
    for bits in itertools.product((0, 1), repeat=len(short)):
        x = AlgebraElement(p, F2, dict(zip(short, bits)))
        if all(coset_reduce(x - S.phi(0, j), S.seg(j + 1, 0), n + 2).is_zero() for j in range(n + 1)):
            hits += 1
    assert hits == 0
    assert prop16_forced_coset(n, field=F2).intersection_empty
