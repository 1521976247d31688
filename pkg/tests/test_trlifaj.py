import random

import pytest
from hypothesis import given, settings, strategies as st

from quiverhom.linalg import GF, QQ, Matrix, rank
from quiverhom.ordinals import OrdinalT, default_ladder, limit
from quiverhom.quiver import Path, decorated_ainfinity
from quiverhom.trlifaj import (
    AInfFlavor,
    CircularFlavor,
    InsufficientBounds,
    MalformedPsi,
    PsiAssignment,
    TruncationError,
    TrlifajModel,
    Uniformizer,
    i_span_basis,
    random_scenario,
    vector_order,
)

W, W2, W3 = limit(1), limit(2), limit(3)
LIMITS = [W, W2, W3]


def make(flavor: str, depth: int = 20, field=QQ) -> TrlifajModel:
    fl = {
        "ainf": lambda: AInfFlavor(),
        "circular": lambda: CircularFlavor(3),
        "decorated": lambda: AInfFlavor(decorated_ainfinity(), "decorated-ainfinity"),
    }[flavor]()
    return TrlifajModel(fl, default_ladder(3, depth), field)


FLAVORS = ["ainf", "circular", "decorated"]


@pytest.fixture(params=FLAVORS)
def model(request):
    return make(request.param)


def test_gen_x_ainf_shape():
    m = make("ainf")
    g = m.gen_x(W2, 0)
    q = m.quiver
    assert g.support() == [OrdinalT(0, 1), W2]
    assert g.slot((OrdinalT(0, 1), None)) == m.kq({q.e(0): 1})
    assert g.slot((W2, 0)) == m.kq({q.e(0): -1, q.path("a0"): 1})
    for n in range(5):
        g = m.gen_x(W, n)
        assert g.act_idempotent(n) == g
        assert not g.act_idempotent(n + 1) and not g.act_idempotent(n + 7)


def test_gen_x_circular_shape():
    m = make("circular")
    g = m.gen_x(W, 2)
    cyc = m.quiver.cycle()
    assert g.slot((W, 2)) == m.kq({m.quiver.e(0): -1})
    assert g.slot((W, 3)) == m.kq({cyc: 1})
    assert g.slot((OrdinalT(0, 3), None)) == m.kq({m.quiver.e(0): 1})


def test_truncation_guard(model):
    with pytest.raises(TruncationError):
        model.gen_x(W, 20)
    with pytest.raises(TruncationError):
        model.gen_x(OrdinalT(4, 0), 0)


def test_i_span_basis_edge_cases(model):
    assert i_span_basis(model, [], 3, 2) == []
    assert i_span_basis(model, [W], 0, 0) == [model.gen_x(W, 0)]


def test_generators_independent(model):
    basis = [g for _, g in model.i_span_basis(LIMITS, 19, 1)]
    assert model.span_rank(basis) == len(basis)


def test_dense_rank_cross_check():
    """Same independence via dense row reduction on a smaller window."""
    m = make("ainf", depth=6)
    basis = [g for _, g in m.i_span_basis([W, W2], 5, 2)]
    coords = sorted({c for g in basis for c in g.vector()}, key=vector_order)
    idx = {c: i for i, c in enumerate(coords)}
    rows = [[0] * len(coords) for _ in basis]
    for r, g in enumerate(basis):
        for c, v in g.vector().items():
            rows[r][idx[c]] = v
    assert rank(Matrix.from_rows(rows, QQ, ncols=len(coords))) == len(basis)


def test_quotient_equal_examples():
    m = make("ainf")
    q = m.quiver
    x = m.e_succ(OrdinalT(0, 1), 0)
    y = m.e_lim(W, 0, 0) - m.e_lim(W, 0, 1).mul_path(q.path("a0"))
    assert m.quotient_equal(x, y)
    assert m.quotient_equal(x, x)
    assert not m.quotient_equal(x, m.zero())
    # sums of generator multiples vanish in the quotient
    z = m.gen_x(W2, 3).mul_path(q.path("a3", "a2")) - m.gen_x(W, 5).scalar_mul(2)
    assert m.quotient_equal(z, m.zero())


def test_quotient_equal_refuses_uncertified():
    m = make("ainf")
    g = m.gen_x(W, 4)
    with pytest.raises(InsufficientBounds):
        m.quotient_equal(g, m.zero(), window=[W2])
    with pytest.raises(InsufficientBounds):
        m.quotient_equal(g, m.zero(), bounds=(1, 0))
    short = make("ainf", depth=3)
    with pytest.raises(InsufficientBounds):
        short.quotient_equal(short.e_lim(W, 0, 5), short.zero())


@st.composite
def ds_elements(draw, m):
    rng = random.Random(draw(st.integers(0, 10**6)))
    return m._random_ds(rng, [OrdinalT(0, 1), OrdinalT(0, 2), W], rng.randint(0, 3), 2)


AINF = make("ainf", depth=8)


@settings(max_examples=40, deadline=None)
@given(ds_elements(AINF), st.integers(0, 10**6), st.integers(0, 3))
def test_quotient_compatible_with_action(x, seed, k):
    m = AINF
    rng = random.Random(seed)
    n = rng.randint(0, 4)
    g = m.gen_x(W, n).scalar_mul(rng.randint(1, 3))
    y = x + g
    assert m.quotient_equal(x, y)
    assert m.quotient_equal(y, x)
    r = Path(k, 0, tuple(f"a{j}" for j in range(k - 1, -1, -1))) if k else m.quiver.e(0)
    assert m.quotient_equal(x.mul_path(r), y.mul_path(r))


def test_witness_values(model):
    fl = model.flavor
    for n in range(5):
        w = model.phi_witness(W2, n)
        assert w == model.e_lim(W2, fl.inner(n), fl.limit_vertex(n))


def test_telescope_base_case():
    m = make("ainf")
    rng = random.Random(5)
    psi = m.random_psi(W, 0, rng)
    rep = m.claim22_telescope(psi, W, 0)
    z = m.ladder.zeta(W, 0)
    base = psi.succ[z] - m.e_alpha(W, 0) + psi.lim[(W, 1)].mul_path(m.flavor.step(0))
    assert rep.recursive == base and rep.ok


def test_telescope_zero_psi_forced_part():
    m = make("ainf")
    for n in range(6):
        rep = m.claim22_telescope(PsiAssignment(), W2, n)
        want = m.zero()
        for i in range(n + 1):
            want = want - m.e_alpha(W2, i).mul_path(m.flavor.prefix(i))
        assert rep.recursive == want
        assert rep.alpha_slot_max_len == n


@pytest.mark.parametrize("flavor", FLAVORS)
def test_telescope_random_samples(flavor):
    m = make(flavor)
    rng = random.Random(f"tele:{flavor}")
    for n in (0, 1, 7, 19):
        for alpha in LIMITS:
            for _ in range(10):
                rep = m.claim22_telescope(m.random_psi(alpha, n, rng), alpha, n)
                assert rep.identity_holds and rep.forced_survives and rep.growth_ok


def test_telescope_rejects_malformed_psi():
    m = make("ainf")
    psi = PsiAssignment(succ={m.ladder.zeta(W, 0): m.e_succ(OrdinalT(0, 1), 3)})
    with pytest.raises(MalformedPsi):
        m.claim22_telescope(psi, W, 0)
    psi = PsiAssignment(succ={m.ladder.zeta(W, 0): m.e_lim(W, 0, 0)})
    with pytest.raises(MalformedPsi):
        m.claim22_telescope(psi, W, 0)


def test_coloring_of_witness_and_zero(model):
    col = model.extract_coloring(model.witness_phi(LIMITS))
    for (a, n), d in col.values.items():
        assert d == model.kq({model.quiver.e(model.flavor.gen_vertex(n)): 1})
    zero = model.extract_coloring(model.zero_phi(LIMITS))
    assert all(not d for d in zero.values.values())


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(FLAVORS), st.integers(0, 10**6))
def test_coloring_support_laws(flavor, seed):
    m = make(flavor, depth=8)
    col = m.extract_coloring(m.random_phi(LIMITS, random.Random(seed)))
    for key, d in col.values.items():
        t = col.targets[key]
        assert d.act_idempotent(t) == d
        for v in (0, 1, 2, 3, 9):
            if v != t and m.quiver.has_vertex(v):
                assert not d.act_idempotent(v)


def test_reconstruct_trivial_cases(model):
    zero_phi = model.zero_phi(LIMITS)
    unif = Uniformizer({}, {a: 0 for a in LIMITS}, model.kq_zero())
    rec = model.reconstruct_psi(zero_phi, unif)
    assert rec.ok
    assert all(not v for v in rec.psi.lim.values()) and all(not v for v in rec.psi.succ.values())
    phi = model.witness_phi([W2])
    col = model.extract_coloring(phi)
    unif = model.uniformizer_from(col, {W2: 0})
    assert model.reconstruct_psi(phi, unif).ok


@pytest.mark.parametrize("flavor", FLAVORS)
def test_reconstruct_random(flavor):
    m = make(flavor)
    for seed in range(8):
        phi, col, unif = random_scenario(m, LIMITS, seed)
        assert all(t <= 5 for t in unif.thresholds.values())
        assert m.reconstruct_psi(phi, unif).ok


def test_broken_uniformizer_located():
    m = make("ainf")
    phi, col, unif = random_scenario(m, LIMITS, 3)
    n = max(unif.thresholds.values()) + 2
    z = m.ladder.zeta(W3, n)
    vals = dict(unif.values)
    vals[z] = unif.f(z) + m.kq({m.quiver.e(n): 1})
    rec = m.reconstruct_psi(phi, Uniformizer(vals, unif.thresholds, unif.zero))
    assert not rec.ok
    assert rec.first_failure == (W3, n)


def test_threshold_beyond_depth():
    m = make("ainf", depth=4)
    unif = Uniformizer({}, {W: 9}, m.kq_zero())
    with pytest.raises(TruncationError):
        m.reconstruct_psi(m.zero_phi([W]), unif)


def test_finite_field_model():
    m = make("circular", depth=6, field=GF(5))
    basis = [g for _, g in m.i_span_basis(LIMITS, 5, 1)]
    assert m.span_rank(basis) == len(basis)
    phi, col, unif = random_scenario(m, LIMITS, 1)
    assert m.reconstruct_psi(phi, unif).ok
