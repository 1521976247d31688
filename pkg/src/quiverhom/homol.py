"""Projective presentations, Ext^1 and projectivity tests for path algebras.

Path algebras are hereditary, so every finite dimensional representation X
with a finite acyclic support closure has a presentation

    0 -> P1 -> P0 -> X -> 0

by finitely generated projectives, and Ext^1(X, Y) is the cokernel of
Hom(P0, Y) -> Hom(P1, Y). Homomorphisms out of a projective P_v are read
off through the Yoneda isomorphism Hom(P_v, Y) = Y_v.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from .linalg import QQ, Field, Matrix, SparseEchelon, complement_basis, kernel_basis, rank, solve
from .pathalg import AlgebraElement
from .quiver import (
    AInfinity,
    ClosureError,
    FiniteQuiver,
    Path,
    Quiver,
    is_acyclic,
    paths_into,
)
from .rep import (
    RepMorphism,
    Representation,
    RepresentationError,
    direct_sum,
    projective_basis,
    projective_rep,
    radical_span,
    spine_data,
    top_dims,
    zero_rep,
)


class ResolutionError(RuntimeError):
    """A presentation failed its exactness checks."""


class BoundsError(ValueError):
    """Requested truncation bounds are too small to certify an answer."""


def _closure_checked(x: Representation) -> FiniteQuiver:
    w = x.support_closure()
    if not is_acyclic(w):
        raise ClosureError("the closure of the support has a cycle")
    return w


class ProjectiveSum:
    """P = P_{g_0} (+) P_{g_1} (+) ... with basis (summand, path) at each vertex."""

    def __init__(self, quiver: Quiver, gens: Sequence[Any], field: Field = QQ):
        self.quiver = quiver
        self.gens = tuple(gens)
        self.field = field
        self._bases = [projective_basis(quiver, g) for g in self.gens]
        self._index: Dict[Any, Dict[Tuple[int, Path], int]] = {}

    def basis(self, w) -> List[Tuple[int, Path]]:
        return [(j, p) for j, b in enumerate(self._bases) for p in b.get(w, ())]

    def index(self, w) -> Dict[Tuple[int, Path], int]:
        idx = self._index.get(w)
        if idx is None:
            idx = {bp: i for i, bp in enumerate(self.basis(w))}
            self._index[w] = idx
        return idx

    def dim(self, w) -> int:
        return sum(len(b.get(w, ())) for b in self._bases)

    def multiplicities(self) -> Dict[Any, int]:
        out: Dict[Any, int] = {}
        for g in self.gens:
            out[g] = out.get(g, 0) + 1
        return out

    def vector(self, elem: Mapping[int, AlgebraElement], w) -> Tuple[Any, ...]:
        """Coordinates at w of an element given summand-wise."""
        idx = self.index(w)
        out = [self.field.zero] * len(idx)
        for j, x in elem.items():
            for p, c in x.items():
                if p.target == w:
                    out[idx[(j, p)]] += c
        return tuple(out)

    def element(self, vec: Sequence[Any], w) -> Dict[int, AlgebraElement]:
        out: Dict[int, Dict[Path, Any]] = {}
        for (j, p), c in zip(self.basis(w), vec):
            if c:
                out.setdefault(j, {})[p] = c
        return {j: AlgebraElement(self.quiver, self.field, t) for j, t in out.items()}

    def arrow_matrix(self, name: str) -> Matrix:
        a = self.quiver.arrow(name)
        src, tgt = self.basis(a.source), self.index(a.target)
        rows = [[0] * len(src) for _ in range(len(tgt))]
        for i, (j, p) in enumerate(src):
            rows[tgt[(j, Path(p.source, a.target, p.arrows + (name,)))]][i] = 1
        return Matrix.from_rows(rows, self.field, ncols=len(src))

    def representation(self) -> Representation:
        if not self.gens:
            return zero_rep(self.quiver, self.field)
        return direct_sum([projective_rep(self.quiver, g, self.field) for g in self.gens])


@dataclass
class Presentation:
    """0 -> P1 -> P0 -> X -> 0.

    ``cover[j]`` is the image in X_{g_j} of the generator of the j-th P0
    summand; ``relations[k]`` is the image in P0 of the generator of the
    k-th P1 summand, written summand-wise as paths g_j -> u_k.
    """

    target: Representation
    p0: ProjectiveSum
    cover: List[Tuple[Any, ...]]
    p1: ProjectiveSum
    relations: List[Dict[int, AlgebraElement]]
    support: FiniteQuiver
    minimal: bool = False

    def p0_multiplicities(self) -> Dict[Any, int]:
        return self.p0.multiplicities()

    def p1_multiplicities(self) -> Dict[Any, int]:
        return self.p1.multiplicities()

    def cover_matrix(self, w) -> Matrix:
        x, f = self.target, self.target.field
        cols = [x.path_matrix(p).apply(self.cover[j]) for j, p in self.p0.basis(w)]
        if not cols:
            return Matrix.zeros(x.dim(w), 0, f)
        return Matrix.from_columns(cols, x.dim(w), f)

    def relation_matrix(self, w) -> Matrix:
        cols = []
        for k, q in self.p1.basis(w):
            img = {j: e.mul_path(q) for j, e in self.relations[k].items()}
            cols.append(self.p0.vector(img, w))
        if not cols:
            return Matrix.zeros(self.p0.dim(w), 0, self.target.field)
        return Matrix.from_columns(cols, self.p0.dim(w), self.target.field)

    def check(self) -> Dict[str, Any]:
        """Rank-verify exactness at every vertex of the support closure."""
        x = self.target
        report = {"vertices": 0, "exact": True, "failures": []}
        for w in self.support.vertices():
            c, r = self.cover_matrix(w), self.relation_matrix(w)
            d0, d1, dx = self.p0.dim(w), self.p1.dim(w), x.dim(w)
            problems = []
            if rank(c) != dx:
                problems.append("cover not surjective")
            if rank(r) != d1:
                problems.append("relations not injective")
            if d0 != d1 + dx:
                problems.append("dimension count")
            if d1 and d0 and dx and not (c @ r).is_zero():
                problems.append("composition nonzero")
            report["vertices"] += 1
            if problems:
                report["exact"] = False
                report["failures"].append((w, problems))
        return report

    def connecting_morphism(self) -> RepMorphism:
        p1, p0 = self.p1.representation(), self.p0.representation()
        comps = {w: self.relation_matrix(w) for w in self.support.vertices()}
        return RepMorphism(p1, p0, comps)

    def cover_morphism(self) -> RepMorphism:
        p0 = self.p0.representation()
        comps = {w: self.cover_matrix(w) for w in self.support.vertices()}
        return RepMorphism(p0, self.target, comps)


def _finish(pres: Presentation) -> Presentation:
    rep = pres.check()
    if not rep["exact"]:
        raise ResolutionError(f"presentation is not exact: {rep['failures']}")
    return pres


def standard_resolution(x: Representation) -> Presentation:
    """The canonical presentation with P0 = (+)_v P_v^{dim X_v}.

    The relation for arrow a and basis vector i of X_{s(a)} is
    a - sum_r X_a[r, i] e_{t(a)}, placed in the appropriate summands.
    """
    w = _closure_checked(x)
    f = x.field
    gens, cover, slot = [], [], {}
    for v in x.vertices:
        for i in range(x.dim(v)):
            slot[(v, i)] = len(gens)
            gens.append(v)
            cover.append(tuple(f.one if r == i else f.zero for r in range(x.dim(v))))
    p0 = ProjectiveSum(x.quiver, gens, f)
    rel_gens, relations = [], []
    for v in x.vertices:
        for a in x.quiver.arrows_from(v):
            xa = x.map(a.name)
            arrow_path = Path(a.source, a.target, (a.name,))
            e_t = Path(a.target, a.target, ())
            for i in range(x.dim(v)):
                img = {slot[(v, i)]: AlgebraElement(x.quiver, f, {arrow_path: 1})}
                for r in range(x.dim(a.target)):
                    c = xa[r, i]
                    if c:
                        img[slot[(a.target, r)]] = AlgebraElement(x.quiver, f, {e_t: -c})
                rel_gens.append(a.target)
                relations.append(img)
    p1 = ProjectiveSum(x.quiver, rel_gens, f)
    return _finish(Presentation(x, p0, cover, p1, relations, w))


def minimal_resolution(x: Representation) -> Presentation:
    """Projective cover of X and of its syzygy, both built from tops."""
    w = _closure_checked(x)
    f = x.field
    gens, cover = [], []
    for v in x.vertices:
        for i in complement_basis(radical_span(x, v), x.dim(v), f):
            gens.append(v)
            cover.append(tuple(f.one if r == i else f.zero for r in range(x.dim(v))))
    p0 = ProjectiveSum(x.quiver, gens, f)
    pres = Presentation(x, p0, cover, ProjectiveSum(x.quiver, [], f), [], w, minimal=True)
    kernels = {u: kernel_basis(pres.cover_matrix(u)) for u in w.vertices()}
    arrow_mats: Dict[str, Matrix] = {}
    rel_gens, relations = [], []
    for u in w.vertices():
        ker = kernels[u]
        if not ker.ncols:
            continue
        ech = SparseEchelon(f)
        for a in w.arrows_into(u):
            if a.name not in arrow_mats:
                arrow_mats[a.name] = p0.arrow_matrix(a.name)
            src = kernels[a.source]
            for col in src.columns():
                img = arrow_mats[a.name].apply(col)
                ech.add({i: c for i, c in enumerate(img) if c})
        for col in ker.columns():
            if ech.add({i: c for i, c in enumerate(col) if c}):
                rel_gens.append(u)
                relations.append(p0.element(col, u))
    pres.p1 = ProjectiveSum(x.quiver, rel_gens, f)
    pres.relations = relations
    return _finish(pres)


def _check_pair(x: Representation, y: Representation) -> None:
    if x.field != y.field:
        raise RepresentationError("representations over different fields")
    if x.quiver != y.quiver:
        raise RepresentationError("representations of different quivers")


def restriction_map(pres: Presentation, y: Representation) -> Matrix:
    """Hom(P0, Y) -> Hom(P1, Y) in Yoneda coordinates (+)_j Y_{g_j} -> (+)_k Y_{u_k}."""
    f = y.field
    col_off, off = [], 0
    for g in pres.p0.gens:
        col_off.append(off)
        off += y.dim(g)
    ncols = off
    rows: List[List[Any]] = []
    for k, u in enumerate(pres.p1.gens):
        du = y.dim(u)
        if not du:
            continue
        block = [[f.zero] * ncols for _ in range(du)]
        for j, elem in pres.relations[k].items():
            dj = y.dim(pres.p0.gens[j])
            if not dj:
                continue
            base = col_off[j]
            for p, c in elem.items():
                m = y.path_matrix(p)
                for r in range(du):
                    row = block[r]
                    mr = m.rows[r]
                    for s in range(dj):
                        if mr[s]:
                            row[base + s] += c * mr[s]
        rows.extend(block)
    return Matrix.from_rows(rows, f, ncols=ncols)


def ext1_dim(x: Representation, y: Representation, pres: Optional[Presentation] = None) -> int:
    """dim Ext^1(G(X), G(Y)) as the cokernel of Hom(P0, Y) -> Hom(P1, Y)."""
    _check_pair(x, y)
    if pres is None:
        pres = standard_resolution(x)
    hom_p1 = sum(y.dim(u) for u in pres.p1.gens)
    if not hom_p1:
        return 0
    return hom_p1 - rank(restriction_map(pres, y))


def algebra_vertices(x: Representation) -> Tuple[Any, ...]:
    """Vertices v whose P_v make up the regular module used against x.

    For a finite quiver this is every vertex. For an infinite family it is
    the closure of the support of x: there Ext^1 is taken against KP for
    the finite closed hull P, which is all that can be materialised.
    """
    if isinstance(x.quiver, FiniteQuiver):
        return x.quiver.vertices()
    return x.support_closure().vertices()


def ext1_against_algebra(x: Representation, pres: Optional[Presentation] = None) -> int:
    if pres is None:
        pres = standard_resolution(x)
    total = 0
    for v in algebra_vertices(x):
        total += ext1_dim(x, projective_rep(x.quiver, v, x.field), pres)
    return total


def euler_form(d: Mapping[Any, int], e: Mapping[Any, int], q: Quiver) -> int:
    """<d, e> = sum_v d_v e_v - sum_a d_{s(a)} e_{t(a)}."""
    total = sum(c * e.get(v, 0) for v, c in d.items())
    for v, c in d.items():
        if not c:
            continue
        for a in q.arrows_from(v):
            total -= c * e.get(a.target, 0)
    return total


def is_projective_structural(x: Representation) -> bool:
    """Compare X with its projective cover dimension by dimension."""
    w = _closure_checked(x)
    tops = top_dims(x)
    bases = {v: projective_basis(x.quiver, v) for v in tops}
    for u in w.vertices():
        cover_dim = sum(t * len(bases[v].get(u, ())) for v, t in tops.items())
        if cover_dim != x.dim(u):
            return False
    return True


@dataclass(frozen=True)
class Cor13Verdict:
    ext1_value: int
    ext_vanishes: bool
    structural: bool

    @property
    def agree(self) -> bool:
        return self.ext_vanishes == self.structural

    def as_dict(self) -> Dict[str, Any]:
        return {
            "ext1_against_algebra": self.ext1_value,
            "ext_vanishes": self.ext_vanishes,
            "projective_structural": self.structural,
            "agree": self.agree,
        }


def check_cor_1_3(x: Representation) -> Cor13Verdict:
    e = ext1_against_algebra(x)
    return Cor13Verdict(e, e == 0, is_projective_structural(x))


# -- the spine argument on truncated A_infinity


@dataclass
class Prop16Report:
    n: int
    representative: AlgebraElement
    ideal_gen: Path
    compat_checked: int = 0
    compat_failures: List[Tuple[int, int, int]] = field(default_factory=list)
    kernel_checked: int = 0
    kernel_failures: List[Tuple[int, int]] = field(default_factory=list)
    telescope_ok: bool = True
    forced: Dict[Path, Any] = field(default_factory=dict)
    min_member_length: Optional[int] = None
    intersection_empty: bool = False

    @property
    def ok(self) -> bool:
        return (
            not self.compat_failures
            and not self.kernel_failures
            and self.telescope_ok
            and self.intersection_empty
        )

    def as_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "representative": str(self.representative),
            "ideal_generator": str(self.ideal_gen),
            "compatibility_identities": self.compat_checked,
            "compatibility_failures": [list(t) for t in self.compat_failures],
            "kernel_generators_checked": self.kernel_checked,
            "kernel_failures": [list(t) for t in self.kernel_failures],
            "telescope_ok": self.telescope_ok,
            "min_member_length": self.min_member_length,
            "intersection_empty": self.intersection_empty,
            "ok": self.ok,
        }


def truncated_spine(length: int) -> FiniteQuiver:
    """The closure of {length} in A_infinity: 0 <- 1 <- ... <- length."""
    return AInfinity().truncate(length)


class _Spine:
    def __init__(self, p: FiniteQuiver, spine: Sequence[Any], field: Field):
        self.sd = spine_data(p, spine)
        self.p = p
        self.field = field
        self.v = self.sd.spine
        self.a = self.sd.spine_arrows

    def seg(self, n: int, m: int) -> Path:
        """a_n a_{n-1} ... a_m, a path v_{n+1} -> v_m."""
        return Path(self.v[n + 1], self.v[m], tuple(self.a[i] for i in range(n, m - 1, -1)))

    def el(self, terms: Mapping[Path, Any]) -> AlgebraElement:
        return AlgebraElement(self.p, self.field, terms)

    def kgen(self, m: int, n: int) -> AlgebraElement:
        return self.el({Path(self.v[m], self.v[m], ()): 1, self.seg(n, m): -1})

    def phi(self, m: int, n: int) -> AlgebraElement:
        return self.el({self.seg(m + i, m): 1 for i in range(n - m + 1)})

    def pi(self, x: AlgebraElement) -> AlgebraElement:
        out: Dict[Path, Any] = {}
        for p, c in x.items():
            q = self.sd.strip(p)
            out[q] = out.get(q, 0) + c
        return self.el(out)


def prop16_forced_coset(
    n: int,
    p: Optional[FiniteQuiver] = None,
    max_len: Optional[int] = None,
    spine: Optional[Sequence[Any]] = None,
    field: Field = QQ,
) -> Prop16Report:
    """Forced coset of psi(e_{v_0}) for a splitting psi of the spine extension.

    Checks the kernel generators e_{v_m} - a_n...a_m lie in Ker(pi), that
    phi(e_{v_m} - a_n...a_m) = sum_i a_{m+i}...a_m is compatible with the
    right KP-action, that the cosets r_j + KP g_j (j <= n) are forced, and
    that no element of KQ_{<=n} lies in all of them.
    """
    if p is None:
        p = truncated_spine(n + 2)
    if spine is None:
        spine = sorted(v for v in p.vertices() if isinstance(v, int))
    if max_len is None:
        max_len = n + 2
    if len(spine) < n + 3:
        raise BoundsError(f"spine of length {len(spine) - 1} is shorter than n + 2 = {n + 2}")
    if max_len < n + 2:
        raise BoundsError(f"max_len {max_len} is below n + 2 = {n + 2}")
    S = _Spine(p, spine, field)

    rep = S.phi(0, n)
    gen = S.seg(n + 1, 0)
    report = Prop16Report(n, rep, gen)

    # kernel generators are killed by pi
    for m in range(n + 2):
        for k in range(m, n + 2):
            report.kernel_checked += 1
            if S.pi(S.kgen(m, k)):
                report.kernel_failures.append((m, k))

    # compatibility of phi with the action, on both sides of the sequence
    for nn in range(1, n + 2):
        for m in range(1, nn + 1):
            for l in range(m):
                link = S.seg(m - 1, l)
                lhs = S.phi(m, nn).mul_path(link)
                rhs = S.phi(l, nn) - S.phi(l, m - 1)
                dom_l = S.kgen(m, nn).mul_path(link)
                dom_r = S.kgen(l, nn) - S.kgen(l, m - 1)
                report.compat_checked += 1
                if lhs != rhs or dom_l != dom_r:
                    report.compat_failures.append((l, m, nn))

    # psi(e_{v_0}) - psi(e_{v_{j+2}}) g_j = phi(0, j+1) = r_j + g_j
    for j in range(n + 1):
        if S.phi(0, j + 1) - S.phi(0, j) != S.el({S.seg(j + 1, 0): 1}):
            report.telescope_ok = False

    # Everything in the cosets ends at v_0, so only those coordinates matter.
    v0 = S.v[0]
    candidates = paths_into(p, v0, max_len)
    forced = {q: rep.coeff(q) for q in candidates if not q.has_suffix(gen)}
    report.forced = forced
    live = [q.length for q in candidates if q.has_suffix(gen) or forced.get(q)]
    report.min_member_length = min(live) if live else None
    report.intersection_empty = coset_intersection_empty(S, n, candidates)
    return report


def coset_intersection_empty(S: _Spine, n: int, candidates: Sequence[Path]) -> bool:
    """True when no x in KQ_{<=n} satisfies x in r_j + KP g_j for all j <= n.

    x - r_j has length <= max(n, j + 1), so membership in KP g_j is the
    vanishing of x - r_j on every path without suffix g_j.
    """
    unknowns = [q for q in candidates if q.length <= n]
    col = {q: i for i, q in enumerate(unknowns)}
    f = S.field
    rows, rhs = [], []
    for j in range(n + 1):
        r, g = S.phi(0, j), S.seg(j + 1, 0)
        for q in candidates:
            if q.has_suffix(g):
                continue
            row = [f.zero] * len(unknowns)
            if q in col:
                row[col[q]] = f.one
            rows.append(row)
            rhs.append(r.coeff(q))
    a = Matrix.from_rows(rows, f, ncols=len(unknowns))
    return solve(a, rhs) is None
