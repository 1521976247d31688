"""Finite dimensional representations of quivers and their morphisms.

A representation stores finitely many active vertices (dimension > 0) and
one matrix per arrow between active vertices; the matrix of arrow ``a``
maps X_{s(a)} to X_{t(a)}. Everything off the active set is zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from .linalg import (
    QQ,
    Field,
    FieldMismatchError,
    Matrix,
    block_diag,
    hstack,
    kernel_basis,
    rank,
    solve,
)
from .pathalg import AlgebraElement
from .quiver import (
    ClosureError,
    FiniteQuiver,
    Path,
    Quiver,
    QuiverError,
    closure,
    full_subquiver,
    is_acyclic,
    is_closed_in,
    is_subquiver,
    paths_from,
    vertex_key,
)


class RepresentationError(ValueError):
    pass


class Representation:
    """X = (X_v, X_a) with X_v = K^{dims[v]}."""

    def __init__(
        self,
        quiver: Quiver,
        dims: Mapping[Any, int],
        maps: Optional[Mapping[str, Any]] = None,
        field: Field = QQ,
    ):
        self.quiver = quiver
        self.field = field
        clean: Dict[Any, int] = {}
        for v, d in dims.items():
            if not quiver.has_vertex(v):
                raise RepresentationError(f"{v!r} is not a vertex of the quiver")
            if d < 0:
                raise RepresentationError(f"negative dimension at {v!r}")
            if d:
                clean[v] = int(d)
        self.dims = clean
        if isinstance(quiver, FiniteQuiver):
            order = {v: i for i, v in enumerate(quiver.vertices())}
            self.vertices: Tuple[Any, ...] = tuple(sorted(clean, key=order.__getitem__))
        else:
            self.vertices = tuple(sorted(clean, key=vertex_key))
        self._arrows = quiver.arrows_among(self.vertices)
        given = dict(maps or {})
        self.maps: Dict[str, Matrix] = {}
        for a in self._arrows:
            m = given.pop(a.name, None)
            shape = (clean[a.target], clean[a.source])
            if m is None:
                m = Matrix.zeros(*shape, field=field)
            elif not isinstance(m, Matrix):
                rows = list(m)
                if len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
                    raise RepresentationError(
                        f"map for arrow {a.name} must be {shape[0]}x{shape[1]}"
                    )
                m = Matrix.from_rows(rows, field, ncols=shape[1])
            if m.field != field:
                raise FieldMismatchError(f"map for arrow {a.name} is over {m.field}")
            if m.shape != shape:
                raise RepresentationError(f"map for arrow {a.name} must be {shape[0]}x{shape[1]}, got {m.nrows}x{m.ncols}")
            self.maps[a.name] = m
        for name, m in given.items():
            a = quiver.arrow(name)
            d_s, d_t = clean.get(a.source, 0), clean.get(a.target, 0)
            shape = (d_t, d_s)
            if isinstance(m, Matrix):
                ok = m.shape == shape
            else:
                rows = list(m)
                ok = len(rows) == d_t and all(len(r) == d_s for r in rows)
            if not ok:
                raise RepresentationError(f"map for arrow {name} must be {d_t}x{d_s}")
        self._path_cache: Dict[Path, Matrix] = {}

    # -- accessors

    def dim(self, v) -> int:
        return self.dims.get(v, 0)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def dim_vector(self) -> Dict[Any, int]:
        return {v: self.dims[v] for v in self.vertices}

    def arrows(self):
        """Arrows with both endpoints active."""
        return self._arrows

    def map(self, name: str) -> Matrix:
        if name in self.maps:
            return self.maps[name]
        a = self.quiver.arrow(name)
        return Matrix.zeros(self.dim(a.target), self.dim(a.source), self.field)

    def path_matrix(self, p: Path) -> Matrix:
        """X_p = X_{a_n} ... X_{a_0} for p = a_0 ... a_n."""
        m = self._path_cache.get(p)
        if m is not None:
            return m
        if p.is_stationary:
            m = Matrix.identity(self.dim(p.source), self.field)
        else:
            m = self.map(p.arrows[0])
            for name in p.arrows[1:]:
                m = self.map(name) @ m
        self._path_cache[p] = m
        return m

    def is_zero(self) -> bool:
        return not self.dims

    def offsets(self) -> Dict[Any, int]:
        out, off = {}, 0
        for v in self.vertices:
            out[v] = off
            off += self.dims[v]
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Representation):
            return NotImplemented
        return (
            self.field == other.field
            and self.quiver == other.quiver
            and self.dims == other.dims
            and self.maps == other.maps
        )

    def __hash__(self) -> int:
        return hash((tuple(sorted(self.dims.items(), key=lambda kv: vertex_key(kv[0]))), self.field))

    def __repr__(self) -> str:
        dims = ", ".join(f"{v}:{d}" for v, d in self.dim_vector().items())
        return f"Representation({{{dims}}})"

    def active_quiver(self) -> FiniteQuiver:
        return full_subquiver(self.quiver, self.vertices)

    def support_closure(self) -> FiniteQuiver:
        """closure(supp X); must be finite for every homological computation."""
        return closure(self.quiver, self.vertices)


def zero_rep(q: Quiver, field: Field = QQ) -> Representation:
    return Representation(q, {}, {}, field)


class RepMorphism:
    """phi: X -> Y with one matrix per vertex; commuting squares are checked."""

    def __init__(self, source: Representation, target: Representation, comps: Mapping[Any, Any]):
        if source.field != target.field:
            raise FieldMismatchError("morphism between representations over different fields")
        if source.quiver != target.quiver:
            raise RepresentationError("morphism between representations of different quivers")
        self.source = source
        self.target = target
        f = source.field
        self.comps: Dict[Any, Matrix] = {}
        for v in set(source.vertices) | set(target.vertices):
            shape = (target.dim(v), source.dim(v))
            m = comps.get(v)
            if m is None:
                m = Matrix.zeros(*shape, field=f)
            elif not isinstance(m, Matrix):
                m = Matrix.from_rows(m, f, ncols=shape[1])
            if m.shape != shape:
                raise RepresentationError(f"component at {v!r} must be {shape[0]}x{shape[1]}")
            self.comps[v] = m
        for v in comps:
            if v not in self.comps and not (source.dim(v) == 0 and target.dim(v) == 0):
                raise RepresentationError(f"component at unknown vertex {v!r}")
        bad = self.failed_square()
        if bad is not None:
            raise RepresentationError(f"square for arrow {bad} does not commute")

    def at(self, v) -> Matrix:
        m = self.comps.get(v)
        if m is None:
            return Matrix.zeros(self.target.dim(v), self.source.dim(v), self.source.field)
        return m

    def failed_square(self) -> Optional[str]:
        x, y = self.source, self.target
        for v in x.vertices:
            for a in x.quiver.arrows_from(v):
                lhs = self.at(a.target) @ x.map(a.name)
                rhs = y.map(a.name) @ self.at(a.source)
                if lhs != rhs:
                    return a.name
        return None

    def compose(self, other: "RepMorphism") -> "RepMorphism":
        """self after other."""
        return RepMorphism(
            other.source,
            self.target,
            {v: self.at(v) @ other.at(v) for v in set(other.source.vertices) | set(self.target.vertices)},
        )

    def ranks(self) -> Dict[Any, int]:
        return {v: rank(m) for v, m in self.comps.items()}


# -- projectives


def _check_finite_acyclic(q: FiniteQuiver, what: str) -> None:
    if not is_acyclic(q):
        raise ClosureError(f"{what} is not acyclic")


@lru_cache(maxsize=4096)
def _projective_basis_cached(q: Quiver, v) -> Tuple[Tuple[Any, Tuple[Path, ...]], ...]:
    c = closure(q, [v])
    _check_finite_acyclic(c, f"closure of {v!r}")
    by_target: Dict[Any, List[Path]] = {}
    for p in paths_from(c, v):
        by_target.setdefault(p.target, []).append(p)
    return tuple((w, tuple(ps)) for w, ps in by_target.items())


def projective_basis(q: Quiver, v) -> Dict[Any, Tuple[Path, ...]]:
    """Basis of e_v KQ at each vertex w: all paths v -> w, sorted."""
    q._check_vertex(v)
    return dict(_projective_basis_cached(q, v))


def projective_rep(q: Quiver, v, field: Field = QQ) -> Representation:
    """F(e_v KQ): arrows act on basis paths by right concatenation."""
    return _projective_rep_cached(q, v, field)


@lru_cache(maxsize=4096)
def _projective_rep_cached(q: Quiver, v, field: Field) -> Representation:
    basis = projective_basis(q, v)
    index = {w: {p: i for i, p in enumerate(ps)} for w, ps in basis.items()}
    dims = {w: len(ps) for w, ps in basis.items()}
    maps: Dict[str, Matrix] = {}
    for a in q.arrows_among(dims):
        rows = [[0] * dims[a.source] for _ in range(dims[a.target])]
        for j, p in enumerate(basis[a.source]):
            pa = Path(p.source, a.target, p.arrows + (a.name,))
            rows[index[a.target][pa]][j] = 1
        maps[a.name] = Matrix.from_rows(rows, field, ncols=dims[a.source])
    return Representation(q, dims, maps, field)


def count_paths(q: Quiver, v, w) -> int:
    return len(projective_basis(q, v).get(w, ()))


# -- the G side: total vectors with a right KQ-action


def g_action(x: Representation, elem: Sequence[Any], r: AlgebraElement) -> Tuple[Any, ...]:
    """Right action of r on a vector of G(X) = (+)_v X_v (active vertices in order)."""
    if len(elem) != x.total_dim:
        raise RepresentationError(f"vector of length {len(elem)} for total dimension {x.total_dim}")
    if r.field != x.field:
        raise FieldMismatchError("algebra element over a different field")
    f = x.field
    off = x.offsets()
    out = [f.zero] * x.total_dim
    for p, c in r.items():
        s, t = p.source, p.target
        if s not in off or t not in off:
            continue
        comp = elem[off[s]: off[s] + x.dims[s]]
        img = x.path_matrix(p).apply(comp)
        base = off[t]
        for i, val in enumerate(img):
            if val:
                out[base + i] = out[base + i] + c * val
    return tuple(out)


def fg_roundtrip_check(x: Representation) -> bool:
    """Rebuild F(G(X)) from the KQ-action alone and compare with X."""
    from .pathalg import PathAlgebra

    alg = PathAlgebra(x.quiver, x.field)
    n = x.total_dim
    f = x.field
    units = [tuple(f.one if i == j else f.zero for i in range(n)) for j in range(n)]
    bases: Dict[Any, Matrix] = {}
    dims: Dict[Any, int] = {}
    for v in x.vertices:
        ev = alg.e(v)
        imgs = [g_action(x, u, ev) for u in units]
        # pick a basis of G(X)e_v among the images, in order
        chosen: List[Tuple[Any, ...]] = []
        for im in imgs:
            cand = chosen + [im]
            if rank(Matrix.from_columns(cand, n, f)) == len(cand):
                chosen.append(im)
        dims[v] = len(chosen)
        bases[v] = Matrix.from_columns(chosen, n, f) if chosen else Matrix.zeros(n, 0, f)
    if {v: d for v, d in dims.items() if d} != x.dims:
        return False
    maps = {}
    for a in x.arrows():
        act = alg.path(a.name)
        cols = []
        for b in bases[a.source].columns():
            img = g_action(x, b, act)
            sol = solve(bases[a.target], img)
            if sol is None:
                return False
            cols.append(sol)
        maps[a.name] = Matrix.from_columns(cols, dims[a.target], f) if cols else Matrix.zeros(dims[a.target], 0, f)
    # the bases chosen are the unit vectors of each block, so the maps must agree verbatim
    return all(maps[a.name] == x.map(a.name) for a in x.arrows())


# -- restriction S and extension T


def restrict(x: Representation, p: FiniteQuiver) -> Representation:
    if not is_subquiver(p, x.quiver):
        raise RepresentationError("target quiver is not a subquiver")
    dims = {v: x.dim(v) for v in p.vertices() if x.dim(v)}
    maps = {a.name: x.map(a.name) for a in p.arrows() if a.source in dims and a.target in dims}
    return Representation(p, dims, maps, x.field)


def extend_T(z: Representation, q: Quiver) -> Representation:
    if not isinstance(z.quiver, FiniteQuiver) or not is_closed_in(z.quiver, q):
        raise RepresentationError("extension by zero needs a closed subquiver")
    return Representation(q, dict(z.dims), dict(z.maps), z.field)


# -- sums, homs, tops


def direct_sum(xs: Sequence[Representation], quiver: Optional[Quiver] = None, field: Optional[Field] = None) -> Representation:
    xs = list(xs)
    if not xs:
        if quiver is None:
            raise RepresentationError("empty direct sum needs a quiver")
        return zero_rep(quiver, field or QQ)
    q, f = xs[0].quiver, xs[0].field
    for x in xs[1:]:
        if x.field != f:
            raise FieldMismatchError("direct sum over mixed fields")
        if x.quiver != q:
            raise RepresentationError("direct sum over different quivers")
    dims: Dict[Any, int] = {}
    for x in xs:
        for v, d in x.dims.items():
            dims[v] = dims.get(v, 0) + d
    probe = Representation(q, dims, {}, f)
    maps = {}
    for a in probe.arrows():
        blocks = [x.map(a.name) for x in xs]
        maps[a.name] = block_diag(blocks, f)
    return Representation(q, dims, maps, f)


def _check_pair(x: Representation, y: Representation) -> None:
    if x.field != y.field:
        raise FieldMismatchError("representations over different fields")
    if x.quiver != y.quiver:
        raise RepresentationError("representations of different quivers")


def hom_constraints(x: Representation, y: Representation) -> Tuple[Matrix, List[Tuple[Any, int, int]]]:
    """Linear system whose kernel is Hom(X, Y).

    Unknowns are the entries of phi_v (row-major) for v active in both.
    """
    _check_pair(x, y)
    f = x.field
    common = [v for v in x.vertices if y.dim(v)]
    unknowns: List[Tuple[Any, int, int]] = []
    where: Dict[Any, int] = {}
    for v in common:
        where[v] = len(unknowns)
        unknowns.extend((v, i, j) for i in range(y.dim(v)) for j in range(x.dim(v)))
    rows: List[List[Any]] = []
    n = len(unknowns)
    for v in x.vertices:
        for a in x.quiver.arrows_from(v):
            s, t = a.source, a.target
            xs_, xt, ys, yt = x.dim(s), x.dim(t), y.dim(s), y.dim(t)
            if not yt:
                continue
            xa, ya = x.map(a.name), y.map(a.name)
            # (phi_t X_a - Y_a phi_s)[i, j] = 0
            for i in range(yt):
                for j in range(xs_):
                    row = [f.zero] * n
                    if t in where:
                        base = where[t]
                        for k in range(xt):
                            c = xa[k, j]
                            if c:
                                row[base + i * xt + k] += c
                    if s in where:
                        base = where[s]
                        for k in range(ys):
                            c = ya[i, k]
                            if c:
                                row[base + k * xs_ + j] -= c
                    if any(row):
                        rows.append(row)
    return Matrix.from_rows(rows, f, ncols=n), unknowns


def hom_space_dim(x: Representation, y: Representation) -> int:
    m, unknowns = hom_constraints(x, y)
    return len(unknowns) - rank(m)


def hom_basis(x: Representation, y: Representation) -> List[RepMorphism]:
    m, unknowns = hom_constraints(x, y)
    out = []
    for col in kernel_basis(m).columns():
        comps: Dict[Any, List[List[Any]]] = {}
        for (v, i, j), c in zip(unknowns, col):
            comps.setdefault(v, [[0] * x.dim(v) for _ in range(y.dim(v))])[i][j] = c
        out.append(RepMorphism(x, y, comps))
    return out


def radical_span(x: Representation, v) -> Matrix:
    """Columns spanning sum of images of arrows into v (from active vertices)."""
    blocks = [x.map(a.name) for a in x.quiver.arrows_into(v) if x.dim(a.source)]
    return hstack(blocks, nrows=x.dim(v), field=x.field)


def _require_acyclic_active(x: Representation) -> None:
    if not is_acyclic(x.active_quiver()):
        raise ClosureError("the active part of the representation has a cycle")


def top_dims(x: Representation) -> Dict[Any, int]:
    """t_v = dim X_v - rank of the incoming arrow images at v."""
    _require_acyclic_active(x)
    out = {}
    for v in x.vertices:
        t = x.dim(v) - rank(radical_span(x, v))
        if t:
            out[v] = t
    return out


def change_of_basis(x: Representation, g: Mapping[Any, Matrix]) -> Representation:
    """The isomorphic copy with X'_a = g_t X_a g_s^{-1}; each g_v must be invertible."""
    f = x.field
    inv: Dict[Any, Matrix] = {}
    for v in x.vertices:
        m = g.get(v) or Matrix.identity(x.dim(v), f)
        cols = []
        for e in Matrix.identity(x.dim(v), f).columns():
            s = solve(m, e)
            if s is None:
                raise RepresentationError(f"basis change at {v!r} is singular")
            cols.append(s)
        inv[v] = Matrix.from_columns(cols, x.dim(v), f)
    maps = {}
    for a in x.arrows():
        gt = g.get(a.target) or Matrix.identity(x.dim(a.target), f)
        maps[a.name] = gt @ x.map(a.name) @ inv[a.source]
    return Representation(x.quiver, dict(x.dims), maps, f)


# -- the spine representation X^0


@dataclass(frozen=True)
class SpineData:
    """Spine v_0 <- v_1 <- ... <- v_L inside a finite quiver, with m(v)."""

    quiver: FiniteQuiver
    spine: Tuple[Any, ...]
    spine_arrows: Tuple[str, ...]
    m: Dict[Any, int]

    def strip(self, p: Path) -> Path:
        """pi on a path starting at a spine vertex: drop the leading spine segment."""
        try:
            j = self.spine.index(p.source)
        except ValueError:
            raise QuiverError(f"{p} does not start on the spine") from None
        mv = self.m[p.target]
        drop = j - mv
        if drop < 0:
            raise QuiverError(f"{p} starts below v_m(v)")
        expected = tuple(self.spine_arrows[i] for i in range(j - 1, mv - 1, -1))
        if p.arrows[:drop] != expected:
            raise QuiverError(f"{p} does not factor through the spine")
        return Path(self.spine[mv], p.target, p.arrows[drop:])


def spine_data(p: FiniteQuiver, spine: Sequence[Any]) -> SpineData:
    spine = tuple(spine)
    if not spine:
        raise QuiverError("empty spine")
    for v in spine:
        if not p.has_vertex(v):
            raise QuiverError(f"spine vertex {v!r} is missing")
    names = []
    for n in range(len(spine) - 1):
        cands = [a for a in p.arrows_from(spine[n + 1]) if a.target == spine[n]]
        if len(cands) != 1:
            raise QuiverError(f"need exactly one arrow {spine[n + 1]!r} -> {spine[n]!r}")
        names.append(cands[0].name)
    m: Dict[Any, int] = {}
    for i, v in enumerate(spine):
        for path in paths_from(p, v):
            if path.target not in m:
                m[path.target] = i
    missing = [v for v in p.vertices() if v not in m]
    if missing:
        raise QuiverError(f"vertices not reachable from the spine: {missing!r}")
    return SpineData(p, spine, tuple(names), m)


def build_X0(p: FiniteQuiver, spine: Sequence[Any], field: Field = QQ) -> Representation:
    """X^0_v has basis the paths v_{m(v)} -> v; arrows act by pi(p a)."""
    _check_finite_acyclic(p, "the truncation")
    sd = spine_data(p, spine)
    basis: Dict[Any, List[Path]] = {}
    for v in p.vertices():
        start = sd.spine[sd.m[v]]
        basis[v] = [q for q in paths_from(p, start) if q.target == v]
    index = {v: {q: i for i, q in enumerate(ps)} for v, ps in basis.items()}
    dims = {v: len(ps) for v, ps in basis.items()}
    maps = {}
    for a in p.arrows():
        rows = [[0] * dims[a.source] for _ in range(dims[a.target])]
        for j, q in enumerate(basis[a.source]):
            qa = Path(q.source, a.target, q.arrows + (a.name,))
            rows[index[a.target][sd.strip(qa)]][j] = 1
        maps[a.name] = Matrix.from_rows(rows, field, ncols=dims[a.source])
    return Representation(p, dims, maps, field)
