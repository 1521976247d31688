"""Quivers, paths, composition, closures and acyclicity.

Paths are written left to right: ``a0 a1 ... an`` with ``t(a_i) = s(a_{i+1})``.
Arrow ids are strings and their lexicographic order is the universal
tie-break, so every enumeration here is deterministic.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple

Vertex = Hashable


class QuiverError(ValueError):
    """Malformed quiver, foreign arrow or bad vertex."""


class ClosureError(QuiverError):
    """A closure or enumeration that is not certified to terminate."""


def vertex_key(v: Vertex):
    """Total order on mixed int/str vertex names (ints first)."""
    if isinstance(v, bool):
        return (2, str(v))
    if isinstance(v, int):
        return (0, v, "")
    return (1, 0, str(v))


@dataclass(frozen=True)
class Arrow:
    name: str
    source: Vertex
    target: Vertex


@dataclass(frozen=True)
class Path:
    """A composable arrow sequence; the empty sequence is the stationary path e_v."""

    source: Vertex
    target: Vertex
    arrows: Tuple[str, ...] = ()

    def __post_init__(self):
        if not self.arrows and self.source != self.target:
            raise QuiverError("a stationary path has source equal to target")

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def is_stationary(self) -> bool:
        return not self.arrows

    def sort_key(self):
        return (len(self.arrows), self.arrows, vertex_key(self.source), vertex_key(self.target))

    def has_suffix(self, other: "Path") -> bool:
        if other.target != self.target:
            return False
        n = len(other.arrows)
        return n <= len(self.arrows) and self.arrows[len(self.arrows) - n:] == other.arrows

    def has_prefix(self, other: "Path") -> bool:
        if other.source != self.source:
            return False
        return self.arrows[: len(other.arrows)] == other.arrows

    def __str__(self) -> str:
        if not self.arrows:
            return f"e{self.source}"
        return ".".join(self.arrows)


def stationary(v: Vertex) -> Path:
    return Path(v, v, ())


def compose(p: Path, q: Path) -> Optional[Path]:
    """The concatenation ``pq`` if ``t(p) = s(q)``, else None (product zero)."""
    if p.target != q.source:
        return None
    if not p.arrows:
        return q
    if not q.arrows:
        return p
    return Path(p.source, q.target, p.arrows + q.arrows)


class Quiver:
    """Common interface of finite quivers and generated families."""

    #: every finite vertex set has a finite acyclic closure (trusted)
    closure_certified: bool = False

    @property
    def is_finite(self) -> bool:
        return False

    def has_vertex(self, v: Vertex) -> bool:
        raise NotImplementedError

    def arrows_from(self, v: Vertex) -> Tuple[Arrow, ...]:
        raise NotImplementedError

    def arrows_into(self, v: Vertex) -> Tuple[Arrow, ...]:
        raise NotImplementedError

    def arrow(self, name: str) -> Arrow:
        raise NotImplementedError

    def vertex_from_str(self, text: str) -> Vertex:
        raise NotImplementedError

    def vertices(self) -> Tuple[Vertex, ...]:
        raise ClosureError(f"{self!r} has infinitely many vertices")

    def arrows(self) -> Tuple[Arrow, ...]:
        raise ClosureError(f"{self!r} has infinitely many arrows")

    def _check_vertex(self, v: Vertex) -> None:
        if not self.has_vertex(v):
            raise QuiverError(f"{v!r} is not a vertex of {self!r}")

    def e(self, v: Vertex) -> Path:
        self._check_vertex(v)
        return stationary(v)

    def path(self, *names: str) -> Path:
        """Build a path from arrow ids, checking composability."""
        if not names:
            raise QuiverError("use e(v) for stationary paths")
        arrows = [self.arrow(n) for n in names]
        for a, b in zip(arrows, arrows[1:]):
            if a.target != b.source:
                raise QuiverError(f"{a.name} and {b.name} do not compose")
        return Path(arrows[0].source, arrows[-1].target, tuple(names))

    def validate_path(self, p: Path) -> None:
        if p.is_stationary:
            self._check_vertex(p.source)
            return
        q = self.path(*p.arrows)
        if (q.source, q.target) != (p.source, p.target):
            raise QuiverError(f"path {p} has inconsistent endpoints")

    def compose(self, p: Path, q: Path) -> Optional[Path]:
        self.validate_path(p)
        self.validate_path(q)
        return compose(p, q)

    def arrows_among(self, vertices: Iterable[Vertex]) -> Tuple[Arrow, ...]:
        """All arrows with both endpoints in ``vertices``, sorted by id."""
        vs = set(vertices)
        out = [a for v in vs for a in self.arrows_from(v) if a.target in vs]
        return tuple(sorted(out, key=lambda a: a.name))


@dataclass(frozen=True)
class FiniteQuiver(Quiver):
    """An explicit quiver; vertices keep declaration order."""

    vertex_list: Tuple[Vertex, ...] = ()
    arrow_list: Tuple[Arrow, ...] = ()
    _out: Dict[Vertex, Tuple[Arrow, ...]] = field(default=None, compare=False, repr=False, hash=False)
    _in: Dict[Vertex, Tuple[Arrow, ...]] = field(default=None, compare=False, repr=False, hash=False)
    _by_name: Dict[str, Arrow] = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        vs = tuple(self.vertex_list)
        arrows = tuple(self.arrow_list)
        if len(set(vs)) != len(vs):
            raise QuiverError("duplicate vertex")
        vset = set(vs)
        by_name: Dict[str, Arrow] = {}
        out: Dict[Vertex, List[Arrow]] = {v: [] for v in vs}
        inc: Dict[Vertex, List[Arrow]] = {v: [] for v in vs}
        for a in arrows:
            if a.name in by_name:
                raise QuiverError(f"duplicate arrow id {a.name!r}")
            if a.source not in vset or a.target not in vset:
                raise QuiverError(f"arrow {a.name!r} has an endpoint outside the vertex set")
            by_name[a.name] = a
            out[a.source].append(a)
            inc[a.target].append(a)
        object.__setattr__(self, "vertex_list", vs)
        object.__setattr__(self, "arrow_list", arrows)
        object.__setattr__(self, "_by_name", by_name)
        object.__setattr__(self, "_out", {v: tuple(sorted(x, key=lambda a: a.name)) for v, x in out.items()})
        object.__setattr__(self, "_in", {v: tuple(sorted(x, key=lambda a: a.name)) for v, x in inc.items()})

    @classmethod
    def build(cls, vertices: Iterable[Vertex], arrows: Iterable[Tuple[str, Vertex, Vertex]]) -> "FiniteQuiver":
        return cls(tuple(vertices), tuple(Arrow(n, s, t) for n, s, t in arrows))

    @property
    def is_finite(self) -> bool:
        return True

    @property
    def closure_certified(self) -> bool:  # type: ignore[override]
        return True

    def has_vertex(self, v: Vertex) -> bool:
        return v in self._out

    def arrows_from(self, v: Vertex) -> Tuple[Arrow, ...]:
        self._check_vertex(v)
        return self._out[v]

    def arrows_into(self, v: Vertex) -> Tuple[Arrow, ...]:
        self._check_vertex(v)
        return self._in[v]

    def arrow(self, name: str) -> Arrow:
        try:
            return self._by_name[name]
        except KeyError:
            raise QuiverError(f"no arrow named {name!r}") from None

    def vertices(self) -> Tuple[Vertex, ...]:
        return self.vertex_list

    def arrows(self) -> Tuple[Arrow, ...]:
        return self.arrow_list

    def vertex_from_str(self, text: str) -> Vertex:
        for v in self.vertex_list:
            if str(v) == text:
                return v
        raise QuiverError(f"no vertex named {text!r}")

    def __repr__(self) -> str:
        return f"FiniteQuiver({len(self.vertex_list)} vertices, {len(self.arrow_list)} arrows)"


def _int_vertex(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise QuiverError(f"{text!r} is not a natural-number vertex") from None
    if v < 0:
        raise QuiverError(f"{text!r} is not a natural-number vertex")
    return v


class AInfinity(Quiver):
    """0 <- 1 <- 2 <- ...: vertices are the naturals, arrow a_n goes n+1 -> n."""

    closure_certified = True

    def has_vertex(self, v: Vertex) -> bool:
        return isinstance(v, int) and not isinstance(v, bool) and v >= 0

    def arrows_from(self, v: Vertex) -> Tuple[Arrow, ...]:
        self._check_vertex(v)
        return (Arrow(f"a{v - 1}", v, v - 1),) if v > 0 else ()

    def arrows_into(self, v: Vertex) -> Tuple[Arrow, ...]:
        self._check_vertex(v)
        return (Arrow(f"a{v}", v + 1, v),)

    def arrow(self, name: str) -> Arrow:
        if name.startswith("a") and name[1:].isdigit() and str(int(name[1:])) == name[1:]:
            n = int(name[1:])
            return Arrow(name, n + 1, n)
        raise QuiverError(f"no arrow named {name!r} in A_infinity")

    def vertex_from_str(self, text: str) -> Vertex:
        return _int_vertex(text)

    def truncate(self, top: int) -> FiniteQuiver:
        """The closure of {top}: vertices 0..top with arrows a_0..a_{top-1}."""
        return closure(self, [top])

    def __eq__(self, other: object) -> bool:
        return type(other) is AInfinity

    def __hash__(self) -> int:
        return hash("AInfinity")

    def __repr__(self) -> str:
        return "AInfinity()"


class Circular(FiniteQuiver):
    """The oriented cycle on vertices 0..k with arrows a_i: i -> i+1 mod k+1."""

    def __init__(self, k: int):
        if k < 0:
            raise QuiverError("circular quiver needs k >= 0")
        n = k + 1
        arrows = tuple(Arrow(f"a{i}", i, (i + 1) % n) for i in range(n))
        object.__setattr__(self, "k", k)
        super().__init__(tuple(range(n)), arrows)

    @property
    def size(self) -> int:
        return self.k + 1

    def cycle(self) -> Path:
        return self.path(*(f"a{i}" for i in range(self.size)))

    def __repr__(self) -> str:
        return f"Circular({self.k})"


def power_cycle(q: Circular, n: int) -> Path:
    """(a_0 a_1 ... a_k)^n as a path from 0 to 0; n = 0 gives e_0."""
    if n < 0:
        raise ValueError("negative power")
    c = q.cycle().arrows
    if n == 0:
        return stationary(0)
    return Path(0, 0, c * n)


class GeneratedQuiver(Quiver):
    """A quiver given by arrow functions.

    ``certified`` is a trusted promise that every finite vertex set has a
    finite acyclic closure; it cannot be checked in general.
    """

    def __init__(
        self,
        name: str,
        has_vertex: Callable[[Vertex], bool],
        arrows_from: Callable[[Vertex], Sequence[Arrow]],
        arrows_into: Callable[[Vertex], Sequence[Arrow]],
        arrow: Callable[[str], Arrow],
        vertex_from_str: Callable[[str], Vertex],
        certified: bool = False,
        vertices: Optional[Callable[[], Iterator[Vertex]]] = None,
    ):
        self.name = name
        self._has = has_vertex
        self._from = arrows_from
        self._into = arrows_into
        self._arrow = arrow
        self._vstr = vertex_from_str
        self.closure_certified = certified
        self.enumerate_vertices = vertices

    def has_vertex(self, v: Vertex) -> bool:
        return self._has(v)

    def arrows_from(self, v: Vertex) -> Tuple[Arrow, ...]:
        self._check_vertex(v)
        return tuple(sorted(self._from(v), key=lambda a: a.name))

    def arrows_into(self, v: Vertex) -> Tuple[Arrow, ...]:
        self._check_vertex(v)
        return tuple(sorted(self._into(v), key=lambda a: a.name))

    def arrow(self, name: str) -> Arrow:
        a = self._arrow(name)
        if a is None:
            raise QuiverError(f"no arrow named {name!r} in {self.name}")
        return a

    def vertex_from_str(self, text: str) -> Vertex:
        return self._vstr(text)

    def __repr__(self) -> str:
        return f"GeneratedQuiver({self.name!r})"


def decorated_ainfinity(join: int = 2) -> GeneratedQuiver:
    """A_infinity with one extra infinite branch feeding into the spine.

    Branch vertices are ``"b0", "b1", ...`` with arrows ``c_i: b{i+1} -> b{i}``,
    and the branch joins the spine through ``c: b0 -> join``. Paths ending at
    any vertex form a countable set and closures of finite sets stay finite
    and acyclic.
    """
    spine = AInfinity()

    def is_branch(v):
        return isinstance(v, str) and v.startswith("b") and v[1:].isdigit() and str(int(v[1:])) == v[1:]

    def has(v):
        return spine.has_vertex(v) or is_branch(v)

    def out(v):
        if spine.has_vertex(v):
            return spine.arrows_from(v)
        i = int(v[1:])
        if i == 0:
            return (Arrow("c", "b0", join),)
        return (Arrow(f"c{i - 1}", v, f"b{i - 1}"),)

    def into(v):
        if spine.has_vertex(v):
            extra = (Arrow("c", "b0", join),) if v == join else ()
            return spine.arrows_into(v) + extra
        i = int(v[1:])
        return (Arrow(f"c{i}", f"b{i + 1}", v),)

    def arrow(name):
        if name == "c":
            return Arrow("c", "b0", join)
        if name.startswith("c") and name[1:].isdigit():
            i = int(name[1:])
            return Arrow(name, f"b{i + 1}", f"b{i}")
        return spine.arrow(name)

    def vstr(text):
        if is_branch(text):
            return text
        return _int_vertex(text)

    return GeneratedQuiver(f"decorated-ainfinity({join})", has, out, into, arrow, vstr, certified=True)


def closure(q: Quiver, seed: Iterable[Vertex]) -> FiniteQuiver:
    """The closed subquiver generated by ``seed``.

    Vertices are everything reachable by a path from the seed; arrows are
    all arrows whose source is such a vertex.
    """
    seed = list(seed)
    for v in seed:
        q._check_vertex(v)
    if not q.closure_certified:
        raise ClosureError(f"{q!r} carries no finite-closure certificate")
    seen = set(seed)
    queue = deque(seed)
    arrows: List[Arrow] = []
    while queue:
        v = queue.popleft()
        for a in q.arrows_from(v):
            arrows.append(a)
            if a.target not in seen:
                seen.add(a.target)
                queue.append(a.target)
    if isinstance(q, FiniteQuiver):
        # keep the declaration order of the ambient quiver
        vs = [v for v in q.vertices() if v in seen]
        arrows = [a for a in q.arrows() if a.source in seen]
    else:
        vs = sorted(seen, key=vertex_key)
        arrows.sort(key=lambda a: a.name)
    return FiniteQuiver(tuple(vs), tuple(arrows))


def is_closed_in(p: FiniteQuiver, q: Quiver) -> bool:
    """True when ``p`` is a closed subquiver of ``q``."""
    if not is_subquiver(p, q):
        return False
    for v in p.vertices():
        for a in q.arrows_from(v):
            if not p.has_vertex(a.target):
                return False
            try:
                if p.arrow(a.name) != a:
                    return False
            except QuiverError:
                return False
    return True


def is_subquiver(p: FiniteQuiver, q: Quiver) -> bool:
    if not all(q.has_vertex(v) for v in p.vertices()):
        return False
    for a in p.arrows():
        try:
            if q.arrow(a.name) != a:
                return False
        except QuiverError:
            return False
    return True


def is_acyclic(q: FiniteQuiver) -> bool:
    """Kahn's algorithm: no nontrivial path returns to its start."""
    indeg = {v: 0 for v in q.vertices()}
    for a in q.arrows():
        indeg[a.target] += 1
    queue = deque(v for v in q.vertices() if indeg[v] == 0)
    seen = 0
    while queue:
        v = queue.popleft()
        seen += 1
        for a in q.arrows_from(v):
            indeg[a.target] -= 1
            if indeg[a.target] == 0:
                queue.append(a.target)
    return seen == len(q.vertices())


def full_subquiver(q: Quiver, vertices: Iterable[Vertex]) -> FiniteQuiver:
    """The finite subquiver on ``vertices`` with every arrow between them."""
    vs = sorted(set(vertices), key=vertex_key)
    if isinstance(q, FiniteQuiver):
        order = {v: i for i, v in enumerate(q.vertices())}
        vs = sorted(vs, key=order.__getitem__)
    return FiniteQuiver(tuple(vs), q.arrows_among(vs))


def paths_into(q: Quiver, v: Vertex, max_len: Optional[int] = None) -> List[Path]:
    """All paths ending at ``v`` (length <= max_len), sorted by (length, arrow ids).

    Without a bound the result must be finite: this is only allowed on
    finite quivers whose backward-reachable part from ``v`` is acyclic.
    """
    q._check_vertex(v)
    if max_len is None:
        if not isinstance(q, FiniteQuiver):
            raise ClosureError("unbounded path enumeration on an infinite quiver")
        back = _backward_reachable(q, v)
        if not is_acyclic(full_subquiver(q, back)):
            raise ClosureError(f"infinitely many paths end at {v!r}")
    out: List[Path] = []
    frontier = [stationary(v)]
    length = 0
    while frontier:
        out.extend(frontier)
        if max_len is not None and length >= max_len:
            break
        nxt = []
        for p in frontier:
            for a in q.arrows_into(p.source):
                nxt.append(Path(a.source, v, (a.name,) + p.arrows))
        frontier = nxt
        length += 1
    out.sort(key=Path.sort_key)
    return out


def paths_from(q: Quiver, v: Vertex, max_len: Optional[int] = None) -> List[Path]:
    """All paths starting at ``v``; unbounded only inside a finite acyclic closure."""
    q._check_vertex(v)
    if max_len is None:
        c = closure(q, [v])
        if not is_acyclic(c):
            raise ClosureError(f"infinitely many paths start at {v!r}")
        q = c
    out: List[Path] = []
    frontier = [stationary(v)]
    length = 0
    while frontier:
        out.extend(frontier)
        if max_len is not None and length >= max_len:
            break
        nxt = []
        for p in frontier:
            for a in q.arrows_from(p.target):
                nxt.append(Path(v, a.target, p.arrows + (a.name,)))
        frontier = nxt
        length += 1
    out.sort(key=Path.sort_key)
    return out


def paths_between(q: Quiver, u: Vertex, w: Vertex) -> List[Path]:
    return [p for p in paths_from(q, u) if p.target == w]


def _backward_reachable(q: Quiver, v: Vertex) -> set:
    seen = {v}
    queue = deque([v])
    while queue:
        x = queue.popleft()
        for a in q.arrows_into(x):
            if a.source not in seen:
                seen.add(a.source)
                queue.append(a.source)
    return seen


# Small named quivers used throughout the tests and the bundled corpus.

def linear_quiver(n: int, reverse: bool = False) -> FiniteQuiver:
    """A_n with vertices 1..n and arrows a_i: i -> i+1 (or reversed)."""
    arrows = []
    for i in range(1, n):
        s, t = (i, i + 1) if not reverse else (i + 1, i)
        arrows.append((f"a{i}", s, t))
    return FiniteQuiver.build(range(1, n + 1), arrows)


def a3_sink() -> FiniteQuiver:
    return FiniteQuiver.build([1, 2, 3], [("a1", 1, 2), ("a2", 3, 2)])


def a3_source() -> FiniteQuiver:
    return FiniteQuiver.build([1, 2, 3], [("a1", 2, 1), ("a2", 2, 3)])


def d4_sink() -> FiniteQuiver:
    """D_4 with the three outer vertices pointing at the centre 0."""
    return FiniteQuiver.build([0, 1, 2, 3], [("b1", 1, 0), ("b2", 2, 0), ("b3", 3, 0)])
