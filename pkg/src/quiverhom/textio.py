"""Line-oriented text formats for quivers, representations and scenarios."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from .linalg import QQ, Field, Matrix
from .ordinals import LadderError, LadderSystem, OrdinalT, default_ladder
from .quiver import (
    AInfinity,
    Arrow,
    Circular,
    FiniteQuiver,
    GeneratedQuiver,
    Quiver,
    QuiverError,
    decorated_ainfinity,
)
from .rep import Representation, RepresentationError


class ParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _lines(text: str):
    for i, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield i, line


def _vertex_token(tok: str):
    """Natural-number names become ints, anything else stays a string."""
    return int(tok) if re.fullmatch(r"\d+", tok) else tok


_NAME = r"[A-Za-z0-9_']+"
_ARROW = re.compile(rf"^arrow\s+({_NAME})\s*:\s*({_NAME})\s*->\s*({_NAME})$")


# -- quivers


def parse_quiver(text: str) -> Quiver:
    vertices: List[Any] = []
    arrows: List[Arrow] = []
    family: Optional[Quiver] = None
    family_line = None
    for ln, line in _lines(text):
        words = line.split()
        head = words[0]
        if head == "vertex":
            if len(words) != 2 or not re.fullmatch(_NAME, words[1]):
                raise ParseError("expected 'vertex <name>'", ln)
            v = _vertex_token(words[1])
            if v in vertices:
                raise ParseError(f"duplicate vertex {words[1]!r}", ln)
            vertices.append(v)
        elif head == "arrow":
            m = _ARROW.match(line)
            if not m:
                raise ParseError("expected 'arrow <name>: <src> -> <dst>'", ln)
            name, s, t = m.group(1), _vertex_token(m.group(2)), _vertex_token(m.group(3))
            for end in (s, t):
                if end not in vertices:
                    raise ParseError(f"arrow {name!r} has undeclared endpoint {end!r}", ln)
            if any(a.name == name for a in arrows):
                raise ParseError(f"duplicate arrow {name!r}", ln)
            arrows.append(Arrow(name, s, t))
        elif head == "family":
            if family is not None:
                raise ParseError("more than one family line", ln)
            family_line = ln
            if words[1:] == ["ainfinity"]:
                family = AInfinity()
            elif len(words) == 3 and words[1] == "circular":
                try:
                    size = int(words[2])
                except ValueError:
                    raise ParseError("circular size must be an integer", ln) from None
                if size < 1:
                    raise ParseError("circular size must be at least 1", ln)
                family = Circular(size - 1)
            elif words[1:2] == ["decorated-ainfinity"] and len(words) <= 3:
                join = int(words[2]) if len(words) == 3 else 2
                family = decorated_ainfinity(join)
            else:
                raise ParseError(f"unknown family {' '.join(words[1:])!r}", ln)
        else:
            raise ParseError(f"unknown declaration {head!r}", ln)
    if family is not None:
        if vertices or arrows:
            raise ParseError("a family cannot be mixed with explicit vertices or arrows", family_line)
        return family
    return FiniteQuiver(tuple(vertices), tuple(arrows))


def serialize_quiver(q: Quiver) -> str:
    if isinstance(q, Circular):
        return f"family circular {q.size}\n"
    if isinstance(q, FiniteQuiver):
        out = [f"vertex {v}" for v in q.vertices()]
        out += [f"arrow {a.name}: {a.source} -> {a.target}" for a in q.arrows()]
        return "\n".join(out) + "\n"
    if isinstance(q, AInfinity):
        return "family ainfinity\n"
    if isinstance(q, GeneratedQuiver) and q.name.startswith("decorated-ainfinity("):
        join = q.name[len("decorated-ainfinity("):-1]
        return f"family decorated-ainfinity {join}\n"
    raise ValueError(f"no text form for {q!r}")


# -- matrices and representations


def parse_matrix(text: str, fld: Field = QQ) -> List[List[Any]]:
    """``[[1,2],[3/2,0]]`` -> rows of field elements."""
    s = re.sub(r"\s+", "", text)
    if not (s.startswith("[") and s.endswith("]")):
        raise ValueError("matrix must be bracketed")
    inner = s[1:-1]
    if not inner:
        return []
    if not (inner.startswith("[") and inner.endswith("]")):
        raise ValueError("matrix rows must be bracketed")
    rows = []
    for chunk in inner[1:-1].split("],["):
        if "[" in chunk or "]" in chunk:
            raise ValueError("malformed matrix row")
        rows.append([fld.parse(x) for x in chunk.split(",")] if chunk else [])
    return rows


def parse_rep(text: str, q: Quiver, fld: Field = QQ) -> Representation:
    dims: Dict[Any, int] = {}
    maps: Dict[str, Tuple[int, List[List[Any]]]] = {}
    for ln, line in _lines(text):
        words = line.split()
        if words[0] == "dim":
            if len(words) != 3:
                raise ParseError("expected 'dim <vertex> <n>'", ln)
            try:
                v = q.vertex_from_str(words[1])
            except QuiverError as exc:
                raise ParseError(str(exc), ln) from None
            if not re.fullmatch(r"\d+", words[2]):
                raise ParseError("dimension must be a natural number", ln)
            if v in dims:
                raise ParseError(f"dimension of {words[1]!r} given twice", ln)
            dims[v] = int(words[2])
        elif words[0] == "map":
            m = re.match(rf"^map\s+({_NAME})\s*=\s*(.+)$", line)
            if not m:
                raise ParseError("expected 'map <arrow> = [[...]]'", ln)
            name = m.group(1)
            try:
                q.arrow(name)
            except QuiverError as exc:
                raise ParseError(str(exc), ln) from None
            if name in maps:
                raise ParseError(f"map for arrow {name!r} given twice", ln)
            try:
                maps[name] = (ln, parse_matrix(m.group(2), fld))
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"map for arrow {name}: {exc}", ln) from None
        else:
            raise ParseError(f"unknown declaration {words[0]!r}", ln)
    for name, (ln, rows) in maps.items():
        a = q.arrow(name)
        want = (dims.get(a.target, 0), dims.get(a.source, 0))
        ok = len(rows) == want[0] and all(len(r) == want[1] for r in rows)
        if not ok:
            got = f"{len(rows)}x{len(rows[0]) if rows else 0}"
            raise ParseError(f"map for arrow {name} must be {want[0]}x{want[1]}, got {got}", ln)
    real = {
        n: Matrix.from_rows(rows, fld, ncols=dims.get(q.arrow(n).source, 0))
        for n, (_, rows) in maps.items()
        if dims.get(q.arrow(n).source, 0) and dims.get(q.arrow(n).target, 0)
    }
    try:
        return Representation(q, dims, real, fld)
    except RepresentationError as exc:
        raise ParseError(str(exc)) from None


def serialize_rep(x: Representation) -> str:
    out = [f"dim {v} {d}" for v, d in x.dim_vector().items()]
    for a in x.arrows():
        out.append(f"map {a.name} = {x.map(a.name)}")
    return "\n".join(out) + "\n"


# -- trlifaj scenarios


@dataclass
class Scenario:
    flavor: str = "ainf"
    circular_size: int = 0
    kmax: int = 3
    depth: int = 20
    ladder: str = "default"
    overrides: List[Tuple[int, int, int, int]] = field(default_factory=list)
    phi: str = "witness"
    phi_seed: int = 0
    thresholds: List[int] = field(default_factory=list)
    uniformizer: str = "coloring"
    broken_at: Optional[Tuple[int, int]] = None

    def build_ladder(self) -> LadderSystem:
        lad = default_ladder(self.kmax, self.depth)
        for k, n, k2, n2 in self.overrides:
            lad = lad.with_override(k, n, OrdinalT(k2, n2))
        return lad

    def threshold_map(self) -> Dict[OrdinalT, int]:
        th = {}
        for k in range(1, self.kmax + 1):
            th[OrdinalT(k, 0)] = self.thresholds[k - 1] if k - 1 < len(self.thresholds) else 0
        return th


def parse_scenario(text: str) -> Scenario:
    sc = Scenario()
    seen = set()
    for ln, line in _lines(text):
        words = line.split()
        head = words[0]
        if head in seen and head != "zeta":
            raise ParseError(f"{head!r} given twice", ln)
        seen.add(head)
        try:
            if head == "flavor":
                if words[1:] == ["ainf"]:
                    sc.flavor = "ainf"
                elif words[1:] == ["decorated-ainfinity"]:
                    sc.flavor = "decorated-ainfinity"
                elif len(words) == 3 and words[1] == "circular":
                    sc.flavor = "circular"
                    sc.circular_size = int(words[2])
                    if sc.circular_size < 1:
                        raise ParseError("circular size must be at least 1", ln)
                else:
                    raise ParseError(f"unknown flavor {' '.join(words[1:])!r}", ln)
            elif head in ("kmax", "depth"):
                if len(words) != 2:
                    raise ParseError(f"expected '{head} <n>'", ln)
                setattr(sc, head, int(words[1]))
            elif head == "ladder":
                if words[1:] != ["default"]:
                    raise ParseError("only 'ladder default' is supported", ln)
            elif head == "zeta":
                m = re.fullmatch(r"zeta\s+(\d+)\s+(\d+)\s*=\s*(\d+)\s+(\d+)", line)
                if not m:
                    raise ParseError("expected 'zeta <k> <n> = <k'> <n'>'", ln)
                sc.overrides.append(tuple(int(g) for g in m.groups()))
            elif head == "phi":
                if words[1:] in (["witness"], ["zero"]):
                    sc.phi = words[1]
                elif len(words) == 3 and words[1] == "random":
                    sc.phi, sc.phi_seed = "random", int(words[2])
                else:
                    raise ParseError("expected 'phi witness|zero|random <seed>'", ln)
            elif head == "thresholds":
                sc.thresholds = [int(w) for w in words[1:]]
                if any(t < 0 for t in sc.thresholds):
                    raise ParseError("thresholds must be natural numbers", ln)
            elif head == "uniformizer":
                if words[1:] == ["coloring"]:
                    sc.uniformizer = "coloring"
                elif len(words) == 4 and words[1] == "broken":
                    sc.uniformizer = "broken"
                    sc.broken_at = (int(words[2]), int(words[3]))
                else:
                    raise ParseError("expected 'uniformizer coloring|broken <k> <n>'", ln)
            else:
                raise ParseError(f"unknown declaration {head!r}", ln)
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(str(exc), ln) from None
    if sc.kmax < 1:
        raise ParseError("kmax must be at least 1")
    if sc.depth < 1:
        raise ParseError("depth must be at least 1")
    if len(sc.thresholds) > sc.kmax:
        raise ParseError("more thresholds than limits")
    try:
        sc.build_ladder()
    except LadderError as exc:
        raise ParseError(f"ladder: {exc}") from None
    return sc


def serialize_scenario(sc: Scenario) -> str:
    if sc.flavor == "circular":
        out = [f"flavor circular {sc.circular_size}"]
    else:
        out = [f"flavor {sc.flavor}"]
    out += [f"kmax {sc.kmax}", f"depth {sc.depth}", f"ladder {sc.ladder}"]
    out += [f"zeta {k} {n} = {k2} {n2}" for k, n, k2, n2 in sc.overrides]
    out.append(f"phi random {sc.phi_seed}" if sc.phi == "random" else f"phi {sc.phi}")
    if sc.thresholds:
        out.append("thresholds " + " ".join(map(str, sc.thresholds)))
    if sc.uniformizer == "broken":
        out.append(f"uniformizer broken {sc.broken_at[0]} {sc.broken_at[1]}")
    else:
        out.append("uniformizer coloring")
    return "\n".join(out) + "\n"
