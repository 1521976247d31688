"""Finite K-linear combinations of paths and their products."""

from __future__ import annotations

import re
from typing import Any, Dict, Iterable, Iterator, Mapping, Optional, Tuple, Union

from .linalg import QQ, Field, FieldMismatchError
from .quiver import Path, Quiver, QuiverError, compose, stationary


class AlgebraElement:
    """An element of KQ: a finite map path -> nonzero scalar.

    Instances are immutable. Construct them through :class:`PathAlgebra`
    (which validates paths) or the arithmetic below.
    """

    __slots__ = ("quiver", "field", "_terms", "_hash")

    def __init__(self, quiver: Quiver, field: Field, terms: Mapping[Path, Any] = ()):
        self.quiver = quiver
        self.field = field
        clean: Dict[Path, Any] = {}
        for p, c in dict(terms).items():
            c = field(c)
            if c:
                clean[p] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, quiver: Quiver, field: Field, terms: Dict[Path, Any]) -> "AlgebraElement":
        x = cls.__new__(cls)
        x.quiver = quiver
        x.field = field
        x._terms = terms
        x._hash = None
        return x

    # -- basic accessors

    @property
    def terms(self) -> Dict[Path, Any]:
        return dict(self._terms)

    def support(self) -> Tuple[Path, ...]:
        return tuple(sorted(self._terms, key=Path.sort_key))

    def items(self) -> Iterator[Tuple[Path, Any]]:
        for p in self.support():
            yield p, self._terms[p]

    def coeff(self, p: Path) -> Any:
        return self._terms.get(p, self.field.zero)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def _same(self, other: "AlgebraElement") -> None:
        if self.field != other.field:
            raise FieldMismatchError("algebra elements over different fields")
        if self.quiver is not other.quiver and self.quiver != other.quiver:
            raise QuiverError("algebra elements over different quivers")

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return not self._terms
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.field == other.field and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset((p, c) for p, c in self._terms.items()))
        return self._hash

    # -- vector space structure

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        if isinstance(other, int) and other == 0:
            return self
        self._same(other)
        out = dict(self._terms)
        for p, c in other._terms.items():
            v = out.get(p)
            v = c if v is None else v + c
            if v:
                out[p] = v
            else:
                out.pop(p, None)
        return AlgebraElement._raw(self.quiver, self.field, out)

    __radd__ = __add__

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement._raw(self.quiver, self.field, {p: -c for p, c in self._terms.items()})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def scalar_mul(self, c: Any) -> "AlgebraElement":
        c = self.field(c)
        if not c:
            return AlgebraElement._raw(self.quiver, self.field, {})
        return AlgebraElement._raw(self.quiver, self.field, {p: c * x for p, x in self._terms.items()})

    # -- multiplication

    def __mul__(self, other: Union["AlgebraElement", Path, int, Any]) -> "AlgebraElement":
        if isinstance(other, Path):
            return self.mul_path(other)
        if isinstance(other, AlgebraElement):
            return mul(self, other)
        return self.scalar_mul(other)

    def __rmul__(self, other: Any) -> "AlgebraElement":
        if isinstance(other, Path):
            return AlgebraElement._raw(self.quiver, self.field, {other: self.field.one}) * self
        return self.scalar_mul(other)

    def mul_path(self, q: Path) -> "AlgebraElement":
        """Right multiplication by a single path (injective on paths, so no merging)."""
        out: Dict[Path, Any] = {}
        for p, c in self._terms.items():
            r = compose(p, q)
            if r is not None:
                out[r] = c
        return AlgebraElement._raw(self.quiver, self.field, out)

    def lmul_path(self, q: Path) -> "AlgebraElement":
        """Left multiplication by a single path."""
        out: Dict[Path, Any] = {}
        for p, c in self._terms.items():
            r = compose(q, p)
            if r is not None:
                out[r] = c
        return AlgebraElement._raw(self.quiver, self.field, out)

    # -- filtrations and idempotents

    def act_idempotent(self, v) -> "AlgebraElement":
        """x . e_v: the part of x supported on paths ending at v."""
        return AlgebraElement._raw(
            self.quiver, self.field, {p: c for p, c in self._terms.items() if p.target == v}
        )

    def left_idempotent(self, v) -> "AlgebraElement":
        """e_v . x: the part of x supported on paths starting at v."""
        return AlgebraElement._raw(
            self.quiver, self.field, {p: c for p, c in self._terms.items() if p.source == v}
        )

    def max_path_length(self) -> Optional[int]:
        if not self._terms:
            return None
        return max(p.length for p in self._terms)

    def in_length_filtration(self, n: int) -> bool:
        m = self.max_path_length()
        return m is None or m <= n

    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return f"AlgebraElement({format_element(self)!r})"


def mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Bilinear extension of path composition."""
    x._same(y)
    out: Dict[Path, Any] = {}
    by_source: Dict[Any, list] = {}
    for q, d in y._terms.items():
        by_source.setdefault(q.source, []).append((q, d))
    for p, c in x._terms.items():
        for q, d in by_source.get(p.target, ()):
            r = compose(p, q)
            out[r] = out.get(r, 0) + c * d
    return AlgebraElement._raw(x.quiver, x.field, {p: c for p, c in out.items() if c})


def act_idempotent(x: AlgebraElement, v) -> AlgebraElement:
    return x.act_idempotent(v)


def max_path_length(x: AlgebraElement) -> Optional[int]:
    return x.max_path_length()


def in_length_filtration(x: AlgebraElement, n: int) -> bool:
    return x.in_length_filtration(n)


def coset_reduce(x: AlgebraElement, ideal_gen: Path, max_len: int) -> AlgebraElement:
    """Canonical representative of x modulo the left multiples of ``ideal_gen``.

    The left multiples p.g of a path g are exactly the paths having g as a
    suffix, so reduction drops those support paths. Only multiples of length
    at most ``max_len`` are available, hence x must lie in KQ_{<=max_len}.
    """
    if not x.in_length_filtration(max_len):
        raise ValueError(f"element has a path longer than {max_len}")
    if ideal_gen.length > max_len:
        return x
    keep = {p: c for p, c in x._terms.items() if not p.has_suffix(ideal_gen)}
    return AlgebraElement._raw(x.quiver, x.field, keep)


class PathAlgebra:
    """Factory for elements of KQ over a fixed quiver and field."""

    def __init__(self, quiver: Quiver, field: Field = QQ):
        self.quiver = quiver
        self.field = field

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PathAlgebra) and self.quiver == other.quiver and self.field == other.field

    def __hash__(self) -> int:
        return hash((type(self.quiver).__name__, self.field))

    @property
    def zero(self) -> AlgebraElement:
        return AlgebraElement._raw(self.quiver, self.field, {})

    def element(self, terms: Union[Mapping[Path, Any], Iterable[Tuple[Path, Any]]]) -> AlgebraElement:
        if isinstance(terms, Mapping):
            pairs = list(terms.items())
        else:
            pairs = list(terms)
        acc: Dict[Path, Any] = {}
        for p, c in pairs:
            self.quiver.validate_path(p)
            acc[p] = acc.get(p, self.field.zero) + self.field(c)
        return AlgebraElement(self.quiver, self.field, acc)

    def of_path(self, p: Path, c: Any = 1) -> AlgebraElement:
        return self.element({p: c})

    def e(self, v) -> AlgebraElement:
        return self.of_path(self.quiver.e(v))

    def path(self, *names: str) -> AlgebraElement:
        return self.of_path(self.quiver.path(*names))

    def parse(self, text: str) -> AlgebraElement:
        return parse_element(text, self.quiver, self.field)


# -- text form: ``3/2*a1.a0 + e0``

_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*\*\s*)?([^\s+\-*]+)\s*")


def format_element(x: AlgebraElement) -> str:
    if not x._terms:
        return "0"
    parts = []
    for i, (p, c) in enumerate(x.items()):
        text = x.field.format(c)
        neg = text.startswith("-")
        if neg:
            text = text[1:]
        body = str(p) if text == "1" else f"{text}*{p}"
        if i == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


def parse_path(token: str, quiver: Quiver) -> Path:
    """``a1.a0`` or ``e<vertex>``."""
    if "." not in token and token.startswith("e") and len(token) > 1:
        try:
            quiver.arrow(token)
        except QuiverError:
            return quiver.e(quiver.vertex_from_str(token[1:]))
    return quiver.path(*token.split("."))


def parse_element(text: str, quiver: Quiver, field: Field = QQ) -> AlgebraElement:
    text = text.strip()
    if text == "0":
        return AlgebraElement(quiver, field)
    acc: Dict[Path, Any] = {}
    pos = 0
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse algebra element at column {pos + 1}: {text!r}")
        sign, coef, tok = m.groups()
        if sign is None and not first:
            raise ValueError(f"missing operator before {tok!r} at column {m.start(3) + 1}")
        c = field.parse(coef) if coef else field.one
        if sign == "-":
            c = -c
        p = parse_path(tok, quiver)
        acc[p] = acc.get(p, field.zero) + c
        pos = m.end()
        first = False
    return AlgebraElement(quiver, field, acc)


def identity_element(quiver: Quiver, field: Field = QQ) -> AlgebraElement:
    """Sum of all stationary paths; only a two-sided identity for finite quivers."""
    return AlgebraElement(quiver, field, {stationary(v): 1 for v in quiver.vertices()})
