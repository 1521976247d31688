"""Exact scalars and dense linear algebra over Q or a prime field.

Rationals are plain :class:`fractions.Fraction` values. Residues mod p are
:class:`Residue` objects bound to a :class:`PrimeField`. Every matrix carries
its field and operations refuse to mix fields.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Dict, Hashable, List, Optional, Sequence, Tuple


class FieldMismatchError(ValueError):
    """Raised when values from two different field contexts meet."""


class Field:
    """Base class for the two supported field contexts."""

    name = "field"

    def __call__(self, value: Any) -> Any:
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def parse(self, text: str) -> Any:
        text = text.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            return self(Fraction(int(num), int(den)))
        return self(int(text))

    def format(self, value: Any) -> str:
        raise NotImplementedError

    def spec(self) -> str:
        """Command-line spelling of the field (``q`` or ``fp <p>``)."""
        raise NotImplementedError


class Rationals(Field):
    name = "Q"

    def __call__(self, value: Any) -> Fraction:
        if isinstance(value, Residue):
            raise FieldMismatchError(f"cannot coerce {value!r} into Q")
        return Fraction(value)

    def format(self, value: Fraction) -> str:
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"

    def spec(self) -> str:
        return "q"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Rationals)

    def __hash__(self) -> int:
        return hash("Q")

    def __repr__(self) -> str:
        return "QQ"


QQ = Rationals()


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class PrimeField(Field):
    """The field of residues mod a prime p (p <= 2**31)."""

    def __init__(self, p: int):
        if not isinstance(p, int) or p > 2**31 or not _is_prime(p):
            raise ValueError(f"{p!r} is not a prime <= 2^31")
        self.p = p
        self.name = f"F_{p}"

    def __call__(self, value: Any) -> "Residue":
        if isinstance(value, Residue):
            if value.field.p != self.p:
                raise FieldMismatchError(f"residue mod {value.field.p} used in F_{self.p}")
            return value
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise ZeroDivisionError(f"{value} has no image in F_{self.p}")
            return Residue(value.numerator * pow(value.denominator, -1, self.p), self)
        if isinstance(value, int):
            return Residue(value, self)
        raise TypeError(f"cannot coerce {value!r} into F_{self.p}")

    def format(self, value: "Residue") -> str:
        return str(value.value)

    def spec(self) -> str:
        return f"fp {self.p}"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("F", self.p))

    def __repr__(self) -> str:
        return f"GF({self.p})"


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_spec(text: str) -> Field:
    """Parse ``q``, ``fp 5`` or ``fp:5`` into a field context."""
    parts = text.replace(":", " ").split()
    if not parts:
        raise ValueError("empty field specification")
    if parts[0].lower() in ("q", "qq") and len(parts) == 1:
        return QQ
    if parts[0].lower() == "fp" and len(parts) == 2:
        return GF(int(parts[1]))
    raise ValueError(f"bad field specification {text!r}")


class Residue:
    """An element of F_p, stored as the canonical representative in [0, p)."""

    __slots__ = ("value", "field")

    def __init__(self, value: int, field: PrimeField):
        self.value = value % field.p
        self.field = field

    def _other(self, other: Any) -> int:
        if isinstance(other, Residue):
            if other.field.p != self.field.p:
                raise FieldMismatchError(f"F_{self.field.p} and F_{other.field.p} mixed")
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return self.field(other).value
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return Residue(self.value + o, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return Residue(self.value - o, self.field)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return Residue(o - self.value, self.field)

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return Residue(self.value * o, self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        if o % self.field.p == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return Residue(self.value * pow(o, -1, self.field.p), self.field)

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return Residue(o, self.field) / self

    def __neg__(self):
        return Residue(-self.value, self.field)

    def __pos__(self):
        return self

    def __bool__(self) -> bool:
        return self.value != 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Residue):
            return self.field.p == other.field.p and self.value == other.value
        if isinstance(other, int):
            return (self.value - other) % self.field.p == 0
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.field.p))

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.field.p})"

    def __str__(self) -> str:
        return str(self.value)


def field_of(value: Any) -> Field:
    if isinstance(value, Residue):
        return value.field
    return QQ


Column = Tuple[Any, ...]


@dataclass(frozen=True)
class Matrix:
    """Immutable dense matrix over an exact field, stored row-major."""

    nrows: int
    ncols: int
    rows: Tuple[Tuple[Any, ...], ...]
    field: Field = QQ

    def __post_init__(self):
        if self.nrows < 0 or self.ncols < 0:
            raise ValueError("negative matrix dimension")
        if len(self.rows) != self.nrows or any(len(r) != self.ncols for r in self.rows):
            raise ValueError(f"rows do not form a {self.nrows}x{self.ncols} grid")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]], field: Field = QQ, ncols: Optional[int] = None) -> "Matrix":
        rows = [tuple(field(x) for x in r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls(len(rows), ncols, tuple(rows), field)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[Any]], nrows: int, field: Field = QQ) -> "Matrix":
        cols = [tuple(field(x) for x in c) for c in cols]
        for c in cols:
            if len(c) != nrows:
                raise ValueError("column height mismatch")
        rows = tuple(tuple(c[i] for c in cols) for i in range(nrows))
        return cls(nrows, len(cols), rows, field)

    @classmethod
    def zeros(cls, nrows: int, ncols: int, field: Field = QQ) -> "Matrix":
        z = field.zero
        return cls(nrows, ncols, tuple((z,) * ncols for _ in range(nrows)), field)

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "Matrix":
        z, o = field.zero, field.one
        return cls(n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), field)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij: Tuple[int, int]):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> Column:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> List[Column]:
        return [self.column(j) for j in range(self.ncols)]

    def _check(self, other: "Matrix") -> None:
        if self.field != other.field:
            raise FieldMismatchError(f"{self.field!r} and {other.field!r} mixed")

    @property
    def T(self) -> "Matrix":
        return Matrix(self.ncols, self.nrows, tuple(zip(*self.rows)) if self.nrows else tuple(() for _ in range(self.ncols)), self.field)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        z = self.field.zero
        cols = other.T.rows
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = z
                for a, b in zip(r, c):
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(tuple(row))
        return Matrix(self.nrows, other.ncols, tuple(out), self.field)

    def apply(self, v: Sequence[Any]) -> Column:
        if len(v) != self.ncols:
            raise ValueError(f"vector of length {len(v)} for {self.shape} matrix")
        z = self.field.zero
        out = []
        for r in self.rows:
            acc = z
            for a, b in zip(r, v):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return tuple(out)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix(self.nrows, self.ncols, tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.field)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix(self.nrows, self.ncols, tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.field)

    def scale(self, c: Any) -> "Matrix":
        c = self.field(c)
        return Matrix(self.nrows, self.ncols, tuple(tuple(c * a for a in r) for r in self.rows), self.field)

    def is_zero(self) -> bool:
        return not any(a for r in self.rows for a in r)

    def to_lists(self) -> List[List[str]]:
        return [[self.field.format(a) for a in r] for r in self.rows]

    def __str__(self) -> str:
        return "[" + ",".join("[" + ",".join(r) + "]" for r in self.to_lists()) + "]"


def hstack(blocks: Sequence[Matrix], nrows: Optional[int] = None, field: Optional[Field] = None) -> Matrix:
    if not blocks:
        return Matrix.zeros(nrows or 0, 0, field or QQ)
    f = blocks[0].field
    for b in blocks:
        if b.field != f:
            raise FieldMismatchError("hstack over mixed fields")
        if b.nrows != blocks[0].nrows:
            raise ValueError("hstack height mismatch")
    rows = tuple(tuple(x for b in blocks for x in b.rows[i]) for i in range(blocks[0].nrows))
    return Matrix(blocks[0].nrows, sum(b.ncols for b in blocks), rows, f)


def vstack(blocks: Sequence[Matrix], ncols: Optional[int] = None, field: Optional[Field] = None) -> Matrix:
    if not blocks:
        return Matrix.zeros(0, ncols or 0, field or QQ)
    f = blocks[0].field
    for b in blocks:
        if b.field != f:
            raise FieldMismatchError("vstack over mixed fields")
        if b.ncols != blocks[0].ncols:
            raise ValueError("vstack width mismatch")
    return Matrix(sum(b.nrows for b in blocks), blocks[0].ncols, tuple(r for b in blocks for r in b.rows), f)


def block_diag(blocks: Sequence[Matrix], field: Field = QQ) -> Matrix:
    if blocks:
        field = blocks[0].field
    n = sum(b.nrows for b in blocks)
    m = sum(b.ncols for b in blocks)
    z = field.zero
    rows: List[Tuple[Any, ...]] = []
    off = 0
    for b in blocks:
        if b.field != field:
            raise FieldMismatchError("block_diag over mixed fields")
        for r in b.rows:
            rows.append((z,) * off + r + (z,) * (m - off - b.ncols))
        off += b.ncols
    return Matrix(n, m, tuple(rows), field)


def rref(m: Matrix) -> Tuple[List[List[Any]], List[int]]:
    """Reduced row echelon form; pivots are the first nonzero entry in column order."""
    rows = [list(r) for r in m.rows]
    pivots: List[int] = []
    r = 0
    for c in range(m.ncols):
        piv = None
        for i in range(r, m.nrows):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        pr = rows[r]
        for i in range(m.nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y if y else x for x, y in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
        if r == m.nrows:
            break
    return rows, pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: Matrix) -> Matrix:
    """Columns of the returned matrix form a basis of the right null space."""
    rows, pivots = rref(m)
    pivset = set(pivots)
    free = [c for c in range(m.ncols) if c not in pivset]
    z, o = m.field.zero, m.field.one
    cols = []
    for f in free:
        v = [z] * m.ncols
        v[f] = o
        for i, p in enumerate(pivots):
            v[p] = -rows[i][f]
        cols.append(tuple(v))
    return Matrix.from_columns(cols, m.ncols, m.field) if cols else Matrix.zeros(m.ncols, 0, m.field)


def solve(a: Matrix, b: Sequence[Any]) -> Optional[Column]:
    """Return some x with a.x = b, or None when the system is inconsistent."""
    if len(b) != a.nrows:
        raise ValueError(f"right-hand side of length {len(b)} for {a.shape} system")
    b = [a.field(x) for x in b]
    aug = Matrix(a.nrows, a.ncols + 1, tuple(r + (x,) for r, x in zip(a.rows, b)), a.field)
    rows, pivots = rref(aug)
    if pivots and pivots[-1] == a.ncols:
        return None
    x = [a.field.zero] * a.ncols
    for i, p in enumerate(pivots):
        x[p] = rows[i][a.ncols]
    return tuple(x)


def in_span(v: Sequence[Any], basis: Matrix) -> bool:
    if len(v) != basis.nrows:
        raise ValueError("height mismatch")
    if not any(v):
        return True
    return solve(basis, v) is not None


def complement_basis(sub: Matrix, dim: int, field: Field = QQ) -> List[int]:
    """Indices of standard basis vectors completing the column space of ``sub``.

    Deterministic: unit vectors are tried in index order.
    """
    echelon = SparseEchelon(field)
    for col in sub.columns():
        echelon.add({i: x for i, x in enumerate(col) if x})
    picked = []
    for i in range(dim):
        if echelon.add({i: field.one}):
            picked.append(i)
    return picked


class SparseEchelon:
    """Incrementally built echelon basis of sparse vectors (dicts coord -> scalar).

    Pivots are the smallest coordinate under ``key``. When ``track`` is set,
    each stored row remembers which input labels it combines, so vectors in
    the span can be written in terms of the inputs.
    """

    def __init__(self, field: Field = QQ, key: Callable[[Hashable], Any] = lambda c: c, track: bool = False):
        self.field = field
        self.key = key
        self.track = track
        self.rows: Dict[Hashable, Dict[Hashable, Any]] = {}
        self.tags: Dict[Hashable, Dict[Hashable, Any]] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce(self, vec: Dict[Hashable, Any], tag: Optional[Dict[Hashable, Any]]):
        fld = self.field
        vec = {k: fld(v) for k, v in vec.items() if v}
        rows, key = self.rows, self.key
        while True:
            hits = [k for k in vec if k in rows]
            if not hits:
                return vec, tag
            k = min(hits, key=key)
            c = vec[k]
            for kk, vv in rows[k].items():
                nv = vec.get(kk, 0) - c * vv
                if nv:
                    vec[kk] = nv
                else:
                    vec.pop(kk, None)
            if tag is not None:
                for kk, vv in self.tags[k].items():
                    nv = tag.get(kk, 0) - c * vv
                    if nv:
                        tag[kk] = nv
                    else:
                        tag.pop(kk, None)

    def reduce(self, vec: Dict[Hashable, Any]) -> Dict[Hashable, Any]:
        return self._reduce(vec, None)[0]

    def add(self, vec: Dict[Hashable, Any], label: Hashable = None) -> bool:
        """Insert ``vec``; return False when it was already in the span."""
        tag = {label: self.field.one} if self.track else None
        red, tag = self._reduce(vec, tag)
        if not red:
            return False
        p = min(red, key=self.key)
        inv = 1 / red[p]
        self.rows[p] = {k: v * inv for k, v in red.items()}
        if tag is not None:
            self.tags[p] = {k: v * inv for k, v in tag.items()}
        return True

    def __contains__(self, vec: Dict[Hashable, Any]) -> bool:
        return not self.reduce(vec)

    def express(self, vec: Dict[Hashable, Any]) -> Optional[Dict[Hashable, Any]]:
        """Coefficients over the inserted labels summing to ``vec``, or None."""
        if not self.track:
            raise ValueError("echelon was built without tracking")
        red, tag = self._reduce(vec, {})
        if red:
            return None
        # the reduction subtracted c * (combination); negate to read off vec
        return {k: -v for k, v in tag.items() if v}

