"""Finite truncations of the ladder-system modules over A_infinity and cycles.

Elements of the outer direct sum (+)_xi F^xi are :class:`DSElement` values.
A successor slot xi holds one element of KQ; a limit alpha carries inner
slots (alpha, i), each holding an element of KQ. Generators of the relation
submodule I are

    g_{alpha,n} = e^{zeta}_{gv(n)} - e^{alpha,inner(n)}_{lv(n)} + e^{alpha,inner(n+1)}_{lv(n+1)} step(n)

where the flavor fixes gv, lv, inner and step:

    A_infinity: gv(n) = lv(n) = n, inner(n) = 0, step(n) = a_n
    cycle:      gv(n) = lv(n) = 0, inner(n) = n, step(n) = a_0 a_1 ... a_k
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .linalg import QQ, Field, FieldMismatchError, SparseEchelon
from .ordinals import LadderSystem, OrdinalT
from .pathalg import AlgebraElement
from .quiver import AInfinity, Circular, Path, Quiver, paths_from, paths_into, power_cycle, stationary

SlotKey = Tuple[OrdinalT, Optional[int]]


class TruncationError(ValueError):
    """An index falls outside the truncation."""


class InsufficientBounds(TruncationError):
    """The requested bounds cannot certify a quotient-membership answer."""


class MalformedPsi(ValueError):
    pass


class ColoringError(ValueError):
    pass


def _slot_order(key: SlotKey):
    o, i = key
    return (o.k, o.n, -1 if i is None else i)


def _check_key(key: SlotKey) -> None:
    o, i = key
    if o.is_limit:
        if i is None or i < 0:
            raise TruncationError(f"limit slot {o} needs a natural inner index")
    elif i is not None:
        raise TruncationError(f"slot {o} is not a limit and takes no inner index")


def format_slot(key: SlotKey) -> str:
    o, i = key
    return str(o) if i is None else f"{o}#{i}"


class DSElement:
    """A finitely supported element of (+)_xi F^xi."""

    __slots__ = ("quiver", "field", "_slots")

    def __init__(self, quiver: Quiver, field: Field = QQ, slots: Optional[Mapping[SlotKey, AlgebraElement]] = None):
        self.quiver = quiver
        self.field = field
        clean: Dict[SlotKey, AlgebraElement] = {}
        for key, x in (slots or {}).items():
            _check_key(key)
            if x.field != field:
                raise FieldMismatchError("slot content over a different field")
            if x:
                clean[key] = x
        self._slots = clean

    @classmethod
    def _raw(cls, quiver: Quiver, field: Field, slots: Dict[SlotKey, AlgebraElement]) -> "DSElement":
        x = cls.__new__(cls)
        x.quiver, x.field, x._slots = quiver, field, slots
        return x

    @classmethod
    def basis(cls, quiver: Quiver, field: Field, ordinal: OrdinalT, v, inner: Optional[int] = None) -> "DSElement":
        """e^gamma_v (successor) or e^{alpha,inner}_v (limit)."""
        quiver._check_vertex(v)
        key = (ordinal, inner)
        _check_key(key)
        return cls._raw(quiver, field, {key: AlgebraElement(quiver, field, {stationary(v): 1})})

    def slots(self) -> List[Tuple[SlotKey, AlgebraElement]]:
        return [(k, self._slots[k]) for k in sorted(self._slots, key=_slot_order)]

    def slot(self, key: SlotKey) -> AlgebraElement:
        x = self._slots.get(key)
        return x if x is not None else AlgebraElement(self.quiver, self.field)

    def support(self) -> List[OrdinalT]:
        return sorted({k[0] for k in self._slots})

    def limits(self) -> List[OrdinalT]:
        return [o for o in self.support() if o.is_limit]

    def __bool__(self) -> bool:
        return bool(self._slots)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return not self._slots
        if not isinstance(other, DSElement):
            return NotImplemented
        return self.field == other.field and self._slots == other._slots

    def __hash__(self) -> int:
        return hash(frozenset(self._slots.items()))

    def _combine(self, other: "DSElement", sign: int) -> "DSElement":
        if not isinstance(other, DSElement):
            if isinstance(other, int) and other == 0:
                return self
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatchError("direct-sum elements over different fields")
        out = dict(self._slots)
        for k, x in other._slots.items():
            cur = out.get(k)
            y = (x if sign > 0 else -x) if cur is None else (cur + x if sign > 0 else cur - x)
            if y:
                out[k] = y
            else:
                out.pop(k, None)
        return DSElement._raw(self.quiver, self.field, out)

    def __add__(self, other):
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self) -> "DSElement":
        return DSElement._raw(self.quiver, self.field, {k: -x for k, x in self._slots.items()})

    def scalar_mul(self, c: Any) -> "DSElement":
        out = {k: x.scalar_mul(c) for k, x in self._slots.items()}
        return DSElement._raw(self.quiver, self.field, {k: x for k, x in out.items() if x})

    def mul_path(self, p: Path) -> "DSElement":
        out = {k: x.mul_path(p) for k, x in self._slots.items()}
        return DSElement._raw(self.quiver, self.field, {k: x for k, x in out.items() if x})

    def __mul__(self, r: Union[Path, AlgebraElement, Any]) -> "DSElement":
        if isinstance(r, Path):
            return self.mul_path(r)
        if isinstance(r, AlgebraElement):
            out = {k: x * r for k, x in self._slots.items()}
            return DSElement._raw(self.quiver, self.field, {k: x for k, x in out.items() if x})
        return self.scalar_mul(r)

    def act_idempotent(self, v) -> "DSElement":
        out = {k: x.act_idempotent(v) for k, x in self._slots.items()}
        return DSElement._raw(self.quiver, self.field, {k: x for k, x in out.items() if x})

    def codiagonal(self) -> AlgebraElement:
        """Sum of all slot contents: the map (+)_xi KQ -> KQ."""
        total = AlgebraElement(self.quiver, self.field)
        for _, x in self.slots():
            total = total + x
        return total

    def vector(self) -> Dict[Tuple[SlotKey, Path], Any]:
        return {(k, p): c for k, x in self._slots.items() for p, c in x.items()}

    def max_path_length(self, keys: Optional[Callable[[SlotKey], bool]] = None) -> Optional[int]:
        lens = [x.max_path_length() for k, x in self._slots.items() if keys is None or keys(k)]
        return max(lens) if lens else None

    def __str__(self) -> str:
        if not self._slots:
            return "0"
        return "{" + "; ".join(f"{format_slot(k)}: {x}" for k, x in self.slots()) + "}"

    __repr__ = __str__


def vector_order(c: Tuple[SlotKey, Path]):
    key, p = c
    return (_slot_order(key), p.sort_key())


# -- flavors


class Flavor:
    name = "flavor"
    step_len = 1

    def __init__(self, quiver: Quiver):
        self.quiver = quiver

    def gen_vertex(self, n: int):
        raise NotImplementedError

    def inner(self, n: int) -> int:
        raise NotImplementedError

    def limit_vertex(self, n: int):
        raise NotImplementedError

    def step(self, n: int) -> Path:
        raise NotImplementedError

    def prefix(self, i: int) -> Path:
        """P_i with step(i-1) ... step(0) = P_i, a path lv(i) -> lv(0)."""
        raise NotImplementedError

    def limit_generator(self, inner: int, v) -> Optional[int]:
        """The n with (inner(n), lv(n)) = (inner, v), if any."""
        raise NotImplementedError

    def succ_vertex(self, gamma: OrdinalT):
        return self.gen_vertex(gamma.n_gamma)

    def growth_index(self, key: SlotKey, p: Path) -> Optional[int]:
        """Position of a limit-slot basis element along the generator chain."""
        raise NotImplementedError

    def spec(self) -> str:
        raise NotImplementedError


class AInfFlavor(Flavor):
    """A_infinity, or any quiver containing it as vertices 0, 1, ... with arrows a_n."""

    name = "ainf"

    def __init__(self, quiver: Optional[Quiver] = None, label: str = "ainf"):
        super().__init__(quiver if quiver is not None else AInfinity())
        self.label = label

    def gen_vertex(self, n):
        return n

    def inner(self, n):
        return 0

    def limit_vertex(self, n):
        return n

    def step(self, n):
        return Path(n + 1, n, (f"a{n}",))

    def prefix(self, i):
        return Path(i, 0, tuple(f"a{j}" for j in range(i - 1, -1, -1)))

    def limit_generator(self, inner, v):
        if inner == 0 and isinstance(v, int) and not isinstance(v, bool) and v >= 0:
            return v
        return None

    def growth_index(self, key, p):
        v = p.source
        return v if isinstance(v, int) and not isinstance(v, bool) else None

    def spec(self) -> str:
        return self.label


class CircularFlavor(Flavor):
    name = "circular"

    def __init__(self, k: int):
        super().__init__(Circular(k))
        self.k = k
        self.step_len = k + 1
        self._cycle = self.quiver.cycle()

    def gen_vertex(self, n):
        return 0

    def inner(self, n):
        return n

    def limit_vertex(self, n):
        return 0

    def step(self, n):
        return self._cycle

    def prefix(self, i):
        return power_cycle(self.quiver, i)

    def limit_generator(self, inner, v):
        return inner if v == 0 else None

    def growth_index(self, key, p):
        return key[1]

    def spec(self) -> str:
        return f"circular {self.k + 1}"


# -- maps on generators


@dataclass
class PhiMap:
    """A homomorphism I -> target given on the generators g_{alpha,n}."""

    values: Dict[Tuple[OrdinalT, int], Union[AlgebraElement, DSElement]]
    window: Tuple[OrdinalT, ...]
    zero: Union[AlgebraElement, DSElement]

    def value(self, alpha: OrdinalT, n: int):
        return self.values.get((alpha, n), self.zero)

    def collapsed(self) -> "PhiMap":
        """Compose with the codiagonal so every value lies in KQ."""
        vals = {}
        for k, v in self.values.items():
            vals[k] = v.codiagonal() if isinstance(v, DSElement) else v
        z = self.zero.codiagonal() if isinstance(self.zero, DSElement) else self.zero
        return PhiMap(vals, self.window, z)


@dataclass
class Coloring:
    """d_alpha(zeta^alpha_n) with the vertex each value must end at."""

    values: Dict[Tuple[OrdinalT, int], AlgebraElement]
    targets: Dict[Tuple[OrdinalT, int], Any]
    ladder: LadderSystem

    def at(self, alpha: OrdinalT, n: int) -> AlgebraElement:
        return self.values[(alpha, n)]


@dataclass
class Uniformizer:
    """f on successor ordinals plus thresholds N_alpha."""

    values: Dict[OrdinalT, AlgebraElement]
    thresholds: Dict[OrdinalT, int]
    zero: AlgebraElement

    def f(self, z: OrdinalT) -> AlgebraElement:
        return self.values.get(z, self.zero)


@dataclass
class PsiAssignment:
    """psi on the free generators e^gamma_{gv(n_gamma)} and e^{alpha,inner(n)}_{lv(n)}."""

    succ: Dict[OrdinalT, Any] = field(default_factory=dict)
    lim: Dict[Tuple[OrdinalT, int], Any] = field(default_factory=dict)


@dataclass
class TelescopeReport:
    alpha: OrdinalT
    n: int
    recursive: DSElement
    closed_form: DSElement
    alpha_free: DSElement
    forced: DSElement
    tail: DSElement
    alpha_slot_max_len: Optional[int]
    alpha_slot_copies: int
    forced_survives: bool
    circular: bool

    @property
    def identity_holds(self) -> bool:
        return self.recursive == self.closed_form

    @property
    def growth_ok(self) -> bool:
        ok = self.alpha_slot_max_len is not None and self.alpha_slot_max_len >= self.n
        if self.circular:
            ok = ok and self.alpha_slot_copies >= self.n + 1
        return ok

    @property
    def ok(self) -> bool:
        return self.identity_holds and self.forced_survives and self.growth_ok


@dataclass
class ReconstructionReport:
    psi: PsiAssignment
    checked: int
    first_failure: Optional[Tuple[OrdinalT, int]]
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.first_failure is None


class TrlifajModel:
    """The truncated construction for one flavor, ladder system and field."""

    def __init__(self, flavor: Flavor, ladder: LadderSystem, field: Field = QQ):
        self.flavor = flavor
        self.ladder = ladder
        self.field = field
        self.quiver = flavor.quiver

    @property
    def depth(self) -> int:
        return self.ladder.depth

    # -- basic elements

    def zero(self) -> DSElement:
        return DSElement(self.quiver, self.field)

    def kq_zero(self) -> AlgebraElement:
        return AlgebraElement(self.quiver, self.field)

    def kq(self, terms: Mapping[Path, Any]) -> AlgebraElement:
        return AlgebraElement(self.quiver, self.field, terms)

    def e_succ(self, gamma: OrdinalT, v=None) -> DSElement:
        if v is None:
            v = self.flavor.succ_vertex(gamma)
        return DSElement.basis(self.quiver, self.field, gamma, v)

    def e_lim(self, alpha: OrdinalT, inner: int, v) -> DSElement:
        return DSElement.basis(self.quiver, self.field, alpha, v, inner)

    def e_alpha(self, alpha: OrdinalT, n: int) -> DSElement:
        """e^{alpha,inner(n)}_{lv(n)}: the limit generator at chain position n."""
        fl = self.flavor
        return self.e_lim(alpha, fl.inner(n), fl.limit_vertex(n))

    def _check(self, alpha: OrdinalT, n: int) -> None:
        if not alpha.is_limit or alpha.k > self.ladder.kmax:
            raise TruncationError(f"{alpha} is not a limit inside the truncation")
        if n < 0 or n + 1 > self.depth:
            raise TruncationError(f"generator index {n} needs n + 1 <= depth {self.depth}")

    def gen_x(self, alpha: OrdinalT, n: int) -> DSElement:
        self._check(alpha, n)
        fl = self.flavor
        z = self.ladder.zeta(alpha, n)
        return (
            self.e_succ(z, fl.gen_vertex(n))
            - self.e_alpha(alpha, n)
            + self.e_alpha(alpha, n + 1).mul_path(fl.step(n))
        )

    def phi_witness(self, alpha: OrdinalT, n: int) -> DSElement:
        self._check(alpha, n)
        return self.e_alpha(alpha, n)

    def generators(self, window: Iterable[OrdinalT]) -> List[Tuple[OrdinalT, int]]:
        return [(a, n) for a in sorted(set(window)) for n in range(self.depth)]

    # -- the relation submodule

    def i_span_basis(self, window: Iterable[OrdinalT], n_max: int, path_len_max: int) -> List[Tuple[Tuple[OrdinalT, int, Path], DSElement]]:
        """All g_{alpha,n} p with alpha in window, n <= n_max, length(p) <= path_len_max."""
        out = []
        for alpha in sorted(set(window)):
            for n in range(n_max + 1):
                g = self.gen_x(alpha, n)
                for p in paths_from(self.quiver, self.flavor.gen_vertex(n), path_len_max):
                    out.append(((alpha, n, p), g.mul_path(p)))
        return out

    def span_rank(self, elems: Sequence[DSElement]) -> int:
        ech = SparseEchelon(self.field, key=vector_order)
        for x in elems:
            ech.add(x.vector())
        return ech.rank

    def required_bounds(self, z: DSElement) -> Tuple[int, int]:
        """(n_max, path_len) that certify membership of z in I.

        Writing z = sum g_{alpha,n} r_{alpha,n}, the alpha slots force
        r_{alpha,0} = -z_0 and r_{alpha,i} = step r_{alpha,i-1} - z_i, where
        z_i is the part of z at chain position i. Finite support then kills
        every r beyond the last position V present in z, so generators up to
        V - 1 suffice and r_{alpha,i} has length <= step_len * i + max length.
        """
        n_max, longest = 0, 0
        for (o, inner), x in z.slots():
            if not o.is_limit:
                continue
            for p in x.support():
                pos = self.flavor.growth_index((o, inner), p)
                if pos is not None:
                    n_max = max(n_max, pos - 1)
                longest = max(longest, p.length)
        return n_max, self.flavor.step_len * n_max + longest

    def quotient_equal(
        self,
        x: DSElement,
        y: DSElement,
        window: Optional[Iterable[OrdinalT]] = None,
        bounds: Optional[Tuple[int, int]] = None,
    ) -> bool:
        """x + I == y + I, decided by exact span membership."""
        z = x - y
        if not z:
            return True
        lims = z.limits()
        if window is not None:
            window = set(window)
            missing = [a for a in lims if a not in window]
            if missing:
                raise InsufficientBounds(f"window misses limit(s) {', '.join(map(str, missing))}")
        if not lims:
            # every nonzero element of I has a nonzero limit slot
            return False
        need_n, need_len = self.required_bounds(z)
        if bounds is None:
            bounds = (need_n, need_len)
        elif bounds[0] < need_n or bounds[1] < need_len:
            raise InsufficientBounds(
                f"bounds {bounds} are below the certified requirement ({need_n}, {need_len})"
            )
        if bounds[0] + 1 > self.depth:
            raise InsufficientBounds(f"needs generators up to n={bounds[0]} beyond depth {self.depth}")
        ech = SparseEchelon(self.field, key=vector_order)
        for _, g in self.i_span_basis(lims, bounds[0], bounds[1]):
            ech.add(g.vector())
        return z.vector() in ech

    # -- the witness and its telescoping expansion

    def witness_phi(self, window: Iterable[OrdinalT]) -> PhiMap:
        window = tuple(sorted(set(window)))
        vals = {(a, n): self.phi_witness(a, n) for a, n in self.generators(window)}
        return PhiMap(vals, window, self.zero())

    def zero_phi(self, window: Iterable[OrdinalT]) -> PhiMap:
        return PhiMap({}, tuple(sorted(set(window))), self.kq_zero())

    def random_kq(self, rng: random.Random, v, max_len: int = 2, terms: int = 3) -> AlgebraElement:
        """Random element of KQ e_v with paths of length <= max_len."""
        paths = paths_into(self.quiver, v, max_len)
        picks = rng.sample(paths, min(len(paths), rng.randint(1, terms)))
        return self.kq({p: rng.choice([-3, -2, -1, 1, 2, 3]) for p in picks})

    def random_phi(self, window: Iterable[OrdinalT], rng: random.Random, max_len: int = 2) -> PhiMap:
        window = tuple(sorted(set(window)))
        vals = {}
        for a, n in self.generators(window):
            vals[(a, n)] = self.random_kq(rng, self.flavor.gen_vertex(n), max_len)
        return PhiMap(vals, window, self.kq_zero())

    def _psi_value_ok(self, value: DSElement, v) -> bool:
        return value.act_idempotent(v) == value

    def claim22_telescope(self, psi: PsiAssignment, alpha: OrdinalT, n: int) -> TelescopeReport:
        """Expand psi(e^alpha_0) along n + 1 generator equations.

        psi must split the witness phi: psi(g_{alpha,i}) = e^alpha_i. The
        recursion psi(e^alpha_i) = psi(e^{zeta_i}) - e^alpha_i + psi(e^alpha_{i+1}) step(i)
        is unrolled and compared with its closed form.
        """
        self._check(alpha, n)
        fl = self.flavor
        zetas = [self.ladder.zeta(alpha, i) for i in range(n + 1)]
        for i, z in enumerate(zetas):
            val = psi.succ.get(z, self.zero())
            if not isinstance(val, DSElement):
                raise MalformedPsi(f"psi value at {z} is not a direct-sum element")
            if not self._psi_value_ok(val, fl.gen_vertex(i)):
                raise MalformedPsi(f"psi(e^{z}) has a path not ending at {fl.gen_vertex(i)!r}")
            if any(not o < alpha for o in val.support()):
                raise MalformedPsi(f"psi(e^{z}) has support outside {alpha}")
        tail_in = psi.lim.get((alpha, n + 1), self.zero())
        if not isinstance(tail_in, DSElement) or not self._psi_value_ok(tail_in, fl.limit_vertex(n + 1)):
            raise MalformedPsi(f"psi(e^{alpha} at position {n + 1}) is malformed")

        cur = tail_in
        for i in range(n, -1, -1):
            cur = psi.succ.get(zetas[i], self.zero()) - self.phi_witness(alpha, i) + cur.mul_path(fl.step(i))
        recursive = cur

        alpha_free, forced = self.zero(), self.zero()
        for i in range(n + 1):
            pre = fl.prefix(i)
            alpha_free = alpha_free + psi.succ.get(zetas[i], self.zero()).mul_path(pre)
            forced = forced - self.phi_witness(alpha, i).mul_path(pre)
        tail = tail_in.mul_path(fl.prefix(n + 1))
        closed = alpha_free + forced + tail

        is_alpha = lambda key: key[0] == alpha
        copies = sum(1 for key, _ in recursive.slots() if is_alpha(key))
        rv = recursive.vector()
        survives = all(rv.get(c) == v for c, v in forced.vector().items())
        return TelescopeReport(
            alpha, n, recursive, closed, alpha_free, forced, tail,
            recursive.max_path_length(is_alpha), copies, survives,
            isinstance(fl, CircularFlavor),
        )

    def random_psi(self, alpha: OrdinalT, n: int, rng: random.Random, max_len: int = 2) -> PsiAssignment:
        """A random admissible psi for the telescope at (alpha, n)."""
        fl = self.flavor
        below = self._ordinals_below(alpha)
        psi = PsiAssignment()
        for i in range(n + 1):
            z = self.ladder.zeta(alpha, i)
            psi.succ[z] = self._random_ds(rng, below, fl.gen_vertex(i), max_len)
        psi.lim[(alpha, n + 1)] = self._random_ds(rng, below + [alpha], fl.limit_vertex(n + 1), max_len)
        return psi

    def _ordinals_below(self, alpha: OrdinalT) -> List[OrdinalT]:
        out = []
        for k in range(alpha.k):
            for m in range(0, 4):
                if k == 0 or m > 0:
                    out.append(OrdinalT(k, m))
            if k >= 1:
                out.append(OrdinalT(k, 0))
        return out

    def _random_ds(self, rng: random.Random, ordinals: Sequence[OrdinalT], v, max_len: int) -> DSElement:
        total = self.zero()
        for _ in range(rng.randint(0, 3)):
            o = rng.choice(list(ordinals))
            inner = rng.randint(0, 2) if o.is_limit else None
            content = self.random_kq(rng, v, max_len)
            total = total + DSElement(self.quiver, self.field, {(o, inner): content})
        return total

    # -- colorings and uniformization

    def extract_coloring(self, phi: PhiMap) -> Coloring:
        """d_alpha(zeta^alpha_n) := phi(g_{alpha,n}), collapsed into KQ."""
        phi = phi.collapsed()
        vals, targets = {}, {}
        for a, n in self.generators(phi.window):
            d = phi.value(a, n)
            t = self.flavor.gen_vertex(n)
            if d.act_idempotent(t) != d:
                raise ColoringError(f"coloring value at ({a}, {n}) has a path not ending at {t!r}")
            for m in {p.target for p in d.support()} | {t}:
                if m != t and d.act_idempotent(m):
                    raise ColoringError(f"coloring value at ({a}, {n}) meets vertex {m!r}")
            vals[(a, n)] = d
            targets[(a, n)] = t
        return Coloring(vals, targets, self.ladder)

    def uniformizer_from(
        self,
        coloring: Coloring,
        thresholds: Mapping[OrdinalT, int],
        rng: Optional[random.Random] = None,
        resolve_conflicts: bool = False,
    ) -> Uniformizer:
        """A uniformizer agreeing with each d_alpha from N_alpha on.

        Ladder points shared between limits must carry a single value; with
        ``resolve_conflicts`` the later limit's threshold is raised past a
        disagreeing shared point, otherwise the conflict is an error.
        """
        th = {a: thresholds.get(a, 0) for a in sorted({a for a, _ in coloring.values})}
        while True:
            forced: Dict[OrdinalT, Tuple[AlgebraElement, OrdinalT, int]] = {}
            clash = None
            for (a, n), d in sorted(coloring.values.items(), key=lambda kv: (kv[0][0], kv[0][1])):
                if n < th[a]:
                    continue
                z = self.ladder.zeta(a, n)
                if z in forced and forced[z][0] != d:
                    clash = (a, n, forced[z][1])
                    break
                forced.setdefault(z, (d, a, n))
            if clash is None:
                break
            a, n, other = clash
            if not resolve_conflicts:
                raise ColoringError(f"shared ladder point zeta^{a}_{n} colored differently by {other}")
            th[a] = n + 1
        vals = {z: d for z, (d, _, _) in forced.items()}
        if rng is not None:
            for (a, n) in sorted(coloring.values):
                z = self.ladder.zeta(a, n)
                if z not in vals:
                    vals[z] = self.random_kq(rng, self.flavor.gen_vertex(n))
        return Uniformizer(vals, th, self.kq_zero())

    def apply_psi(self, psi: PsiAssignment, x: DSElement, zero) -> Any:
        """Evaluate the homomorphism determined by psi on an element of F."""
        fl = self.flavor
        total = zero
        for (o, inner), content in x.slots():
            for p, c in content.items():
                if inner is None:
                    if p.source != fl.succ_vertex(o):
                        raise MalformedPsi(f"{p} in slot {o} is outside the submodule F")
                    val = psi.succ.get(o, zero)
                else:
                    n = fl.limit_generator(inner, p.source)
                    if n is None:
                        raise MalformedPsi(f"{p} in slot {o}#{inner} is outside the submodule F")
                    val = psi.lim.get((o, n), zero)
                total = total + val.mul_path(p).scalar_mul(c)
        return total

    def reconstruct_psi(self, phi: PhiMap, unif: Uniformizer, check_len: int = 1) -> ReconstructionReport:
        """Build psi from a uniformizer by downward induction and check psi|I = phi."""
        phi = phi.collapsed()
        fl = self.flavor
        zero = self.kq_zero()
        for a in phi.window:
            if unif.thresholds.get(a, 0) > self.depth:
                raise TruncationError(f"threshold N_{a} = {unif.thresholds[a]} exceeds depth {self.depth}")
        psi = PsiAssignment()
        for a, n in self.generators(phi.window):
            z = self.ladder.zeta(a, n)
            psi.succ[z] = unif.f(z)
        for a in phi.window:
            N = unif.thresholds.get(a, 0)
            for n in range(self.depth, -1, -1):
                if n >= N:
                    psi.lim[(a, n)] = zero
                else:
                    z = self.ladder.zeta(a, n)
                    psi.lim[(a, n)] = psi.succ[z] + psi.lim[(a, n + 1)].mul_path(fl.step(n)) - phi.value(a, n)
        checked = 0
        for a, n in self.generators(phi.window):
            g = self.gen_x(a, n)
            target = phi.value(a, n)
            for p in paths_from(self.quiver, fl.gen_vertex(n), check_len):
                checked += 1
                got = self.apply_psi(psi, g.mul_path(p), zero)
                if got != target.mul_path(p):
                    return ReconstructionReport(
                        psi, checked, (a, n),
                        f"psi(g_{{{a},{n}}} {p}) = {got} but phi gives {target.mul_path(p)}",
                    )
        return ReconstructionReport(psi, checked, None)


# -- function-style entry points


def gen_x(model: TrlifajModel, alpha: OrdinalT, n: int) -> DSElement:
    return model.gen_x(alpha, n)


def phi_witness(model: TrlifajModel, alpha: OrdinalT, n: int) -> DSElement:
    return model.phi_witness(alpha, n)


def i_span_basis(model: TrlifajModel, window, n_max: int, path_len_max: int) -> List[DSElement]:
    return [g for _, g in model.i_span_basis(window, n_max, path_len_max)]


def quotient_equal(model: TrlifajModel, x: DSElement, y: DSElement, window=None, bounds=None) -> bool:
    return model.quotient_equal(x, y, window, bounds)


def claim22_telescope(model: TrlifajModel, psi: PsiAssignment, alpha: OrdinalT, n: int) -> TelescopeReport:
    return model.claim22_telescope(psi, alpha, n)


def extract_coloring(model: TrlifajModel, phi: PhiMap) -> Coloring:
    return model.extract_coloring(phi)


def reconstruct_psi(model: TrlifajModel, phi: PhiMap, unif: Uniformizer, check_len: int = 1) -> ReconstructionReport:
    return model.reconstruct_psi(phi, unif, check_len)


def random_scenario(model: TrlifajModel, window: Sequence[OrdinalT], seed: Any, max_threshold: int = 5):
    """A random (phi, uniformizer) pair with thresholds <= max_threshold.

    Thresholds are raised where needed so that shared ladder points get a
    single value; this never pushes them past ``max_threshold`` for the
    default ladder, whose shared points all sit at n <= 1.
    """
    rng = random.Random(seed)
    phi = model.random_phi(window, rng)
    col = model.extract_coloring(phi)
    th = {a: rng.randint(0, max_threshold) for a in sorted(window)}
    unif = model.uniformizer_from(col, th, rng, resolve_conflicts=True)
    return phi, col, unif
