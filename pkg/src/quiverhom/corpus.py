"""Deterministic corpora of small representations and batch checks over them."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from .homol import check_cor_1_3, ext1_against_algebra, ext1_dim, euler_form
from .linalg import QQ, Field, GF, Matrix, rank
from .quiver import FiniteQuiver, a3_sink, a3_source, closure, d4_sink, linear_quiver
from .rep import Representation, change_of_basis, direct_sum, extend_T, hom_space_dim, projective_rep, restrict

CORPUS_QUIVERS: Dict[str, Callable[[], FiniteQuiver]] = {
    "a2": lambda: linear_quiver(2),
    "a2-rev": lambda: linear_quiver(2, reverse=True),
    "a3": lambda: linear_quiver(3),
    "a3-sink": a3_sink,
    "a3-source": a3_source,
    "a4": lambda: linear_quiver(4),
    "d4-sink": d4_sink,
}

# a closed proper subquiver for each corpus quiver (closure of one vertex)
CLOSED_SEEDS: Dict[str, Sequence[Any]] = {
    "a2": [2],
    "a2-rev": [2],
    "a3": [2],
    "a3-sink": [1],
    "a3-source": [1],
    "a4": [2],
    "d4-sink": [1, 2],
}

FIELDS: Dict[str, Field] = {"q": QQ, "fp5": GF(5)}


@dataclass(frozen=True)
class Instance:
    ident: str
    quiver: str
    field: str
    kind: str
    rep: Representation


def _random_matrix(rng: random.Random, rows: int, cols: int, fld: Field) -> Matrix:
    return Matrix.from_rows([[rng.randint(-2, 2) for _ in range(cols)] for _ in range(rows)], fld, ncols=cols)


def random_rep(q: FiniteQuiver, rng: random.Random, fld: Field, max_dim: int = 2) -> Representation:
    dims = {v: rng.randint(0, max_dim) for v in q.vertices()}
    maps = {}
    for a in q.arrows():
        if dims[a.source] and dims[a.target]:
            maps[a.name] = _random_matrix(rng, dims[a.target], dims[a.source], fld)
    return Representation(q, dims, maps, fld)


def random_invertible(rng: random.Random, n: int, fld: Field) -> Matrix:
    while True:
        m = _random_matrix(rng, n, n, fld)
        if rank(m) == n:
            return m


def projective_sums(q: FiniteQuiver, fld: Field, max_summands: int = 3) -> Iterator[Tuple[Tuple[Any, ...], Representation]]:
    for size in range(1, max_summands + 1):
        for combo in itertools.combinations_with_replacement(q.vertices(), size):
            yield combo, direct_sum([projective_rep(q, v, fld) for v in combo])


def corpus_instances(name: str, field_spec: str, n_random: int = 500) -> List[Instance]:
    """Random reps (dims <= 2), all projective sums of <= 3 summands, and
    base-changed copies of those sums; seeded by quiver and field name."""
    q = CORPUS_QUIVERS[name]()
    fld = FIELDS[field_spec]
    rng = random.Random(f"{name}:{field_spec}")
    out = []
    for i in range(n_random):
        out.append(Instance(f"{name}/{field_spec}/rand{i:04d}", name, field_spec, "random", random_rep(q, rng, fld)))
    for combo, x in projective_sums(q, fld):
        label = "+".join(map(str, combo))
        out.append(Instance(f"{name}/{field_spec}/proj[{label}]", name, field_spec, "projective", x))
        g = {v: random_invertible(rng, d, fld) for v, d in x.dims.items()}
        out.append(Instance(f"{name}/{field_spec}/projbc[{label}]", name, field_spec, "projective-basechange", change_of_basis(x, g)))
    return out


def random_pairs(name: str, field_spec: str, count: int = 200) -> List[Tuple[Representation, Representation]]:
    q = CORPUS_QUIVERS[name]()
    fld = FIELDS[field_spec]
    rng = random.Random(f"pairs:{name}:{field_spec}")
    return [(random_rep(q, rng, fld), random_rep(q, rng, fld)) for _ in range(count)]


@dataclass
class CorpusLine:
    ident: str
    dims: str
    ext1: int
    structural: bool
    agree: bool

    def render(self) -> str:
        return (
            f"{self.ident} dims={self.dims} ext1_kq={self.ext1} "
            f"projective={'yes' if self.structural else 'no'} agree={'yes' if self.agree else 'NO'}"
        )


def _dims_text(x: Representation, q: FiniteQuiver) -> str:
    return "(" + ",".join(str(x.dim(v)) for v in q.vertices()) + ")"


def run_cor13(name: str, field_spec: str, n_random: int = 500) -> List[CorpusLine]:
    q = CORPUS_QUIVERS[name]()
    out = []
    for inst in corpus_instances(name, field_spec, n_random):
        v = check_cor_1_3(inst.rep)
        out.append(CorpusLine(inst.ident, _dims_text(inst.rep, q), v.ext1_value, v.structural, v.agree))
    return out


def euler_failures(name: str, field_spec: str, count: int = 200) -> Tuple[int, List[int]]:
    q = CORPUS_QUIVERS[name]()
    bad = []
    pairs = random_pairs(name, field_spec, count)
    for i, (x, y) in enumerate(pairs):
        lhs = hom_space_dim(x, y) - ext1_dim(x, y)
        if lhs != euler_form(x.dims, y.dims, q):
            bad.append(i)
    return len(pairs), bad


def closed_subquiver(name: str) -> FiniteQuiver:
    return closure(CORPUS_QUIVERS[name](), CLOSED_SEEDS[name])


@dataclass
class ShadowResult:
    checked: int
    ext_failures: List[str]
    roundtrip_failures: List[str]

    @property
    def ok(self) -> bool:
        return not self.ext_failures and not self.roundtrip_failures


def restriction_shadow(name: str, field_spec: str, n_random: int = 500) -> ShadowResult:
    """Ext-vanishing survives restriction to a closed subquiver P, and
    restrict(extend_T(z), P) = z for every restricted instance z."""
    q = CORPUS_QUIVERS[name]()
    p = closed_subquiver(name)
    checked, bad_ext, bad_rt = 0, [], []
    for inst in corpus_instances(name, field_spec, n_random):
        z = restrict(inst.rep, p)
        if restrict(extend_T(z, q), p) != z:
            bad_rt.append(inst.ident)
        if ext1_against_algebra(inst.rep) == 0:
            checked += 1
            if ext1_against_algebra(z) != 0:
                bad_ext.append(inst.ident)
    return ShadowResult(checked, bad_ext, bad_rt)


def corpus_report(names: Optional[Sequence[str]] = None, field_specs: Optional[Sequence[str]] = None,
                  n_random: int = 500, euler_pairs: int = 200) -> Tuple[str, bool]:
    """Text report sorted by instance id, plus overall pass flag."""
    names = sorted(names or CORPUS_QUIVERS)
    field_specs = sorted(field_specs or FIELDS)
    lines: List[CorpusLine] = []
    summary = []
    ok = True
    for name in names:
        for fs in field_specs:
            rows = run_cor13(name, fs, n_random)
            lines.extend(rows)
            proj = sum(r.structural for r in rows)
            agree = all(r.agree for r in rows)
            total, bad = euler_failures(name, fs, euler_pairs)
            ok = ok and agree and not bad
            summary.append(
                f"summary {name}/{fs}: instances={len(rows)} projective={proj} "
                f"cor13_agree={'pass' if agree else 'FAIL'} euler={total - len(bad)}/{total}"
            )
    lines.sort(key=lambda r: r.ident)
    body = [r.render() for r in lines] + summary
    body.append(f"overall {'pass' if ok else 'FAIL'}")
    return "\n".join(body) + "\n", ok
