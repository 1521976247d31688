"""Command line front end: every verification as a batch job with a report.

Exit codes: 0 when every check passed, 1 when a mathematical check failed,
2 for malformed input or bounds that cannot be certified.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from importlib import resources
from typing import Any, List, Optional, Sequence

from . import corpus
from .homol import (
    BoundsError,
    ResolutionError,
    check_cor_1_3,
    euler_form,
    ext1_against_algebra,
    ext1_dim,
    is_projective_structural,
    minimal_resolution,
    prop16_forced_coset,
    standard_resolution,
)
from .linalg import Field, field_from_spec
from .ordinals import LadderError, OrdinalT
from .quiver import QuiverError, closure, decorated_ainfinity, is_acyclic
from .rep import RepresentationError, extend_T, hom_space_dim, restrict, top_dims
from .textio import ParseError, Scenario, parse_quiver, parse_rep, parse_scenario, serialize_quiver, serialize_rep
from .trlifaj import (
    AInfFlavor,
    CircularFlavor,
    ColoringError,
    MalformedPsi,
    TruncationError,
    TrlifajModel,
    Uniformizer,
)

INPUT_ERRORS = (
    ParseError,
    QuiverError,
    RepresentationError,
    BoundsError,
    LadderError,
    TruncationError,
    MalformedPsi,
    ColoringError,
    ResolutionError,
    OSError,
    ValueError,
)


class Report:
    """Ordered key/value facts plus named pass/fail checks."""

    def __init__(self, command: str):
        self.command = command
        self.facts: List[tuple] = []
        self.checks: List[tuple] = []
        self.tables: List[tuple] = []

    def fact(self, key: str, value: Any) -> None:
        self.facts.append((key, value))

    def check(self, name: str, ok: bool, detail: str = "") -> bool:
        self.checks.append((name, bool(ok), detail))
        return ok

    def table(self, name: str, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
        self.tables.append((name, list(header), [list(r) for r in rows]))

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def render(self, fmt: str) -> str:
        if fmt == "json":
            doc = {
                "command": self.command,
                "facts": {k: _jsonable(v) for k, v in self.facts},
                "checks": [{"name": n, "ok": ok, "detail": d} for n, ok, d in self.checks],
                "tables": {n: {"header": h, "rows": [[_jsonable(c) for c in r] for r in rows]} for n, h, rows in self.tables},
                "result": "pass" if self.ok else "fail",
            }
            return json.dumps(doc, indent=2, sort_keys=True) + "\n"
        out = [f"command: {self.command}"]
        out += [f"{k}: {_text(v)}" for k, v in self.facts]
        for name, header, rows in self.tables:
            out.append(f"table {name}:")
            out.append("  " + " | ".join(header))
            out += ["  " + " | ".join(_text(c) for c in r) for r in rows]
        for name, ok, detail in self.checks:
            out.append(f"check {name}: {'pass' if ok else 'FAIL'}" + (f" ({detail})" if detail else ""))
        out.append(f"result: {'pass' if self.ok else 'fail'}")
        return "\n".join(out) + "\n"


def _text(v: Any) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_text(x)}" for k, x in v.items()) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_text(x) for x in v) + "]"
    return str(v)


def _jsonable(v: Any) -> Any:
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return str(v)


# -- input helpers


def _read(path: str) -> str:
    """File contents; ``@name`` reads a bundled data file."""
    if path.startswith("@"):
        return resources.files("quiverhom").joinpath("data", path[1:]).read_text(encoding="utf-8")
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _field(args) -> Field:
    spec = args.field or os.environ.get("QUIVERHOM_FIELD") or "q"
    return field_from_spec(spec)


def _load(args, quiver_path: str, rep_paths: Sequence[str]):
    fld = _field(args)
    q = parse_quiver(_read(quiver_path))
    reps = []
    for p in rep_paths:
        try:
            reps.append(parse_rep(_read(p), q, fld))
        except ParseError as exc:
            raise ParseError(f"{p}: {exc}") from None
    return q, fld, reps


def _seed_vertices(q, tokens: Sequence[str]):
    return [q.vertex_from_str(t) for t in tokens]


# -- subcommands


def cmd_ext1(args) -> Report:
    q, fld, reps = _load(args, args.quiver, [args.rep] + ([args.against] if args.against else []))
    x = reps[0]
    r = Report("ext1")
    r.fact("field", fld)
    pres = minimal_resolution(x) if args.minimal else standard_resolution(x)
    r.fact("resolution", "minimal" if args.minimal else "standard")
    r.fact("p0", pres.p0_multiplicities())
    r.fact("p1", pres.p1_multiplicities())
    report = pres.check()
    r.check("resolution_exact", report["exact"], f"{report['vertices']} vertices, failures {report['failures']}")
    if args.against:
        y = reps[1]
        value = ext1_dim(x, y, pres)
        r.fact("target", "representation")
    else:
        value = ext1_against_algebra(x, pres)
        r.fact("target", "KQ")
    r.fact("ext1", value)
    return r


def cmd_is_projective(args) -> Report:
    q, fld, (x,) = _load(args, args.quiver, [args.rep])
    r = Report("is-projective")
    r.fact("field", fld)
    r.fact("dims", x.dim_vector())
    r.fact("tops", top_dims(x))
    r.fact("projective", is_projective_structural(x))
    return r


def _cor13_rows(reps) -> List[List[Any]]:
    rows = []
    for ident, x in reps:
        v = check_cor_1_3(x)
        rows.append([ident, v.ext1_value, v.ext_vanishes, v.structural, v.agree])
    return rows


def cmd_check_cor13(args) -> Report:
    r = Report("check-cor13")
    if args.corpus:
        fs = next((k for k, f in corpus.FIELDS.items() if f == _field(args)), None)
        if fs is None:
            raise ValueError(f"the bundled corpus exists over {', '.join(sorted(corpus.FIELDS))} only")
        items = [(i.ident, i.rep) for i in corpus.corpus_instances(args.corpus, fs, args.random)]
        r.fact("corpus", args.corpus)
    else:
        if not args.quiver or not args.reps:
            raise ValueError("check-cor13 needs a quiver file and representation files, or --corpus")
        q, fld, reps = _load(args, args.quiver, args.reps)
        items = list(zip(args.reps, reps))
    r.fact("field", _field(args))
    rows = _cor13_rows(items)
    r.fact("instances", len(rows))
    counts = {(e, s): 0 for e in (True, False) for s in (True, False)}
    for row in rows:
        counts[(row[2], row[3])] += 1
    r.table(
        "equivalence",
        ["ext1_vanishes", "projective", "count"],
        [[e, s, counts[(e, s)]] for e in (True, False) for s in (True, False)],
    )
    if args.verbose:
        r.table("instances", ["id", "ext1", "ext1_vanishes", "projective", "agree"], rows)
    bad = [row[0] for row in rows if not row[4]]
    r.check("cor13_equivalence", not bad, f"disagreements: {', '.join(bad)}" if bad else f"{len(rows)} instances")
    return r


def cmd_closure(args) -> Report:
    q = parse_quiver(_read(args.quiver))
    seed = _seed_vertices(q, args.seed)
    c = closure(q, seed)
    r = Report("closure")
    r.fact("seed", seed)
    r.fact("vertices", list(c.vertices()))
    r.fact("arrows", [a.name for a in c.arrows()])
    r.fact("acyclic", is_acyclic(c))
    r.fact("quiver", serialize_quiver(c).strip().replace("\n", "; "))
    return r


def cmd_restrict(args) -> Report:
    q, fld, (x,) = _load(args, args.quiver, [args.rep])
    p = closure(q, _seed_vertices(q, args.seed))
    z = restrict(x, p)
    r = Report("restrict")
    r.fact("field", fld)
    r.fact("subquiver", list(p.vertices()))
    r.fact("restricted", serialize_rep(z).strip().replace("\n", "; "))
    r.check("restrict_extend_identity", restrict(extend_T(z, q), p) == z)
    e = ext1_against_algebra(x)
    r.fact("ext1_kq", e)
    if e == 0:
        ez = ext1_against_algebra(z)
        r.fact("ext1_kp_restricted", ez)
        r.check("ext_vanishing_restricts", ez == 0, f"ext1 against KP = {ez}")
    return r


def cmd_euler(args) -> Report:
    q, fld, (x, y) = _load(args, args.quiver, [args.rep, args.other])
    h = hom_space_dim(x, y)
    e = ext1_dim(x, y)
    form = euler_form(x.dims, y.dims, q)
    r = Report("euler")
    r.fact("field", fld)
    r.fact("hom", h)
    r.fact("ext1", e)
    r.fact("euler_form", form)
    r.check("hom_minus_ext_equals_form", h - e == form, f"{h} - {e} vs {form}")
    return r


def cmd_prop16(args) -> Report:
    fld = _field(args)
    r = Report("prop16")
    r.fact("field", fld)
    rows = []
    for n in range(args.min_n, args.max_n + 1):
        rep = prop16_forced_coset(n, field=fld)
        rows.append([
            n, rep.compat_checked, len(rep.compat_failures), rep.kernel_checked,
            len(rep.kernel_failures), rep.telescope_ok, rep.min_member_length, rep.intersection_empty,
        ])
        r.check(f"n={n}", rep.ok)
    r.table(
        "spine",
        ["n", "compat_checked", "compat_failed", "kernel_checked", "kernel_failed", "telescope", "min_member_length", "coset_intersection_empty"],
        rows,
    )
    return r


def model_from_scenario(sc: Scenario, fld: Field) -> TrlifajModel:
    if sc.flavor == "circular":
        flavor = CircularFlavor(sc.circular_size - 1)
    elif sc.flavor == "decorated-ainfinity":
        flavor = AInfFlavor(decorated_ainfinity(), label="decorated-ainfinity")
    else:
        flavor = AInfFlavor()
    return TrlifajModel(flavor, sc.build_ladder(), fld)


def _scenario_phi(model: TrlifajModel, sc: Scenario, window):
    if sc.phi == "witness":
        return model.witness_phi(window)
    if sc.phi == "zero":
        return model.zero_phi(window)
    return model.random_phi(window, random.Random(sc.phi_seed))


def _support_laws(model: TrlifajModel, col) -> List[str]:
    bad = []
    for (a, n), d in sorted(col.values.items()):
        t = col.targets[(a, n)]
        if d.act_idempotent(t) != d:
            bad.append(f"({a},{n}): d.e_{t} != d")
        for m in {p.target for p in d.support()} - {t}:
            if d.act_idempotent(m):
                bad.append(f"({a},{n}): d.e_{m} != 0")
    return bad


def cmd_verify_phi(args) -> Report:
    sc = parse_scenario(_read(args.scenario))
    fld = _field(args)
    model = model_from_scenario(sc, fld)
    window = model.ladder.limits()
    r = Report("trlifaj-verify-phi")
    r.fact("flavor", model.flavor.spec())
    r.fact("kmax", sc.kmax)
    r.fact("depth", sc.depth)
    r.fact("phi", sc.phi if sc.phi != "random" else f"random {sc.phi_seed}")
    basis = model.i_span_basis(window, sc.depth - 1, args.path_len)
    rank = model.span_rank([g for _, g in basis])
    r.fact("generator_products", len(basis))
    r.fact("rank", rank)
    r.check("generators_independent", rank == len(basis), f"rank {rank} of {len(basis)}")
    r.check("phi_extension_consistent", rank == len(basis), "phi(g p) := phi(g) p on an independent family")
    phi = _scenario_phi(model, sc, window)
    col = model.extract_coloring(phi)
    bad = _support_laws(model, col)
    r.check("coloring_support_laws", not bad, "; ".join(bad[:5]) if bad else f"{len(col.values)} values")
    if sc.phi == "witness" and args.samples:
        rng = random.Random(f"telescope:{sc.phi_seed}")
        fails = []
        total = 0
        for alpha in window:
            for n in range(sc.depth):
                for _ in range(args.samples):
                    rep = model.claim22_telescope(model.random_psi(alpha, n, rng), alpha, n)
                    total += 1
                    if not rep.ok:
                        fails.append(f"{alpha},{n}")
        r.fact("telescope_samples", total)
        r.check("telescope_forces_growth", not fails, ", ".join(fails[:5]))
    return r


def cmd_uniformize(args) -> Report:
    sc = parse_scenario(_read(args.scenario))
    fld = _field(args)
    model = model_from_scenario(sc, fld)
    window = model.ladder.limits()
    phi = _scenario_phi(model, sc, window)
    col = model.extract_coloring(phi)
    rng = random.Random(f"uniformizer:{sc.phi_seed}")
    unif = model.uniformizer_from(col, sc.threshold_map(), rng, resolve_conflicts=True)
    r = Report("trlifaj-uniformize")
    r.fact("flavor", model.flavor.spec())
    r.fact("thresholds", {str(a): n for a, n in sorted(unif.thresholds.items())})
    if sc.uniformizer == "broken":
        k, n = sc.broken_at
        alpha = OrdinalT(k, 0)
        z = model.ladder.zeta(alpha, n)
        vals = dict(unif.values)
        vals[z] = unif.f(z) + model.kq({model.quiver.e(model.flavor.gen_vertex(n)): 1})
        unif = Uniformizer(vals, unif.thresholds, unif.zero)
        r.fact("broken_point", f"zeta^{alpha}_{n} = {z}")
    agree = all(
        unif.f(model.ladder.zeta(a, n)) == d
        for (a, n), d in col.values.items()
        if n >= unif.thresholds.get(a, 0)
    )
    r.fact("uniformizer_agrees_beyond_thresholds", agree)
    rec = model.reconstruct_psi(phi, unif, args.check_len)
    r.fact("generator_products_checked", rec.checked)
    if rec.ok:
        r.check("psi_restricts_to_phi", True, f"{rec.checked} generator products")
    else:
        a, n = rec.first_failure
        r.fact("first_violated_generator", f"g_{{{a},{n}}}")
        r.check("psi_restricts_to_phi", False, f"first violated generator g_{{{a},{n}}}: {rec.detail}")
    return r


def cmd_corpus_run(args) -> Optional[Report]:
    text, ok = corpus.corpus_report(args.quivers or None, args.fields or None, args.random, args.euler_pairs)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return ok


# -- argument parsing


def _normalize_field(argv: Sequence[str]) -> List[str]:
    """Fold ``--field fp <p>`` into ``--field fp:<p>`` so argparse sees one token."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] == "--field" and argv[i + 1:i + 2] == ["fp"] and i + 2 < len(argv):
            out += ["--field", f"fp:{argv[i + 2]}"]
            i += 3
        else:
            out.append(argv[i])
            i += 1
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="q (default) or 'fp <p>'; falls back to $QUIVERHOM_FIELD")
    common.add_argument("--format", choices=["text", "json"], default="text")

    ap = argparse.ArgumentParser(prog="quiverhom", description="Exact quiver representation checks.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ext1", parents=[common], help="dim Ext^1(X, Y) or dim Ext^1(X, KQ)")
    p.add_argument("quiver")
    p.add_argument("rep")
    p.add_argument("--against", help="second representation (default: the algebra)")
    p.add_argument("--minimal", action="store_true", help="use and verify the minimal resolution")
    p.set_defaults(run=cmd_ext1)

    p = sub.add_parser("is-projective", parents=[common], help="structural projectivity test")
    p.add_argument("quiver")
    p.add_argument("rep")
    p.set_defaults(run=cmd_is_projective)

    p = sub.add_parser("check-cor13", parents=[common], help="Ext-vanishing versus structural projectivity")
    p.add_argument("quiver", nargs="?")
    p.add_argument("reps", nargs="*")
    p.add_argument("--corpus", choices=sorted(corpus.CORPUS_QUIVERS), help="use the bundled generator for this quiver")
    p.add_argument("--random", type=int, default=500, help="random instances in the corpus")
    p.add_argument("--verbose", action="store_true", help="list every instance")
    p.set_defaults(run=cmd_check_cor13)

    p = sub.add_parser("closure", parents=[common], help="closure of a vertex set")
    p.add_argument("quiver")
    p.add_argument("--seed", nargs="+", required=True)
    p.set_defaults(run=cmd_closure)

    p = sub.add_parser("restrict", parents=[common], help="restrict to the closure of a seed")
    p.add_argument("quiver")
    p.add_argument("rep")
    p.add_argument("--seed", nargs="+", required=True)
    p.set_defaults(run=cmd_restrict)

    p = sub.add_parser("euler", parents=[common], help="hom - ext1 against the Euler form")
    p.add_argument("quiver")
    p.add_argument("rep")
    p.add_argument("other")
    p.set_defaults(run=cmd_euler)

    p = sub.add_parser("prop16", parents=[common], help="forced cosets on the truncated A_infinity spine")
    p.add_argument("--max-n", type=int, default=25)
    p.add_argument("--min-n", type=int, default=0)
    p.set_defaults(run=cmd_prop16)

    p = sub.add_parser("trlifaj-verify-phi", parents=[common], help="generator independence, witness and coloring laws")
    p.add_argument("scenario")
    p.add_argument("--path-len", type=int, default=1)
    p.add_argument("--samples", type=int, default=2, help="random psi per (alpha, n) for the telescope")
    p.set_defaults(run=cmd_verify_phi)

    p = sub.add_parser("trlifaj-uniformize", parents=[common], help="rebuild psi from a uniformizer")
    p.add_argument("scenario")
    p.add_argument("--check-len", type=int, default=1)
    p.set_defaults(run=cmd_uniformize)

    p = sub.add_parser("corpus-run", parents=[common], help="full deterministic corpus report")
    p.add_argument("--quivers", nargs="+", choices=sorted(corpus.CORPUS_QUIVERS))
    p.add_argument("--fields", nargs="+", choices=sorted(corpus.FIELDS))
    p.add_argument("--random", type=int, default=500)
    p.add_argument("--euler-pairs", type=int, default=200)
    p.add_argument("--output")
    p.set_defaults(run=cmd_corpus_run)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = _normalize_field(list(sys.argv[1:] if argv is None else argv))
    args = build_parser().parse_args(argv)
    try:
        result = args.run(args)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if isinstance(result, bool):
        return 0 if result else 1
    sys.stdout.write(result.render(args.format))
    return 0 if result.ok else 1


if __name__ == "__main__":
    sys.exit(main())
