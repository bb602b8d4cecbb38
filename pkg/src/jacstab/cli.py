"""Command-line front end.

Exit status: 0 success, 1 when ``check --expect`` finds the predicate false,
2 for bad input, 3 when an internal invariant breaks.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import io
from .enumeration import PREDICATES, enumerate_classes, spanning_tree_count
from .errors import InvariantBreach, JacstabError
from .jordan_holder import build_quasistable, gr, jh_filtration
from .reduction import class_id, reduce, semistable_reduce, sigma_reduce
from .samples import polarization_for, random_graph, random_sheaf
from .sheaf import CombSheaf
from .stability import check_all, is_semistable, seshadri_convert


class InputError(JacstabError):
    pass


def _load(path: str, what: str):
    p = Path(path)
    if not p.exists():
        raise InputError(f"{what} file {path} does not exist")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{what} file {path} is not valid JSON: {exc}") from None


def _graph(args):
    return io.graph_from_json(_load(args.graph, "graph"))


def _table(rows: list[list], header: list[str]) -> str:
    cells = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _fmt_set(s) -> str:
    return "{" + ",".join(sorted(map(str, s))) + "}"


def _fmt_sheaf(c: CombSheaf) -> str:
    nf = ",".join(f"{e.u}-{e.v}#{e.k}" for e in (c.graph.edges[n] for n in sorted(c.nonfree_idx)))
    md = " ".join(f"{v}:{d}" for v, d in c.multidegree.items())
    return f"S=[{nf}] d=({md})"


# -- commands -------------------------------------------------------------------


def cmd_check(args):
    g = _graph(args)
    sheaf = io.sheaf_from_json(_load(args.sheaf, "sheaf"), g)
    pol = io.polarization_from_json(_load(args.pol, "polarization"))
    reports = check_all(sheaf, pol, args.w)
    if args.format == "json":
        out = {k: io.report_to_json(r) for k, r in reports.items()}
        out["simple"] = sheaf.is_simple()
        text = io.dumps(out)
    else:
        rows = []
        for name, r in reports.items():
            low = "-" if r.minimum is None else f"{_fmt_set(r.minimum[0])} beta={r.minimum[1]}"
            rows.append([name, str(r.verdict).lower(), low])
        rows.append(["simple", str(sheaf.is_simple()).lower(), ""])
        text = _table(rows, ["predicate", "verdict", "minimum"])
    status = 0
    if args.expect:
        match = [r for k, r in reports.items() if k == args.expect or r.predicate == args.expect]
        if not match:
            raise InputError(f"--expect names unknown predicate {args.expect!r}")
        status = 0 if match[0].verdict else 1
    return text, status


def cmd_jh(args):
    g = _graph(args)
    sheaf = io.sheaf_from_json(_load(args.sheaf, "sheaf"), g)
    pol = io.polarization_from_json(_load(args.pol, "polarization"))
    f = jh_filtration(sheaf, pol, args.choice)
    cls = gr(sheaf, pol)
    if args.format == "json":
        return io.dumps({"filtration": io.filtration_to_json(f), "gr": io.jhclass_to_json(cls)}), 0
    rows = [[k, _fmt_set(s.ambient), _fmt_set(s.quotient_support), _fmt_sheaf(s.piece), s.piece.euler_char()]
            for k, s in enumerate(f.steps)]
    return _table(rows, ["step", "Z", "Y", "piece", "chi"]), 0


def cmd_construct(args):
    g = _graph(args)
    pol = io.polarization_from_json(_load(args.pol, "polarization"))
    doc = _load(args.parts, "parts")
    if not isinstance(doc, list):
        raise InputError("parts document must be a JSON array of sheaf objects")
    parts = [io.sheaf_from_json(p, g) for p in doc]
    out = build_quasistable(parts, args.w, pol)
    if gr(out, pol) != type(gr(out, pol))(parts):
        raise InvariantBreach("constructed sheaf has the wrong graded class")
    if args.format == "json":
        return io.dumps(io.sheaf_to_json(out)), 0
    return f"{_fmt_sheaf(out)}  chi={out.euler_char()}", 0


def _mark(value: str | None) -> str | None:
    if value is None:
        return None
    return value.split("=", 1)[1] if value.startswith("mark=") else value


def cmd_reduce(args):
    g = _graph(args)
    sheaf = io.sheaf_from_json(_load(args.sheaf, "sheaf"), g)
    pol = io.polarization_from_json(_load(args.pol, "polarization"))
    trace = reduce(sheaf, pol, _mark(args.sigma), args.cap)
    if args.format == "json":
        return io.dumps(io.trace_to_json(trace)), 0
    rows = [[k, s.phase, _fmt_set(s.fired), s.beta_min] for k, s in enumerate(trace.steps)]
    text = _table(rows, ["step", "phase", "fired", "beta_min"])
    return f"{text}\nstart: {_fmt_sheaf(trace.start)}\nfinal: {_fmt_sheaf(trace.final)}", 0


def cmd_enumerate(args):
    g = _graph(args)
    pol = io.polarization_from_json(_load(args.pol, "polarization"))
    chi = pol.target if args.chi is None else args.chi
    res = enumerate_classes(
        g, pol, chi, args.pred, w=args.w, mark=_mark(args.mark),
        invertible_only=args.invertible_only, jobs=args.jobs,
    )
    if args.format == "json":
        return io.dumps([io.sheaf_to_json(c) for c in res.classes]), 0
    rows = []
    for c in res.classes:
        r = is_semistable(c, pol)
        low = "-" if r.minimum is None else f"{_fmt_set(r.minimum[0])} {r.minimum[1]}"
        rows.append([args.pred, len(c.nonfree_idx), _fmt_sheaf(c), low])
    strata = ", ".join(f"|S|={k}: {v}" for k, v in res.counts_by_stratum.items())
    return f"{_table(rows, ['predicate', '|S|', 'class', 'beta-min'])}\ntotal {len(res)} ({strata})", 0


def cmd_count(args):
    g = _graph(args)
    pol = io.polarization_from_json(_load(args.pol, "polarization"))
    chi = pol.target if args.chi is None else args.chi
    counts = {}
    for pred in ("semistable", "stable", "quasistable", "simple-semistable"):
        res = enumerate_classes(g, pol, chi, pred)
        counts[pred] = {"total": len(res), "invertible": len(res.invertible),
                        "by_stratum": {str(k): v for k, v in res.counts_by_stratum.items()}}
        if pred == "semistable":
            counts["jh_classes"] = res.jh_class_count
    if args.format == "json":
        return io.dumps(counts), 0
    rows = [[k, v["total"], v["invertible"]] for k, v in counts.items() if isinstance(v, dict)]
    return _table(rows, ["predicate", "total", "invertible"]) + f"\njh classes: {counts['jh_classes']}", 0


def cmd_convert(args):
    a, chi = io.seshadri_from_json(_load(args.seshadri, "seshadri"))
    pol = seshadri_convert(a, chi)
    if args.format == "json":
        return io.dumps(io.polarization_to_json(pol)), 0
    rows = [[v, e, io.rational(q)] for (v, e), q in zip(pol.weights.items(), pol.slopes.values())]
    return f"rank {pol.rank}\n" + _table(rows, ["vertex", "weight", "slope"]), 0


def cmd_oracle(args):
    g = _graph(args)
    cut = g.min_cut()
    out = {"min_cut": "inf" if cut == float("inf") else cut, "spanning_trees": spanning_tree_count(g),
           "arithmetic_genus": g.arithmetic_genus}
    if args.format == "json":
        return io.dumps(out), 0
    return "\n".join(f"{k}: {v}" for k, v in out.items()), 0


def cmd_selftest(args):
    """Randomized spot checks of the main invariants."""
    rng = random.Random(args.seed)
    failures = []
    for t in range(args.trials):
        g = random_graph(rng, 4, 6)
        s = random_sheaf(rng, g)
        for y in g.proper_masks():
            for z in g.proper_masks():
                lhs = s.restricted_euler(y | z) + (s.restricted_euler(y & z) if y & z else 0)
                if lhs > s.restricted_euler(y) + s.restricted_euler(z):
                    failures.append(f"trial {t}: submodularity at {y},{z}")
        if s.is_simple() == any(s.decomposes_at(y) for y in g.proper_masks()):
            failures.append(f"trial {t}: simplicity duality")
        inv = random_sheaf(rng, g, invertible=True)
        pol = polarization_for(rng, inv)
        semi = semistable_reduce(inv, pol).final
        if not is_semistable(semi, pol):
            failures.append(f"trial {t}: semistable reduction")
        if class_id(semi) != class_id(inv):
            failures.append(f"trial {t}: reduction left the twist class")
        marked = g.with_markings({"s": g.vertices[0]})
        fin = sigma_reduce(CombSheaf(marked, semi.degree_vector), pol, "s").final
        if class_id(fin) != class_id(inv):
            failures.append(f"trial {t}: sigma reduction left the twist class")
    text = "\n".join(failures) if failures else f"selftest: {args.trials} trials passed (seed {args.seed})"
    return text, 3 if failures else 0


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="jacstab", description=__doc__.splitlines()[0])
    p.add_argument("--format", choices=("table", "json"), default="table")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, *need, **kw):
        sp = sub.add_parser(name, help=kw.get("help"))
        sp.add_argument("--format", choices=("table", "json"), default=argparse.SUPPRESS)
        for n in need:
            sp.add_argument(f"--{n}", required=True)
        sp.set_defaults(func=func)
        return sp

    sp = add("check", cmd_check, "graph", "sheaf", "pol", help="all stability predicates for one sheaf")
    sp.add_argument("--w", help="component for W-quasistability (default: first vertex)")
    sp.add_argument("--expect", help="exit 1 unless this predicate holds")

    sp = add("jh", cmd_jh, "graph", "sheaf", "pol", help="Jordan-Hoelder filtration and graded class")
    sp.add_argument("--choice", choices=("first", "last"), default="first")

    add("construct", cmd_construct, "graph", "parts", "pol", "w", help="glue stable pieces into a W-quasistable sheaf")

    sp = add("reduce", cmd_reduce, "graph", "sheaf", "pol", help="semistable (and sigma) reduction by twists")
    sp.add_argument("--sigma", help="marking for the sigma-quasistable phase (NAME or mark=NAME)")
    sp.add_argument("--cap", type=int, help="iteration cap (default from the starting beta values)")

    sp = add("enumerate", cmd_enumerate, "graph", "pol", help="list classes satisfying a predicate")
    sp.add_argument("--pred", choices=PREDICATES, required=True)
    sp.add_argument("--chi", type=int)
    sp.add_argument("--w")
    sp.add_argument("--mark")
    sp.add_argument("--invertible-only", action="store_true")
    sp.add_argument("--jobs", type=int, default=1)

    sp = add("count", cmd_count, "graph", "pol", help="class counts per predicate and JH classes")
    sp.add_argument("--chi", type=int)

    add("convert", cmd_convert, "seshadri", help="Seshadri weights to a polarization")
    add("oracle", cmd_oracle, "graph", help="min cut and spanning tree count")

    sp = sub.add_parser("selftest", help="randomized invariant checks")
    sp.add_argument("--format", choices=("table", "json"), default=argparse.SUPPRESS)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=20)
    sp.set_defaults(func=cmd_selftest)
    return p


def run(argv: list[str] | None = None) -> tuple[int, str]:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, status = args.func(args)
    except InvariantBreach as exc:
        return 3, f"internal invariant broken: {exc}"
    except (JacstabError, KeyError) as exc:
        return 2, f"error: {exc}"
    return status, text


def main(argv: list[str] | None = None) -> int:
    status, text = run(argv)
    stream = sys.stdout if status in (0, 1) else sys.stderr
    print(text, file=stream)
    return status


if __name__ == "__main__":
    sys.exit(main())
