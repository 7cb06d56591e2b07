"""Command-line surface: one verb per module capability.

Exit codes: 0 success, 1 check/validation failure, 2 usage error.
"""

import argparse
import json
import sys
import time

from . import congruence as con
from . import dimension as dim
from . import geometry as geo
from . import lattice as lat
from .errors import DimwError, MismatchError


def _load(args):
    if args.builtin and args.file:
        print("error: --builtin and --file are mutually exclusive", file=sys.stderr)
        raise SystemExit(2)
    if args.builtin:
        return lat.builtin_spec(args.builtin)
    if args.file:
        return lat.load(args.file)
    print("error: one of --builtin or --file is required", file=sys.stderr)
    raise SystemExit(2)


def _emit(args, doc, human):
    if args.json:
        print(json.dumps(doc, sort_keys=True, default=str))
    else:
        print(human)


def cmd_validate(args):
    L = _load(args)
    doc = {"name": L.name, "elements": L.n, "covers": len(L.covers),
           "bottom": L.names[L.bottom], "top": L.names[L.top],
           "height": L.height()}
    _emit(args, doc, f"{L.name}: {L.n} elements, {len(L.covers)} covers, "
          f"height {L.height()}, bounds [{L.names[L.bottom]}, {L.names[L.top]}]")
    return 0


def cmd_props(args):
    L = _load(args)
    rep = lat.properties_report(L).as_dict()
    _emit(args, rep, "\n".join(f"{k}: {v}" for k, v in sorted(rep.items())))
    return 0


def cmd_con(args):
    L = _load(args)
    C = con.all_congruences(L)
    K = C.as_lattice()
    doc = {"congruences": len(C),
           "meet_irreducible": len(C.meet_irreducibles()),
           "join_irreducible": len(C.join_irreducibles()),
           "simple": len(C) == 2}
    _emit(args, doc,
          f"Con({L.name}): {len(C)} congruences "
          f"({len(C.meet_irreducibles())} meet-irreducible, "
          f"{len(C.join_irreducibles())} join-irreducible); "
          f"simple: {len(C) == 2}; congruence lattice height {K.height()}")
    return 0


def cmd_dim(args):
    L = _load(args)
    D = dim.dimension_monoid(L)
    doc = D.report_dict()
    lines = [f"dimension monoid of {L.name}: {len(D.qo.points)} generator classes, "
             f"{len(D.qo.p0)} idempotent"]
    for p, members in sorted(doc["classes"].items()):
        tag = " (idempotent)" if p in doc["p0"] else ""
        lines.append(f"  {p}{tag}: " + " ".join(members))
    rel = doc["qosystem"]["rel"]
    lines.append("  relation: " + (" ".join(f"{a}<{b}" for a, b in rel) or "(antichain)"))
    _emit(args, doc, "\n".join(lines))
    return 0


def cmd_eval(args):
    L = _load(args)
    D = dim.dimension_monoid(L)
    word = dim.DimensionWord.parse(args.word, L)
    value = D.delta_word(word)
    _emit(args, value.to_json_dict(), f"{args.word} = {value!r}")
    return 0


def cmd_compare(args):
    L = _load(args)
    if len(args.word) != 2:
        print("error: compare needs exactly two --word expressions", file=sys.stderr)
        return 2
    D = dim.dimension_monoid(L)
    w1 = dim.DimensionWord.parse(args.word[0], L)
    w2 = dim.DimensionWord.parse(args.word[1], L)
    verdict = dim.word_compare(D, w1, w2)
    _emit(args, {"verdict": verdict}, verdict)
    return 0


def cmd_geom(args):
    L = _load(args)
    t0 = time.perf_counter()
    report = {}
    normal, witness = geo.is_normal(L)
    report["is_normal"] = {"status": normal,
                           "witness": None if witness is None else
                           [L.names[witness[0]], L.names[witness[1]]]}
    sim = geo.perspectivity_matrix(L)
    report["index"] = {L.names[x]: geo.lattice_index(L, x, sim) for x in range(L.n)}
    level = 1
    while not geo.n_distributive(L, level, method="A") and level <= L.height():
        level += 1
    report["least_n_distributive"] = level
    report["elapsed_ms"] = round(1000 * (time.perf_counter() - t0), 2)
    _emit(args, report,
          "\n".join([f"normal: {normal}",
                     "index: " + " ".join(f"{k}={v}" for k, v in sorted(report['index'].items())),
                     f"least n with n-distributivity: {level}",
                     f"elapsed_ms: {report['elapsed_ms']}"]))
    return 0


def cmd_check(args):
    L = _load(args)
    failures = []
    results = {}

    def run(name, fn):
        t0 = time.perf_counter()
        try:
            fn()
            results[name] = {"status": "pass",
                             "elapsed_ms": round(1000 * (time.perf_counter() - t0), 2)}
        except MismatchError as e:
            failures.append(name)
            results[name] = {"status": "fail", "witness": str(e.witness),
                             "elapsed_ms": round(1000 * (time.perf_counter() - t0), 2)}

    D = dim.dimension_monoid(L)
    run("congruence_correspondence",
        lambda: dim.congruence_correspondence_check(L, D))
    run("dual_functor", lambda: dim.functor_checks(L))

    def axioms():
        for a in range(L.n):
            for b in range(L.n):
                if dim.delta(D, a, b) != dim.delta(D, L.mt(a, b), L.jn(a, b)):
                    raise MismatchError("extended delta broken", witness=(a, b))
                lhs = dim.delta(D, a, L.jn(a, b))
                rhs = dim.delta(D, L.mt(a, b), b)
                if lhs != rhs:
                    raise MismatchError("transposition axiom broken", witness=(a, b))
    run("axioms", axioms)
    if args.all:
        def dep():
            if not dim.dep_check(L, k=min(args.bound, 3)):
                raise MismatchError("subdirect map does not reflect order")

        if L.n <= 24:
            ok, witness = dim.is_v_modular(L, bound=args.bound, D=D)
            results["v_modular"] = {"status": "yes" if ok else "no",
                                    "witness": None if witness is None else
                                    [[L.names[u], L.names[v]] for u, v in witness]}
            run("dimension_extension", dep)
        props = lat.properties_report(L)
        if props.sectionally_complemented and props.modular:
            run("index_equality", lambda: geo.index_equality_check(L, D))
            run("relations_suite", lambda: geo.relations_suite(L, D))
            run("transitivity_cancellativity",
                lambda: geo.transitivity_cancellativity_check(L, D))
    _emit(args, results,
          "\n".join(f"{k}: {v['status']}" for k, v in sorted(results.items())))
    return 1 if failures else 0


def export_dot(L, D=None):
    """DOT digraph of the Hasse diagram; optional generator-class labels."""
    lines = [f'digraph "{L.name}" {{', "  rankdir=BT;"]
    for i in range(L.n):
        lines.append(f'  n{i} [label="{L.names[i]}"];')
    for a, b in L.covers:
        if D is not None:
            cls = D.qo.points[D.gen[(a, b)]]
            lines.append(f'  n{a} -> n{b} [label="{cls}"];')
        else:
            lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines)


def cmd_dot(args):
    L = _load(args)
    D = dim.dimension_monoid(L) if args.labels else None
    print(export_dot(L, D))
    return 0


CATALOG_INSTANCES = (
    "chain:2", "chain:3", "chain:4", "chain:8",
    "boolean:2", "boolean:3", "boolean:4", "boolean:5",
    "M3", "N5",
    "partition:2", "partition:3", "partition:4", "partition:5",
    "subspace:2,2", "subspace:2,3", "subspace:3,2",
    "coprod_c2_c1", "coprod_c3_c1",
)


def catalog_summary(spec):
    L = lat.builtin_spec(spec)
    D = dim.dimension_monoid(L)
    k, p0 = len(D.qo.points), len(D.qo.p0)
    if k == 1:
        headline = "2" if p0 else "Z+"
    elif D.qo.is_antichain() and not p0:
        headline = f"(Z+)^{k}"
    else:
        headline = f"{k} classes, {p0} idempotent"
    return {"builtin": spec, "elements": L.n, "classes": k,
            "idempotent_classes": p0, "headline": headline}


def cmd_catalog(args):
    rows = [catalog_summary(s) for s in CATALOG_INSTANCES]
    if args.json:
        print(json.dumps(rows, sort_keys=True))
    else:
        width = max(len(r["builtin"]) for r in rows)
        for r in rows:
            print(f"{r['builtin']:<{width}}  n={r['elements']:<5} -> {r['headline']}")
    return 0


def make_parser():
    ap = argparse.ArgumentParser(
        prog="dimw", description="finite-lattice dimension monoid workbench")
    sub = ap.add_subparsers(dest="verb", required=True)

    def common(p, word=False, words=False):
        p.add_argument("--builtin", help="catalog key, e.g. partition:4 or subspace:2,3")
        p.add_argument("--file", help="lattice JSON file")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--bound", type=int, default=4)
        if word:
            p.add_argument("--word", required=True, help="e.g. '0..a + 2*(a..1)'")
        if words:
            p.add_argument("--word", action="append", default=[],
                           help="pass twice, one per word")

    common(sub.add_parser("validate", help="load and validate a lattice"))
    common(sub.add_parser("props", help="structural predicate report"))
    common(sub.add_parser("con", help="congruence lattice summary"))
    common(sub.add_parser("dim", help="dimension monoid report"))
    common(sub.add_parser("eval", help="evaluate a dimension word"), word=True)
    common(sub.add_parser("compare", help="compare two dimension words"), words=True)
    common(sub.add_parser("geom", help="perspectivity suite"))
    pc = sub.add_parser("check", help="cross-validation checks")
    common(pc)
    pc.add_argument("--all", action="store_true", help="include the geometry checks")
    pd = sub.add_parser("dot", help="DOT export of the Hasse diagram")
    common(pd)
    pd.add_argument("--labels", action="store_true",
                    help="annotate covers with generator class ids")
    pcat = sub.add_parser("catalog", help="builtin table with headline results")
    pcat.add_argument("--json", action="store_true")
    return ap


HANDLERS = {
    "validate": cmd_validate, "props": cmd_props, "con": cmd_con,
    "dim": cmd_dim, "eval": cmd_eval, "compare": cmd_compare,
    "geom": cmd_geom, "check": cmd_check, "dot": cmd_dot, "catalog": cmd_catalog,
}


def run(argv):
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0,) else 0
    try:
        return HANDLERS[args.verb](args)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    except MismatchError as e:
        print(f"check failed: {e}", file=sys.stderr)
        return 1
    except (DimwError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
