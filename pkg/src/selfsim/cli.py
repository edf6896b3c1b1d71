"""Command-line front end.

Exit codes: 0 success or affirmative answer, 1 well-formed negative answer,
2 input error, 3 resource limit.  Reports go to stdout, diagnostics to stderr.
"""

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from . import permutations as P
from .analysis import (
    lemma_rist_closure_check,
    make_report,
    predict_lr,
    random_nontrivial_elements,
    torsion_retract_witness,
    Assertion,
)
from .automaton import DEFAULT_MAX_LEVEL, DEFAULT_MAX_STATES, act, evaluate, is_identity, order_bounded
from .errors import (
    BadPoint,
    BadVertex,
    KneadingValidationFailed,
    MalformedWord,
    NoSuchOrbit,
    NotAMember,
    NotQuadratic,
    OrderMismatch,
    PortraitError,
    ResourceLimit,
    SpecError,
    UnknownGenerator,
)
from .groupspec import cycle_diagram, parse_spec, print_spec, validate
from .portrait import (
    build_img,
    critical_orbit_type,
    maximal_exceptional_set,
    orbifold,
    validate_portrait,
)
from .quotient import (
    abelianization_data,
    hdim_sequence,
    is_level_transitive,
    level_quotient,
    rigid_stabilizer,
)
from .words import letters

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3

INPUT_ERRORS = (
    OSError,
    SpecError,
    PortraitError,
    MalformedWord,
    UnknownGenerator,
    BadVertex,
    BadPoint,
    NotAMember,
    NoSuchOrbit,
    OrderMismatch,
    UnicodeDecodeError,
    json.JSONDecodeError,
    ValueError,
)


class CliError(Exception):
    def __init__(self, message, code=EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _read(path):
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _emit(obj):
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _emit_text(pairs):
    for k, v in pairs:
        if not isinstance(v, str):
            v = json.dumps(v)
        sys.stdout.write(f"{k}: {v}\n")


def _load_spec(path):
    data = _read(path)
    return data, parse_spec(data)


def _load_portrait(path):
    data = _read(path)
    return data, validate_portrait(json.loads(data.decode("utf-8")))


def _nu_value(w):
    return "inf" if w == math.inf else w


# -- subcommands -----------------------------------------------------------------

def cmd_validate(args):
    _, spec = _load_spec(args.path)
    report = validate(spec)
    _emit(report.to_dict())
    for msg in report.diagnostics:
        print(msg, file=sys.stderr)
    ok = report.is_automaton_group and report.is_kneading
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_img(args):
    _, portrait = _load_portrait(args.path)
    try:
        spec = build_img(portrait, check_depth=args.check_depth)
    except KneadingValidationFailed as exc:
        print(str(exc), file=sys.stderr)
        if exc.report is not None:
            print(json.dumps(exc.report.to_dict(), indent=2), file=sys.stderr)
        return EXIT_NEGATIVE
    text = print_spec(spec)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def orbifold_report(portrait):
    sig = orbifold(portrait)
    exc = maximal_exceptional_set(portrait)
    try:
        orbit_type = str(critical_orbit_type(portrait))
        lr = predict_lr(portrait)
        lr_value, notes = lr.prediction, lr.notes
    except NotQuadratic:
        orbit_type, lr_value, notes = None, None, None
    return {
        "nu": {q: _nu_value(w) for q, w in sig.nu.items()},
        "chi": str(sig.chi),
        "class": sig.cls,
        "exceptional": {
            "maximal": sorted(exc.maximal),
            "finite": sorted(exc.finite_part),
            "all": [sorted(s) for s in exc.all_exceptional],
        },
        "orbit_type": orbit_type,
        "lr": lr_value,
        "notes": notes,
    }


def cmd_orbifold(args):
    _, portrait = _load_portrait(args.path)
    result = orbifold_report(portrait)
    if args.format == "text":
        _emit_text((k, result[k]) for k in ("chi", "class", "orbit_type", "lr"))
    else:
        _emit(result)
    return EXIT_OK


def _hdim_rows(spec, n, args):
    return hdim_sequence(spec, n, max_level=args.max_level, threads=args.threads)


def _write_hdim(rows, fmt):
    if fmt == "json":
        _emit([
            {"n": r.n, "order": r.order, "exact": str(r.value) if r.exact else None, "decimal": r.decimal}
            for r in rows
        ])
        return
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "exact", "decimal"])
    for r in rows:
        writer.writerow([r.n, str(r.value) if r.exact else "", r.decimal])
    sys.stdout.write(buf.getvalue())


def cmd_quotient(args):
    _, spec = _load_spec(args.path)
    n = args.level
    if n > args.max_level:
        raise ResourceLimit(f"level {n} exceeds the limit {args.max_level}")
    if args.hdim:
        _write_hdim(_hdim_rows(spec, n, args), "json" if args.format == "json" and args.explicit_format else "csv")
        return EXIT_OK
    wanted = args.order or args.transitive or args.abelianization or args.rist
    q = level_quotient(spec, n, args.max_level, args.max_states)
    out = {"level": n}
    code = EXIT_OK
    if args.order or not wanted:
        out["order"] = q.order()
    if args.transitive:
        out["transitive"] = is_level_transitive(spec, n, args.max_level)
        if not out["transitive"]:
            code = EXIT_NEGATIVE
    if args.abelianization:
        size, gen_orders = abelianization_data(q)
        out["abelianization"] = {"order": size, "generator_orders": dict(zip(q.names, gen_orders))}
    if args.rist:
        verts = [tuple(int(ch) for ch in v) if v.isdigit() else v for v in args.rist]

        def one(v):
            return rigid_stabilizer(q, v).order()

        if args.threads > 1:
            with ThreadPoolExecutor(args.threads) as pool:
                orders = list(pool.map(one, verts))
        else:
            orders = [one(v) for v in verts]
        out["rist"] = {v: o for v, o in zip(args.rist, orders)}
    if args.format == "text":
        _emit_text((k, v) for k, v in out.items() if k != "level")
    else:
        _emit(out)
    return code


def cmd_hdim(args):
    args.hdim = True
    return cmd_quotient(args)


def cmd_word(args):
    _, spec = _load_spec(args.path)
    g = evaluate(spec, args.expr, args.max_states)
    out = {"expr": args.expr}
    code = EXIT_OK
    if args.is_identity or not (args.order_bound or args.act is not None):
        out["is_identity"] = is_identity(g)
        if not out["is_identity"]:
            code = EXIT_NEGATIVE
    if args.order_bound:
        res = order_bounded(g, args.order_level, args.order_bound, args.max_states)
        if hasattr(res, "order"):
            out["order"] = {"finite": res.order}
        else:
            out["order"] = {"at_least": res.bound}
    if args.act is not None:
        perm = act(g, args.act, max_level=args.max_level)
        out["action"] = P.format_cycles(perm, lambda i: _point_label(i, spec.d, args.act))
    if args.format == "text":
        _emit_text((k, v) for k, v in out.items() if k != "expr")
    else:
        _emit(out)
    return code


def _point_label(idx, d, n):
    out = []
    for _ in range(n):
        idx, x = divmod(idx, d)
        out.append(str(x))
    return "".join(reversed(out))


def cmd_check(args):
    data, spec = _load_spec(args.path)
    n = args.level
    q = level_quotient(spec, n, args.max_level, args.max_states)
    if args.lemma == "rist-closure":
        if args.expr:
            elems = [q.image(args.expr)]
        else:
            elems = random_nontrivial_elements(q, args.samples, seed=args.seed)
        results = [lemma_rist_closure_check(q, x) for x in elems]
        assertions = [
            Assertion(f"instance_{i}", r.passed, json.dumps(r.witness) if r.witness else "")
            for i, r in enumerate(results)
        ]
        payload = {
            "lemma": "rist-closure",
            "level": n,
            "seed": args.seed,
            "instances": len(results),
            "results": [r.to_dict() for r in results],
        }
    else:
        names = q.named_gens
        if args.expr:
            g = q.image(args.expr)
            label = args.expr
        else:
            label = next((k for k, v in names.items() if P.order(v) == args.p), None)
            if label is None:
                raise CliError(f"no generator of order {args.p} at level {n}; pass --expr")
            g = names[label]
        witness = torsion_retract_witness(q, g, args.p)
        assertions = witness.assertions
        payload = {"lemma": "torsion-witness", "level": n, "element": label, **witness.to_dict()}
        payload.pop("assertions")
    report = make_report("selfsim check", data, "witness", payload, assertions)
    _emit(report)
    return EXIT_OK if all(a.passed for a in assertions) else EXIT_NEGATIVE


def _dot_id(s):
    return '"' + s.replace('"', '\\"') + '"'


def automaton_dot(spec):
    """Graphviz source of the generator automaton; nodes and edges appear in
    generator order."""
    lines = ["digraph automaton {", "  rankdir=LR;"]
    states = list(spec.names)
    edges = []
    for g in spec.generators:
        for x, w in enumerate(g.sections):
            target = "*".join(f"{n}^{e}" if e != 1 else n for n, e in letters(w)) or "1"
            if target not in states:
                states.append(target)
            edges.append((g.name, target, f"{x}|{g.perm[x]}"))
    for s in states:
        shape = "doublecircle" if s == "1" else "circle"
        lines.append(f"  {_dot_id(s)} [shape={shape}];")
    if "1" in states:
        for x in range(spec.d):
            edges.append(("1", "1", f"{x}|{x}"))
    for a, b, lab in edges:
        lines.append(f"  {_dot_id(a)} -> {_dot_id(b)} [label={_dot_id(lab)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def diagram_dot(spec):
    """Cycle diagram as a bipartite graph: letters and one node per face."""
    diag = cycle_diagram(spec)
    lines = ["graph cycle_diagram {"]
    for x in range(diag.d):
        lines.append(f"  {_dot_id(str(x))} [shape=circle];")
    for i, (name, cyc) in enumerate(diag.faces):
        face = f"f{i}"
        label = f"{name} ({' '.join(map(str, cyc))})"
        lines.append(f"  {_dot_id(face)} [shape=box,label={_dot_id(label)}];")
        for x in cyc:
            lines.append(f"  {_dot_id(face)} -- {_dot_id(str(x))};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_dot(args):
    _, spec = _load_spec(args.path)
    sys.stdout.write(diagram_dot(spec) if args.diagram else automaton_dot(spec))
    return EXIT_OK


# -- argument parsing ----------------------------------------------------------------

def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _seed(text):
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _add_globals(p, defaults):
    kw = (lambda v: {"default": v}) if defaults else (lambda v: {"default": argparse.SUPPRESS})
    p.add_argument("--threads", type=_positive, help="worker threads for independent levels", **kw(1))
    p.add_argument("--seed", type=_seed, help="seed for element sampling", **kw(0))
    p.add_argument("--format", choices=("json", "csv", "text"), **kw("json"))
    p.add_argument("--max-states", type=_positive, **kw(DEFAULT_MAX_STATES))
    p.add_argument("--max-level", type=_positive, **kw(DEFAULT_MAX_LEVEL))


def build_parser():
    parser = argparse.ArgumentParser(prog="selfsim", description="Self-similar group computations.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_globals(parser, True)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        _add_globals(p, False)
        p.set_defaults(func=func)
        return p

    p = add("validate", cmd_validate, "check automaton and kneading conditions of a .grp file")
    p.add_argument("path")

    p = add("img", cmd_img, "build the IMG recursion of a portrait")
    p.add_argument("path")
    p.add_argument("-o", "--output")
    p.add_argument("--check-depth", type=_positive, default=8)

    p = add("orbifold", cmd_orbifold, "orbifold signature, exceptional set and LR prediction")
    p.add_argument("path")

    for name, func in (("quotient", cmd_quotient), ("hdim", cmd_hdim)):
        p = add(name, func, "level quotient data" if name == "quotient" else "Hausdorff estimates (quotient --hdim)")
        p.add_argument("path")
        p.add_argument("--level", type=int, required=True)
        if name == "quotient":
            p.add_argument("--order", action="store_true")
            p.add_argument("--transitive", action="store_true")
            p.add_argument("--abelianization", action="store_true")
            p.add_argument("--rist", action="append", metavar="VERTEX")
            p.add_argument("--hdim", action="store_true")
        else:
            p.set_defaults(order=False, transitive=False, abelianization=False, rist=None)

    p = add("word", cmd_word, "evaluate a word over the generators")
    p.add_argument("path")
    p.add_argument("--expr", required=True)
    p.add_argument("--is-identity", action="store_true")
    p.add_argument("--order-bound", type=_positive, metavar="MAX_ORDER")
    p.add_argument("--order-level", type=_positive, default=8)
    p.add_argument("--act", type=int, metavar="LEVEL")

    p = add("check", cmd_check, "run a lemma harness inside a level quotient")
    p.add_argument("path")
    p.add_argument("--lemma", choices=("rist-closure", "torsion-witness"), required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--samples", type=_positive, default=50)
    p.add_argument("--expr")
    p.add_argument("--p", type=int, default=2)

    p = add("dot", cmd_dot, "Graphviz export")
    p.add_argument("path")
    p.add_argument("--diagram", action="store_true", help="cycle diagram instead of the automaton")
    return parser


def main(argv=None):
    parser = build_parser()
    raw = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(raw)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    args.explicit_format = any(a == "--format" or a.startswith("--format=") for a in raw)
    try:
        return args.func(args)
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
