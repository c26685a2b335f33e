"""Command-line front end.

Exit codes: 0 success / true verdict, 1 false verdict, 2 input error, 3 budget exhausted.
"""

import argparse
import json
import os
import sys
from fractions import Fraction

from . import core, cover, cycles, equivalence, paths, surgery, symbolic
from .errors import BudgetError, GeomTypeError, ParseError
from .layout import layout as make_layout


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_valid(path):
    g = core.parse(_read(path))
    rep = core.validate(g)
    if not rep.ok:
        raise InputError(f"{path}: not a geometric type\n{rep}")
    return g


class InputError(GeomTypeError):
    pass


def _num(x):
    """JSON rendering of an exact or floating number."""
    if isinstance(x, Fraction):
        return str(x)
    if hasattr(x, "to_json"):
        return x.to_json() if not x.is_rational() else str(x.as_fraction())
    return x


def _emit(args, data, text):
    if args.json:
        print(json.dumps(data, sort_keys=True))
    else:
        print(text)


# ---------------------------------------------------------------- commands

def cmd_validate(args):
    g = core.parse(_read(args.file))
    rep = core.validate(g)
    _emit(args, {"valid": rep.ok, "problems": list(rep.problems)}, str(rep))
    return 0 if rep.ok else 2


def cmd_canon(args):
    g = _load_valid(args.file)
    w = equivalence.canonical_witness(g)
    text = core.serialize(equivalence.apply_witness(g, w))
    _emit(args, {"canonical": text, "witness": w.to_json()}, text.rstrip("\n"))
    return 0


def cmd_equiv(args):
    g1, g2 = _load_valid(args.a), _load_valid(args.b)
    ok, w = equivalence.is_equivalent(g1, g2)
    eq, _ = equivalence.is_equal(g1, g2)
    data = {"equivalent": ok, "equal": eq, "witness": w.to_json() if w else None}
    text = "equivalent" if ok else "not equivalent"
    if w:
        text += f"\nsigma={list(w.sigma)} eps={list(w.eps)} eps_prime={list(w.eps_prime)}"
    _emit(args, data, text)
    return 0 if ok else 1


def cmd_class(args):
    g = _load_valid(args.file)
    members = [core.serialize(x) for x in equivalence.enumerate_class(g)]
    _emit(args, {"size": len(members), "members": members}, f"# {len(members)} members\n" + "\n".join(members).rstrip("\n"))
    return 0


def cmd_matrix(args):
    g = _load_valid(args.file)
    tm = symbolic.transition_matrix(g)
    lam = symbolic.spectral_radius(tm.M)
    data = {"M": [list(r) for r in tm.M], "Mu": [list(r) for r in tm.Mu], "lambda": lam}
    text = "M =\n" + "\n".join(" ".join(str(x) for x in r) for r in tm.M)
    text += "\nMu =\n" + "\n".join(" ".join(str(x) for x in r) for r in tm.Mu)
    text += f"\nlambda = {lam!r}"
    _emit(args, data, text)
    return 0


def cmd_entropy(args):
    g = _load_valid(args.file)
    lam = symbolic.spectral_radius(symbolic.transition_matrix(g).M)
    h = symbolic.entropy(g)
    _emit(args, {"lambda": lam, "entropy": h}, f"lambda = {lam!r}\nentropy = {h!r}")
    return 0


def cmd_orbits(args):
    g = _load_valid(args.file)
    if not 1 <= args.period <= 12:
        raise InputError("--period must lie in [1, 12]")
    count = symbolic.count_closed_words(g, args.period)
    data = {"period": args.period, "symbolic_closed_words": count}
    _emit(args, data, f"symbolic closed words of length {args.period}: {count}")
    return 0


def cmd_layout(args):
    g = _load_valid(args.file)
    lay = make_layout(g, args.mode)
    data = {
        "mode": lay.mode,
        "lambda": _num(lay.lam),
        "exact": lay.exact,
        "minpoly": [str(c) for c in lay.field.minpoly] if lay.field else None,
        "widths": [_num(x) for x in lay.widths],
        "heights": [_num(x) for x in lay.heights],
        "H": {str(r): [_num(a), _num(b)] for r, (a, b) in sorted(lay.hslots.items())},
        "V": {str(r): [_num(a), _num(b)] for r, (a, b) in sorted(lay.vslots.items())},
    }
    text = [f"mode = {lay.mode}", f"lambda = {float(lay.lam)!r}"]
    for i in range(g.n):
        text.append(f"rect {i + 1}: width {float(lay.widths[i])!r} height {float(lay.heights[i])!r}")
    _emit(args, data, "\n".join(text))
    return 0


def cmd_cover(args):
    g = _load_valid(args.file)
    patch, r = cover.origin(g, args.type)
    cover.explore(patch, r, args.depth)
    data = patch.to_json()
    text = f"{len(patch.rects)} rectangles, {len(patch.edges)} edges, {len(patch.guards)} guards"
    _emit(args, data, text)
    return 0


def cmd_arcpoints(args):
    g = _load_valid(args.file)
    patch, r = cover.origin(g, args.type)
    cover.explore(patch, r, args.depth)
    if not 0 <= args.rect < len(patch.rects):
        raise InputError(f"no rect {args.rect} in the explored patch ({len(patch.rects)} rects)")
    res = cover.crossing(patch, args.rect, args.side)
    aps = cover.arc_points(patch, args.rect, args.side)
    data = {
        "rect": args.rect,
        "side": args.side,
        "crossing": [{"rect": m.rect, "extent": [_num(m.extent[0]), _num(m.extent[1])]} for m in res.members],
        "periodic": [
            {"point": None if ray.point is None else [_num(c) for c in ray.point], "prefix": ray.prefix, "period": ray.period}
            for ray in res.rays
        ],
        "arc_points": [
            {"point": [_num(c) for c in ap.point], "incident": list(ap.incident), "corner_of_base": ap.corner_of_base,
             "degenerate": ap.degenerate}
            for ap in aps
        ],
    }
    lines = [f"{len(res.members)} crossing rectangles, {len(res.rays)} periodic rays"]
    for ap in aps:
        lines.append(f"arc point ({float(ap.point[0])!r}, {float(ap.point[1])!r}) incident {list(ap.incident)}")
    _emit(args, data, "\n".join(lines))
    return 0


def _load_path_file(path):
    doc = json.loads(_read(path))
    if "gt" in doc:
        text = doc["gt"]
    else:
        base = os.path.dirname(os.path.abspath(path)) if path != "-" else os.getcwd()
        text = _read(os.path.join(base, doc["type_file"]))
    g = core.parse(text)
    rep = core.validate(g)
    if not rep.ok:
        raise InputError(str(rep))
    patch, root = cover.origin(g, doc.get("origin", 1))
    steps = doc["path"]
    labels = [s[0] for s in steps]
    slots = [core.SubrectangleRef.parse(s[1]) for s in steps[:-1]]
    if steps[-1][1] is not None:
        raise InputError("the last step of a path carries no slot")
    rects = [root.id]
    cur = root
    for s in slots:
        cur = patch.extend(cur, s)
        rects.append(cur.id)
    mapping = {}
    for lab, rid in zip(labels, rects):
        if mapping.setdefault(lab, rid) != rid:
            raise InputError(f"label {lab} names two different rectangles")
    if len(set(mapping.values())) != len(mapping):
        raise InputError("two labels name the same rectangle")
    return patch, paths.PlanePath(tuple(rects), tuple(slots))


def cmd_reduce_path(args):
    patch, p = _load_path_file(args.file)
    if not p.closed:
        data = {"status": "not-closed"}
        _emit(args, data, "path is not closed")
        return 2
    res = paths.reduce(patch, p, depth=args.depth)
    moves = [["B", m[1]] if m[0] == "B" else ["C", m[1].describe()] for m in res.moves]
    data = {"status": res.status, "c_depth": res.depth, "moves": moves, "final": list(res.final.rects)}
    text = f"{res.status} ({len(res.moves)} moves, C-depth {res.depth})"
    _emit(args, data, text)
    return 0 if res.trivial else 1


def cmd_cycles_check(args):
    a = cycles.parse_gtc(_read(args.file))
    rep = core.validate(a.g)
    if not rep.ok:
        raise InputError(str(rep))
    out = []
    lines = []
    for q in sorted(a.A, key=str):
        r = cycles.check_cycle(a.g, q)
        out.append({"cycle": str(q), "closed": r.closed, "problems": list(r.problems), "runs": r.stats.runs,
                    "length": r.stats.length, "canonical": str(r.stats.canonical), "cycle_shaped": r.cycle_shaped})
        lines.append(f"{q}: closed={r.closed} runs={r.stats.runs} cycle_shaped={r.cycle_shaped}"
                     + "".join(f"\n  {p}" for p in r.problems))
    _emit(args, {"cycles": out}, "\n".join(lines) if lines else "no cycles")
    return 0 if all(o["closed"] and not o["problems"] for o in out) else 2


def cmd_cycles_equiv(args):
    a1 = cycles.parse_gtc(_read(args.a))
    a2 = cycles.parse_gtc(_read(args.b))
    for a in (a1, a2):
        probs = core.validate(a.g).problems + tuple(a.problems())
        if probs:
            raise InputError("\n".join(probs))
    ok, w = cycles.cycles_equivalent(a1, a2, mode=args.mode)
    data = {"equivalent": ok, "witness": w.to_json() if w else None}
    _emit(args, data, "equivalent" if ok else "not equivalent")
    return 0 if ok else 1


def _ints(text, count, name):
    try:
        vals = [int(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"{name} expects {count} comma-separated integers")
    if len(vals) != count:
        raise InputError(f"{name} expects {count} comma-separated integers")
    return vals


def cmd_surgery(args):
    n, k = _ints(args.prongs, 2, "--prongs")
    a, b, c, d = _ints(args.matrix, 4, "--matrix")
    p = surgery.ProngData.normalized(n, k)
    A = surgery.SurgeryMatrix(a, b, c, d)
    res = surgery.prong_after_surgery(p, A)
    data = res.to_json()
    text = f"{res.status}: n2={res.n2} k2={res.k2}" + (f" gcd={data['gcd']}" if res.valid else f" ({res.reason})")
    _emit(args, data, text)
    return 0


# ------------------------------------------------------------------ parser

def build_parser():
    ap = argparse.ArgumentParser(prog="geomtype", description=__doc__.strip().splitlines()[0])
    ap.add_argument("--seed", type=int, default=0, help="seed for randomized helpers (default 0)")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "check the axioms of a .gt file").add_argument("file")
    add("canon", cmd_canon, "canonical form of the equivalence class").add_argument("file")
    p = add("equiv", cmd_equiv, "decide equivalence of two types")
    p.add_argument("a")
    p.add_argument("b")
    add("class", cmd_class, "list the equivalence class up to equality").add_argument("file")
    add("matrix", cmd_matrix, "transition matrices M and Mu").add_argument("file")
    add("entropy", cmd_entropy, "log of the spectral radius").add_argument("file")
    p = add("orbits", cmd_orbits, "number of closed symbolic words of a given length")
    p.add_argument("file")
    p.add_argument("--period", type=int, required=True)
    p = add("layout", cmd_layout, "geometrisation of the type")
    p.add_argument("file")
    p.add_argument("--mode", choices=("perron", "uniform"), default="perron")
    p = add("cover", cmd_cover, "explore the lifted family around an origin rectangle")
    p.add_argument("file")
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--type", type=int, default=1)
    p = add("arcpoints", cmd_arcpoints, "crossing rectangles and arc points on one side of a rect")
    p.add_argument("file")
    p.add_argument("--rect", type=int, default=0)
    p.add_argument("--side", choices=cover.SIDES, default="top")
    p.add_argument("--type", type=int, default=1)
    p.add_argument("--depth", type=int, default=0, help="exploration depth before locating --rect")
    p = add("reduce-path", cmd_reduce_path, "search for a reduction of a closed rectangle path")
    p.add_argument("--file", required=True)
    p.add_argument("--depth", type=int, default=8)
    add("cycles-check", cmd_cycles_check, "structural checks of the cycles in a .gtc file").add_argument("file")
    p = add("cycles-equiv", cmd_cycles_equiv, "equivalence of types with cycles")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--mode", choices=("rotation", "raw"), default="rotation")
    p = add("surgery", cmd_surgery, "prong data after surgery; k is folded into [1, n] by k <- ((k-1) mod n) + 1")
    p.add_argument("--prongs", required=True, metavar="N,K")
    p.add_argument("--matrix", required=True, metavar="A,B,C,D")
    return ap


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    inputs = [getattr(args, k) for k in ("file", "a", "b") if isinstance(getattr(args, k, None), str)]
    if inputs.count("-") > 1:
        print("error: only one input may come from stdin", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except BudgetError as e:
        print(f"budget exhausted: {e}", file=sys.stderr)
        return 3
    except (GeomTypeError, OSError, ValueError, KeyError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
