"""The twelve acceptance criteria, one test each.

Every test records a PASS/FAIL line (shown in the terminal summary and
printed with -s).  Criteria 8 and 9 fail on the reference types, for the
reason given in the decisions ledger; they are strict xfails so that a fix
shows up as an unexpected pass.
"""

import io
import itertools
import math
import random
from contextlib import redirect_stdout

import pytest

from conftest import ACCEPTANCE, DATA, GOLDEN, random_irreducible, random_type
from geomtype import cli
from geomtype.core import FULL2, GOLD, TRIV, GeometricType, SubrectangleRef, validate
from geomtype.cover import (
    SIDES,
    arc_point_cycles,
    arc_points,
    crossing,
    cycles_are_reverse,
    explore,
    origin,
    quadrant_base,
)
from geomtype.equivalence import (
    EquivalenceWitness,
    all_witnesses,
    apply_move,
    apply_witness,
    canonical_form,
    enumerate_class,
    equality_key,
    is_equivalent,
    legal_moves,
    move_witness,
)
from geomtype.errors import GeomTypeError
from geomtype.layout import layout, return_map
from geomtype.paths import (
    GPath,
    PlanePath,
    associated_path,
    concat,
    gpath_problems,
    reduce,
    reverse,
    transport,
)
from geomtype.surgery import IDENTITY, ProngData, SurgeryMatrix, gcd_invariance_check, prong_after_surgery
from geomtype.symbolic import count_closed_words, count_closed_words_bruteforce, entropy
from oracles import Development, brute_equivalent, brute_valid, extent, from_field, open_boxes_meet, tiles


def record(k, ok, detail):
    ACCEPTANCE[k] = (ok, detail)
    print(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    return ok


# ------------------------------------------------------------------- 1

def _candidate(rng):
    n = rng.randint(1, 4)
    h = [rng.randint(1, 4) for _ in range(n)]
    if rng.random() < 0.6:
        v = [1] * n
        for _ in range(sum(h) - n):
            v[rng.choice([i for i in range(n) if v[i] < 4] or [0])] += 1
    else:
        v = [rng.randint(1, 4) for _ in range(n)]
    hs = [("H", i + 1, j + 1) for i in range(n) for j in range(h[i])]
    vs = [("V", i + 1, j + 1) for i in range(n) for j in range(v[i])]
    if len(hs) == len(vs) and rng.random() < 0.7:
        img = vs[:]
        rng.shuffle(img)
    else:
        img = [rng.choice(vs) for _ in hs]
    phi = dict(zip(hs, img))
    u = {a: rng.choice((1, -1)) for a in hs}
    if rng.random() < 0.05 and hs:
        phi.pop(rng.choice(hs))
    return n, h, v, phi, u


def test_criterion_01_validation_axioms():
    rng = random.Random(1)
    mismatches = valid = 0
    for _ in range(500):
        n, h, v, phi, u = _candidate(rng)
        ref = lambda t: SubrectangleRef(*t)  # noqa: E731
        g = GeometricType(n, tuple(h), tuple(v), {ref(a): ref(b) for a, b in phi.items()}, {ref(a): s for a, s in u.items()})
        expect = brute_valid(n, h, v, phi, u)
        valid += expect
        mismatches += validate(g).ok != expect
    ok = mismatches == 0 and 50 < valid < 450
    record(1, ok, f"500 candidates, {valid} valid, {mismatches} disagreements with the brute-force checker")
    assert ok


# ------------------------------------------------------------------- 2

def test_criterion_02_class_finiteness_and_closure():
    rng = random.Random(2)
    worst = 0
    problems = []
    for _ in range(100):
        g = random_type(rng, 3, 3)
        cls = enumerate_class(g)
        keys = {equality_key(x)[0] for x in cls}
        worst = max(worst, len(cls) / (4 * 2**g.n))
        if len(cls) > 4 * 2**g.n:
            problems.append(f"class of size {len(cls)} for n={g.n}")
        for x in cls:
            for m in legal_moves(x):
                if equality_key(apply_move(x, m))[0] not in keys:
                    problems.append(f"move {m} leaves the class")
        for a, b in itertools.combinations(cls, 2):
            if not is_equivalent(a, b)[0]:
                problems.append("two class members not equivalent")
    ok = not problems
    record(2, ok, f"100 classes, max size/bound {worst:.3f}, {len(problems)} problems")
    assert ok, problems[:5]


# ------------------------------------------------------------------- 3

def test_criterion_03_canonical_form_soundness():
    rng = random.Random(3)
    pool = []
    for _ in range(30):
        g = random_type(rng, 3, 2)
        cls = enumerate_class(g)
        pool += rng.sample(cls, min(3, len(cls)))
        # a near miss: same shape, one sign changed
        a = next(iter(g.u))
        pool.append(GeometricType(g.n, g.h, g.v, g.phi, {**g.u, a: -g.u[a]}))
    canon = [canonical_form(x) for x in pool]
    mismatches = checked = 0
    for i, j in itertools.combinations(range(len(pool)), 2):
        same = canon[i] == canon[j]
        eq = is_equivalent(pool[i], pool[j])[0]
        mismatches += same != eq
        checked += 1
    # the search itself against exhaustive witness enumeration on a sample
    oracle_bad = 0
    for i, j in rng.sample(list(itertools.combinations(range(len(pool)), 2)), 300):
        oracle_bad += brute_equivalent(pool[i], pool[j], apply_witness, EquivalenceWitness) != (canon[i] == canon[j])
    ok = mismatches == 0 and oracle_bad == 0
    record(3, ok, f"{checked} pairs, {mismatches} canonical/equivalence mismatches, {oracle_bad} oracle mismatches")
    assert ok


# ------------------------------------------------------------------- 4

def test_criterion_04_entropy_oracle():
    gold = abs(entropy(GOLD) - math.log((1 + math.sqrt(5)) / 2))
    full = abs(entropy(FULL2) - math.log(2))
    triv = entropy(TRIV)
    ok = gold < 1e-9 and full < 1e-12 and triv == 0
    record(4, ok, f"|GOLD err| {gold:.1e}, |FULL2 err| {full:.1e}, TRIV {triv}")
    assert ok


# ------------------------------------------------------------------- 5

def test_criterion_05_trace_oracle():
    rng = random.Random(5)
    gs = [TRIV, FULL2, GOLD] + [random_irreducible(rng, 3, 3) for _ in range(20)]
    bad = [(i, m) for i, g in enumerate(gs) for m in range(1, 7)
           if count_closed_words(g, m) != count_closed_words_bruteforce(g, m)]
    ok = not bad
    record(5, ok, f"{len(gs)} types x m=1..6, {len(bad)} disagreements")
    assert ok


# ------------------------------------------------------------------- 6

def test_criterion_06_perron_layout_exactness():
    failures = 0
    slots = 0
    for g in (FULL2, GOLD):
        lay = layout(g, "perron")
        assert lay.exact
        lam = lay.lam
        for a in g.hrefs():
            f = return_map(lay, g, a)
            u = g.u[a]
            slots += 1
            # linear part u*diag(1/lam, lam): residuals must be exactly zero
            if not ((f.sx * lam - u).is_zero() and (f.sy - lam * u).is_zero()):
                failures += 1
    ok = failures == 0
    record(6, ok, f"{slots} H-slots, {failures} nonzero residuals")
    assert ok


# ------------------------------------------------------------------- 7

def _oracle_node(dev, patch, rid):
    _, slots = patch.provenance(rid)
    node = dev.root(patch.rects[0].type)
    for s in slots:
        node = dev.step(node, s)
    return node


def test_criterion_07_cover_axioms():
    checked = 0
    problems = []
    for g in (FULL2, GOLD):
        dev = Development(g, 5)
        for ty in range(1, g.n + 1):
            patch, root = origin(g, ty)
            explore(patch, root, 1)
            for rid in range(len(patch.rects)):
                base = _oracle_node(dev, patch, rid)
                if tuple(from_field(x, 5) for x in patch.rects[rid].box) != dev.box(base):
                    problems.append(f"rect {rid} placed differently by the oracle")
                    continue
                for side in SIDES:
                    res = crossing(patch, rid, side, periods=6)
                    mem, open_ = dev.crossing(base, side, 5)
                    ours = sorted((patch.rects[m.rect].type, tuple(from_field(x, 5) for x in patch.rects[m.rect].box))
                                  for m in res.members if len(m.chain) - 1 <= 5)
                    theirs = sorted((t, b) for t, b, _ in mem)
                    lo, hi = extent(dev.box(base), side)
                    checked += 1
                    if ours != theirs:
                        problems.append(f"{g!r} rect {rid} {side}: members differ")
                    if not tiles([extent(b, side) for _, b, _ in mem + open_], lo, hi):
                        problems.append(f"{g!r} rect {rid} {side}: no exact tiling")
                    if any(open_boxes_meet(a[1], b[1]) for a, b in itertools.combinations(mem, 2)):
                        problems.append(f"{g!r} rect {rid} {side}: overlapping members")
    ok = not problems
    record(7, ok, f"{checked} (rect, side) boundaries up to generation 5, {len(problems)} problems")
    assert ok, problems[:5]


# ------------------------------------------------------------------- 8

def _arc_point_cycles(g):
    for ty in range(1, g.n + 1):
        patch, root = origin(g, ty)
        explore(patch, root, 1)
        for rid in range(len(patch.rects)):
            for side in SIDES:
                for ap in arc_points(patch, rid, side):
                    if ap.degenerate:
                        continue
                    L0 = quadrant_base(patch, ap)
                    yield patch, ap, arc_point_cycles(patch, ap.point, L0)


@pytest.mark.xfail(strict=True, reason="reference types are not realizable; see the decisions ledger")
def test_criterion_08_arc_point_cycles():
    total = reversed_ = conditions = 0
    for g in (FULL2, GOLD):
        for patch, ap, (cp, cn) in _arc_point_cycles(g):
            total += 1
            reversed_ += cycles_are_reverse(cp, cn)
            conditions += all(cp.conditions(patch).values()) and all(cn.conditions(patch).values())
    ok = total > 0 and reversed_ == total and conditions == total
    record(8, ok, f"{total} arc points, two cycles built at each, {reversed_} reverse pairs, "
                  f"{conditions} with all four conditions")
    assert ok


# ------------------------------------------------------------------- 9

def _padded_loop(patch, rng, root, max_len):
    """Closed path made only of back-and-forth excursions, nested at random."""
    rects, slots = [root], []
    while len(slots) + 2 <= max_len:
        i = rng.randrange(len(rects))
        r = patch.rects[rects[i]]
        s = rng.choice(patch.g.hrefs() + patch.g.vrefs())
        s = SubrectangleRef(s.kind, r.type, 1 + (s.slot - 1) % len(patch.g.slots(r.type, s.kind)))
        nxt = patch.extend(r, s)
        rects[i + 1:i + 1] = [nxt.id, r.id]
        slots[i:i] = [s, patch.dual_slot(s)]
        if rng.random() < 0.2:
            break
    return PlanePath(tuple(rects), tuple(slots))


def _random_open_path(patch, rng, root, length):
    rects, slots = [root], []
    for _ in range(length):
        r = patch.rects[rects[-1]]
        kind = rng.choice("HV")
        s = rng.choice(patch.g.slots(r.type, kind))
        rects.append(patch.extend(r, s).id)
        slots.append(s)
    return PlanePath(tuple(rects), tuple(slots))


@pytest.mark.xfail(strict=True, reason="reference types are not realizable; see the decisions ledger")
def test_criterion_09_homotopy_reduction():
    rng = random.Random(9)
    c_loops = c_trivial = 0
    for g in (FULL2, GOLD):
        patch, root = origin(g, 1)
        explore(patch, root, 1)
        for side in SIDES:
            for ap in arc_points(patch, root.id, side):
                if ap.degenerate:
                    continue
                cp, cn = arc_point_cycles(patch, ap.point, quadrant_base(patch, ap))
                c_loops += 1
                try:
                    a, b = associated_path(patch, cp.rects), associated_path(patch, cn.rects)
                    loop = concat(a, reverse(patch, b))
                except (GeomTypeError, ValueError):
                    continue  # the two cycles do not even end at the same rectangle
                c_trivial += reduce(patch, loop, depth=8).trivial
    padded = padded_ok = 0
    opened = open_trivial = 0
    shared = [origin(g, 1) for g in (FULL2, GOLD)]
    for k in range(50):
        patch, root = shared[k % 2]
        loop = _padded_loop(patch, rng, root.id, 12)
        padded += 1
        padded_ok += reduce(patch, loop, depth=8).trivial
        p = _random_open_path(patch, rng, root.id, rng.randint(1, 12))
        while p.closed:
            p = _random_open_path(patch, rng, root.id, rng.randint(1, 12))
        opened += 1
        open_trivial += reduce(patch, p, depth=2, require_closed=False).trivial
    ok = c_loops > 0 and c_trivial == c_loops and padded_ok == padded and open_trivial == 0
    record(9, ok, f"C-loops {c_trivial}/{c_loops} trivial, B-padded {padded_ok}/{padded} trivial, "
                  f"open paths reported trivial {open_trivial}/{opened}")
    assert ok


# ------------------------------------------------------------------ 10

def _closed_gpaths(g, max_len):
    inv = g.phi_inv()
    out = []

    def walk(idx, slots):
        if slots and idx[0] == idx[-1]:
            out.append(GPath(tuple(idx), tuple(slots)))
        if len(slots) == max_len:
            return
        i = idx[-1]
        for s in g.slots(i, "H") + g.slots(i, "V"):
            j = g.phi[s].rect if s.kind == "H" else inv[s].rect
            walk(idx + [j], slots + [s])

    for i in range(1, g.n + 1):
        walk([i], [])
    return out


def test_criterion_10_transport_closedness():
    count = bad = 0
    for g in (FULL2, GOLD):
        qs = _closed_gpaths(g, 6)
        witnesses = [move_witness(g, m) for m in legal_moves(g)] + list(all_witnesses(g, g))
        for w in witnesses:
            g2 = apply_witness(g, w)
            for q in qs:
                q2 = transport(w, q)
                count += 1
                bad += not q2.closed or bool(gpath_problems(g2, q2))
    ok = count > 0 and bad == 0
    record(10, ok, f"{count} transported closed G-paths, {bad} counterexamples")
    assert ok


# ------------------------------------------------------------------ 11

def _det1(lo=-3, hi=3):
    r = range(lo, hi + 1)
    for a, b, c, d in itertools.product(r, r, r, r):
        if a * d - b * c == 1:
            yield SurgeryMatrix(a, b, c, d)


def test_criterion_11_surgery_arithmetic():
    problems = []
    for n in range(2, 9):
        for k in range(1, n + 1):
            res = prong_after_surgery(ProngData(n, k), IDENTITY)
            if (res.n2, res.k2) != (n, k):
                problems.append(f"identity moved ({n},{k})")
    mats = list(_det1())
    gcd_checked = comp_checked = 0
    for n in range(2, 7):
        for k in range(1, n + 1):
            p = ProngData(n, k)
            for A in mats:
                ra = prong_after_surgery(p, A)
                if not ra.valid:
                    continue
                gcd_checked += 1
                if not gcd_invariance_check(p, A):
                    problems.append(f"gcd changed for ({n},{k}) {A}")
                for B in mats:
                    rb = prong_after_surgery(ra.data, B)
                    if not rb.valid:
                        continue
                    comp_checked += 1
                    direct = prong_after_surgery(p, A @ B)
                    if (direct.n2, direct.k2) != (rb.n2, rb.k2):
                        problems.append(f"composition fails for ({n},{k})")
    one = prong_after_surgery(ProngData(2, 1), SurgeryMatrix(1, 1, 0, 1))
    if one.status != "one-prong":
        problems.append("one-prong case not detected")
    ok = not problems
    record(11, ok, f"{len(mats)} det-1 matrices, {gcd_checked} gcd checks, {comp_checked} compositions, "
                   f"one-prong detected: {one.status == 'one-prong'}, {len(problems)} problems")
    assert ok, problems[:5]


# ------------------------------------------------------------------ 12

GOLDEN_CASES = [
    ("canon_gold", ["canon", str(DATA / "gold.gt")]),
    ("canon_gold_twisted", ["canon", str(DATA / "gold_twisted.gt")]),
    ("canon_full2_mixed_json", ["canon", "--json", str(DATA / "full2_mixed.gt")]),
    ("matrix_gold", ["matrix", str(DATA / "gold.gt")]),
    ("matrix_full2_json", ["matrix", "--json", str(DATA / "full2.gt")]),
    ("entropy_gold_json", ["entropy", "--json", str(DATA / "gold.gt")]),
    ("entropy_full2", ["entropy", str(DATA / "full2.gt")]),
    ("entropy_triv_json", ["entropy", "--json", str(DATA / "triv.gt")]),
    ("surgery_valid_json", ["surgery", "--json", "--prongs", "2,2", "--matrix", "1,-1,0,1"]),
    ("surgery_one_prong_json", ["surgery", "--json", "--prongs", "2,1", "--matrix", "1,1,0,1"]),
    ("surgery_identity", ["surgery", "--prongs", "5,3", "--matrix", "1,0,0,1"]),
]


def run_cli(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli.run(argv)
    return code, buf.getvalue()


def test_criterion_12_cli_stability():
    problems = []
    for name, argv in GOLDEN_CASES:
        first = run_cli(argv)
        second = run_cli(argv)
        expected = (GOLDEN / f"{name}.txt").read_text(encoding="utf-8")
        if first != second:
            problems.append(f"{name}: two runs differ")
        if first[0] != 0 or first[1] != expected:
            problems.append(f"{name}: output differs from the golden file")
    ok = not problems
    record(12, ok, f"{len(GOLDEN_CASES)} golden cases, {len(problems)} problems")
    assert ok, problems
