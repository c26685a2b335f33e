"""Desk-scale model of the lifted Markovian family.

Every rectangle of the cover carries an affine chart from its layout rectangle
into developed coordinates:  (x, y) -> (tx + sx*x, ty + sy*y)  with
sx = s*lam^m, sy = s*lam^-m for a sign s and an integer m.  Predecessors and
successors are obtained by composing with the layout return maps, so all
placements live exactly in Q(lam).

Conventions: x is the stable (horizontal) direction and y the unstable one.
Predecessors (through V-slots) are tall and thin, successors (through H-slots)
wide and flat.  The stable sides of a rectangle are its top and bottom.
"""

import os
from dataclasses import dataclass
from functools import cached_property

from .errors import BudgetError, CoverError, NotAQuadrantPair, ReducibleError, WindingGuardError
from .layout import Affine, layout, return_map
from .symbolic import structure

DEFAULT_MAX_RECTS = 10_000
DEFAULT_MAX_DEPTH = 32

SIDES = ("top", "bottom", "left", "right")


def _budget_from_env():
    raw = os.environ.get("GEOMTYPE_BUDGET")
    if not raw:
        return DEFAULT_MAX_RECTS, DEFAULT_MAX_DEPTH
    parts = raw.split(",")
    rects = int(parts[0])
    depth = int(parts[1]) if len(parts) > 1 else DEFAULT_MAX_DEPTH
    return rects, depth


@dataclass(frozen=True)
class CoverRect:
    id: int
    type: int
    chart: Affine
    box: tuple  # (xlo, xhi, ylo, yhi) in developed coordinates
    parent: object = None  # id of the rect it was first reached from
    via: object = None  # slot of the parent realising the step
    depth: int = 0
    self_return: bool = False

    @property
    def sign(self):
        return 1 if self.chart.sx.sign() > 0 else -1

    @cached_property
    def center(self):
        x0, x1, y0, y1 = self.box
        return ((x0 + x1) / 2, (y0 + y1) / 2)


def interiors_meet(b1, b2):
    return max(b1[0], b2[0]) < min(b1[1], b2[1]) and max(b1[2], b2[2]) < min(b1[3], b2[3])


def box_intersection(b1, b2):
    return (max(b1[0], b2[0]), min(b1[1], b2[1]), max(b1[2], b2[2]), min(b1[3], b2[3]))


def _crossings(p, q, guard):
    """Signed crossings of segment p->q with the half-line {y = gy, x > gx} (half-open rule)."""
    gx, gy = guard
    above_p = p[1] > gy
    above_q = q[1] > gy
    if above_p == above_q:
        return 0
    x = p[0] + (gy - p[1]) * (q[0] - p[0]) / (q[1] - p[1])
    if not x > gx:
        return 0
    return 1 if above_q else -1


class Patch:
    """Explored region of the cover.  Single writer; rect handles are immutable."""

    def __init__(self, g, max_rects=None, max_depth=None):
        rep = structure(g)
        if not rep.irreducible:
            raise ReducibleError("cover construction needs an irreducible transition matrix")
        self.g = g
        self.layout = layout(g, "perron")
        if not self.layout.exact:
            raise CoverError("Perron root has minimal polynomial of degree > 4; exact cover construction refused")
        self.field = self.layout.field
        self.lam = self.layout.lam
        self.degenerate = self.lam == 1
        env_rects, env_depth = _budget_from_env()
        self.max_rects = max_rects or env_rects
        self.max_depth = max_depth or env_depth
        self.rects = []
        self.edges = {}  # (rect id, slot) -> rect id
        self.windings = []
        self.guards = []  # developed points of detected boundary-periodic points
        self.identifications = []  # (parent id, slot, target id)
        self._index = {}
        self._phi_inv = g.phi_inv()
        self._crossing_cache = {}

    # ------------------------------------------------------------ building
    def _box(self, i, chart):
        w = self.layout.widths[i - 1]
        t = self.layout.heights[i - 1]
        x0, y0 = chart(0, 0)
        x1, y1 = chart(w, t)
        return (min(x0, x1), max(x0, x1), min(y0, y1), max(y0, y1))

    def _key(self, i, chart):
        return (i, chart.sx, chart.sy, chart.tx, chart.ty)

    def add_root(self, i):
        zero = self.field.zero()
        one = self.field.one()
        chart = Affine(one, one, zero, zero)
        return self._new(i, chart, None, None, 0)

    def _new(self, i, chart, parent, via, depth):
        if len(self.rects) >= self.max_rects:
            raise BudgetError(f"cover budget of {self.max_rects} rectangles exhausted")
        rid = len(self.rects)
        box = self._box(i, chart)
        key = self._key(i, chart)
        self_return = self.degenerate and key in self._index
        r = CoverRect(rid, i, chart, box, parent, via, depth, self_return)
        self.rects.append(r)
        if parent is None:
            self.windings.append((0,) * len(self.guards))
        else:
            self.windings.append(self._step_winding(parent, rid))
        self._index.setdefault(key, []).append(rid)
        return r

    def _polyline(self, a, b):
        """centre(a) -> centre(a & b) -> centre(b)."""
        ra, rb = self.rects[a], self.rects[b]
        mid = box_intersection(ra.box, rb.box)
        return ra.center, ((mid[0] + mid[1]) / 2, (mid[2] + mid[3]) / 2), rb.center

    def _delta(self, a, b, guard):
        p, m, q = self._polyline(a, b)
        return _crossings(p, m, guard) + _crossings(m, q, guard)

    def _step_delta(self, a, b):
        """Per-guard signed crossings of the polyline from a to b."""
        p, m, q = self._polyline(a, b)
        return tuple(_crossings(p, m, gd) + _crossings(m, q, gd) for gd in self.guards)

    def _step_winding(self, a, b):
        return tuple(x + y for x, y in zip(self.windings[a], self._step_delta(a, b)))

    def dual_slot(self, slot):
        """Slot of the neighbour that realises the reverse step."""
        if slot.kind == "V":
            return self._phi_inv[slot]
        return self.g.phi[slot]

    def neighbor_chart(self, r, slot):
        if slot.rect != r.type:
            raise CoverError(f"slot {slot} does not belong to rectangle type {r.type}")
        if slot.kind == "V":
            h = self._phi_inv[slot]
            return h.rect, r.chart.after(return_map(self.layout, self.g, h))
        f = return_map(self.layout, self.g, slot)
        return self.g.phi[slot].rect, r.chart.after(f.inverse())

    def extend(self, r, slot):
        """Predecessor (V slot) or successor (H slot) of r through slot."""
        if isinstance(r, int):
            r = self.rects[r]
        known = self.edges.get((r.id, slot))
        if known is not None:
            return self.rects[known]
        i, chart = self.neighbor_chart(r, slot)
        back = self.dual_slot(slot)
        target = None
        if not self.degenerate:
            for cand in self._index.get(self._key(i, chart), ()):
                if self.edges.get((cand, back), r.id) != r.id:
                    continue
                if self._step_winding(r.id, cand) == self.windings[cand]:
                    target = self.rects[cand]
                    break
        if target is None:
            if r.depth + 1 > self.max_depth:
                raise BudgetError(f"chain depth budget {self.max_depth} exceeded")
            target = self._new(i, chart, r.id, slot, r.depth + 1)
        else:
            self.identifications.append((r.id, slot, target.id))
        self.edges[(r.id, slot)] = target.id
        prev = self.edges.get((target.id, back))
        if prev is not None and prev != r.id:
            raise CoverError(f"rect {target.id} already has a different neighbour through {back}")
        self.edges[(target.id, back)] = r.id
        return target

    def neighbors(self, r, kind):
        if isinstance(r, int):
            r = self.rects[r]
        return [self.extend(r, s) for s in self.g.slots(r.type, kind)]

    def add_guard(self, point):
        if point in self.guards:
            return
        self.guards.append(point)
        # only the new component changes: append it along the provenance tree (parents come first)
        extra = []
        for r in self.rects:
            if r.parent is None:
                extra.append(0)
            else:
                extra.append(extra[r.parent] + self._delta(r.parent, r.id, point))
        self.windings = [w + (e,) for w, e in zip(self.windings, extra)]
        for a, slot, b in self.identifications:
            if extra[a] + self._delta(a, b, point) != extra[b]:
                raise WindingGuardError(
                    f"identification of rect {b} through {slot} of rect {a} crosses the guard at {point}"
                )

    def winding(self, r):
        return self.windings[r if isinstance(r, int) else r.id]

    def provenance(self, r):
        """(rect ids, slots) of the path by which r was first reached from the root."""
        if isinstance(r, int):
            r = self.rects[r]
        ids, slots = [r.id], []
        while r.parent is not None:
            slots.append(r.via)
            r = self.rects[r.parent]
            ids.append(r.id)
        return tuple(reversed(ids)), tuple(reversed(slots))

    def slot_between(self, a, b):
        ra = self.rects[a]
        for kind in ("V", "H"):
            for s in self.g.slots(ra.type, kind):
                if self.edges.get((a, s)) == b:
                    return s
        return None

    def to_json(self):
        def box(b):
            return [x.to_json() for x in b]

        return {
            "lambda_minpoly": [str(c) for c in self.field.minpoly],
            "nodes": [
                {"id": r.id, "type": r.type, "box": box(r.box), "winding": list(self.windings[r.id])}
                for r in self.rects
            ],
            "edges": [
                {"from": a, "slot": str(s), "to": b}
                for (a, s), b in sorted(self.edges.items(), key=lambda kv: (kv[0][0], kv[0][1]))
            ],
            "guards": [[x.to_json(), y.to_json()] for x, y in self.guards],
        }


def origin(g, type=1, **budget):
    patch = Patch(g, **budget)
    if not 1 <= type <= g.n:
        raise CoverError(f"no rectangle type {type}")
    return patch, patch.add_root(type)


def explore(patch, r, depth):
    """Breadth-first growth of the patch to the given path depth around r."""
    frontier = [r]
    for _ in range(depth):
        nxt = []
        for x in frontier:
            for kind in ("V", "H"):
                nxt.extend(patch.neighbors(x, kind))
        frontier = nxt
    return patch


# ------------------------------------------------------------ crossing data

@dataclass(frozen=True)
class Crossing:
    rect: int
    chain: tuple  # rect ids from the base rect to the crossing rect, both included
    extent: tuple  # (lo, hi) along the side


@dataclass(frozen=True)
class PeriodicRay:
    point: object  # developed point, None in the lam = 1 degenerate case
    chain: tuple  # rect ids along the non-crossing ray, base first
    prefix: int
    period: int
    residual: tuple  # part of the side not resolved by the enumeration


@dataclass(frozen=True)
class CrossingResult:
    base: int
    side: str
    line: object
    extent: tuple
    members: tuple
    rays: tuple = ()

    @property
    def periodic(self):
        return bool(self.rays)

    def fundamental(self, ray=0):
        """Members met inside one period of the given periodic ray."""
        r = self.rays[ray]
        start = r.chain[r.prefix]
        stop = r.chain[r.prefix + r.period]
        return tuple(m for m in self.members if start in m.chain and stop not in m.chain)


def _side_geometry(box, side):
    x0, x1, y0, y1 = box
    if side == "top":
        return y1, (x0, x1)
    if side == "bottom":
        return y0, (x0, x1)
    if side == "right":
        return x1, (y0, y1)
    if side == "left":
        return x0, (y0, y1)
    raise ValueError(f"unknown side {side!r}")


def _beyond(box, side, line):
    x0, x1, y0, y1 = box
    return {"top": y1 > line, "bottom": y0 < line, "right": x1 > line, "left": x0 < line}[side]


def _extent(box, side):
    return (box[0], box[1]) if side in ("top", "bottom") else (box[2], box[3])


def crossing(patch, r, side, periods=1):
    """Crossing predecessors (top/bottom) or crossing successors (left/right) of r."""
    if isinstance(r, int):
        r = patch.rects[r]
    key = (r.id, side, periods)
    if key in patch._crossing_cache:
        return patch._crossing_cache[key]
    kind = "V" if side in ("top", "bottom") else "H"
    line, extent = _side_geometry(r.box, side)
    members = []
    rays = []

    def walk(node, chain, states):
        if len(chain) > patch.max_depth:
            raise BudgetError(f"crossing recursion exceeded depth {patch.max_depth}")
        for child in patch.neighbors(node, kind):
            if _beyond(child.box, side, line):
                members.append(Crossing(child.id, chain + (child.id,), _extent(child.box, side)))
                continue
            state = (child.type, child.sign)
            seen = [k for k, s in enumerate(states) if s == state]
            if len(seen) >= periods:
                first = seen[-1]
                ray_chain = chain + (child.id,)
                rays.append(_periodic_ray(patch, ray_chain, first, len(chain) - first, side, line))
                continue
            walk(child, chain + (child.id,), states + (state,))

    walk(r, (r.id,), ((r.type, r.sign),))
    members.sort(key=lambda m: m.extent[0])
    result = CrossingResult(r.id, side, line, extent, tuple(members), tuple(rays))
    for ray in rays:
        if ray.point is not None:
            patch.add_guard(ray.point)
    patch._crossing_cache[key] = result
    return result


def _periodic_ray(patch, chain, first, period, side, line):
    a = patch.rects[chain[first]]
    b = patch.rects[chain[first + period]]
    residual = _extent(b.box, side)
    if patch.degenerate:
        return PeriodicRay(None, chain, first, period, residual)
    # similarity sending a's chart to b's chart along the side; its fixed point is the limit
    if side in ("top", "bottom"):
        scale = b.chart.sx / a.chart.sx
        fixed = (b.chart.tx - scale * a.chart.tx) / (1 - scale)
        point = (fixed, line)
    else:
        scale = b.chart.sy / a.chart.sy
        fixed = (b.chart.ty - scale * a.chart.ty) / (1 - scale)
        point = (line, fixed)
    return PeriodicRay(point, chain, first, period, residual)


def check_cover(result):
    """Problems with the claim that members (plus unresolved residuals) tile the side exactly."""
    problems = []
    pieces = sorted([m.extent for m in result.members] + [ray.residual for ray in result.rays], key=lambda e: e[0])
    lo, hi = result.extent
    pos = lo
    for a, b in pieces:
        if a < pos:
            problems.append(f"overlap at {a}")
        elif a > pos:
            problems.append(f"gap between {pos} and {a}")
        pos = max(pos, b)
    if pos != hi:
        problems.append(f"cover ends at {pos}, side ends at {hi}")
    return problems


crossing_predecessors = crossing
crossing_successors = crossing


# ---------------------------------------------------------------- arc points

@dataclass(frozen=True)
class ArcPoint:
    point: tuple
    base: int
    side: str
    incident: tuple  # crossing rects having this point as a corner
    corner_of_base: bool = False
    degenerate: bool = False


def arc_points(patch, r, side, periods=1):
    if isinstance(r, int):
        r = patch.rects[r]
    res = crossing(patch, r, side, periods)
    line = res.line
    horizontal = side in ("top", "bottom")

    def pt(c):
        return (c, line) if horizontal else (line, c)

    if not res.members:
        lo, hi = res.extent
        return [ArcPoint(pt(c), r.id, side, (), True, True) for c in (lo, hi)]
    found = {}
    for m in res.members:
        for c in m.extent:
            if res.extent[0] <= c <= res.extent[1]:
                found.setdefault(c, []).append(m.rect)
    out = []
    for c in sorted(found):
        out.append(ArcPoint(pt(c), r.id, side, tuple(found[c]), c in res.extent, False))
    return out


# -------------------------------------------------------------- cycles at p

_CCW = ("below", "right", "above", "left")


def position(box, p):
    """Where the rect sits relative to p when p is interior to one of its sides."""
    x0, x1, y0, y1 = box
    px, py = p
    if x0 < px < x1:
        if py == y1:
            return "below"
        if py == y0:
            return "above"
    if y0 < py < y1:
        if px == x0:
            return "right"
        if px == x1:
            return "left"
    return None


def _step_around(patch, L, pos, newpos, p):
    px, py = p
    if pos in ("below", "above"):
        kind, line = "V", py
        side = "top" if pos == "below" else "bottom"
    else:
        kind, line = "H", px
        side = "left" if pos == "right" else "right"
    chain = [L.id]
    node = L
    while True:
        if len(chain) > patch.max_depth:
            raise BudgetError("descent toward arc point exceeded depth budget")
        pick = None
        for child in patch.neighbors(node, kind):
            x0, x1, y0, y1 = child.box
            if newpos == "right":
                ok = x0 <= px < x1
            elif newpos == "left":
                ok = x0 < px <= x1
            elif newpos == "above":
                ok = y0 <= py < y1
            else:
                ok = y0 < py <= y1
            if ok:
                pick = child
                break
        if pick is None:
            raise CoverError(f"no neighbour of rect {node.id} contains the {newpos} germ of {p}")
        chain.append(pick.id)
        if _beyond(pick.box, side, line):
            if position(pick.box, p) != newpos:
                raise NotAQuadrantPair(f"{p} is not on a side of the crossing rect {pick.id}")
            return pick, tuple(chain)
        node = pick


@dataclass(frozen=True)
class ArcCycle:
    point: tuple
    sign: str
    rects: tuple  # (L0, L1, L2, L3, L4) ids
    chains: tuple  # monotone chains L_k -> L_{k+1}

    def conditions(self, patch):
        b = [patch.rects[i].box for i in self.rects]
        return {
            "L2 disjoint L0": not interiors_meet(b[2], b[0]),
            "L3 disjoint L1": not interiors_meet(b[3], b[1]),
            "L4 disjoint L2": not interiors_meet(b[4], b[2]),
            "L4 meets L0": interiors_meet(b[4], b[0]),
        }


def arc_point_cycle(patch, p, L0, sign="positive"):
    if isinstance(p, ArcPoint):
        p = p.point
    if isinstance(L0, int):
        L0 = patch.rects[L0]
    pos = position(L0.box, p)
    if pos is None:
        raise NotAQuadrantPair(f"rect {L0.id} does not contain two quadrant germs at {p}")
    step = 1 if sign == "positive" else -1
    rects = [L0.id]
    chains = []
    cur = L0
    k = _CCW.index(pos)
    for _ in range(4):
        nk = (k + step) % 4
        cur, chain = _step_around(patch, cur, _CCW[k], _CCW[nk], p)
        rects.append(cur.id)
        chains.append(chain)
        k = nk
    return ArcCycle(p, sign, tuple(rects), tuple(chains))


def arc_point_cycles(patch, p, L0):
    return arc_point_cycle(patch, p, L0, "positive"), arc_point_cycle(patch, p, L0, "negative")


def cycles_are_reverse(c_pos, c_neg):
    """The pairing of the two cycles at one (p, L0): (L0,L1,L2,L3,L4) vs (L0,L3,L2,L1,L4)."""
    a, b = c_pos.rects, c_neg.rects
    return b == (a[0], a[3], a[2], a[1], a[4])


def quadrant_base(patch, ap):
    """A rect containing two quadrant germs at the arc point (a crossing rect having it on a side)."""
    for rid in ap.incident:
        if position(patch.rects[rid].box, ap.point) is not None:
            return patch.rects[rid]
    base = patch.rects[ap.base]
    if position(base.box, ap.point) is not None:
        return base
    raise NotAQuadrantPair(f"no listed rect has {ap.point} in a side interior")


# ------------------------------------------------------------ audit helpers

def markov_violations(patch, limit=None):
    """Pairs of explored rects on the same sheet whose interiors meet non-Markovianly."""
    bad = []
    rects = patch.rects
    for a in range(len(rects)):
        A = rects[a]
        for b in range(a + 1, len(rects)):
            B = rects[b]
            if patch.windings[a] != patch.windings[b] or not interiors_meet(A.box, B.box):
                continue
            I = box_intersection(A.box, B.box)
            vert_a = I[2] == A.box[2] and I[3] == A.box[3] and I[0] == B.box[0] and I[1] == B.box[1]
            vert_b = I[2] == B.box[2] and I[3] == B.box[3] and I[0] == A.box[0] and I[1] == A.box[1]
            if A.box == B.box or not (vert_a or vert_b):
                bad.append((a, b))
                if limit and len(bad) >= limit:
                    return bad
    return bad
