"""Rectangle paths in the cover and in a geometric type; homotopies and reduction."""

from dataclasses import dataclass, field

from .core import SubrectangleRef
from .cover import (
    SIDES,
    arc_point_cycles,
    arc_points,
    crossing,
    interiors_meet,
    position,
)
from .errors import (
    BudgetError,
    CoverError,
    GeomTypeError,
    NotAQuadrantPair,
    NotBReducible,
    NotCApplicable,
    NotClosed,
    NotComparable,
)


@dataclass(frozen=True)
class PlanePath:
    """rects[k] --slots[k]--> rects[k+1]; len(slots) == len(rects) - 1."""

    rects: tuple
    slots: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "rects", tuple(self.rects))
        object.__setattr__(self, "slots", tuple(self.slots))
        if len(self.slots) != len(self.rects) - 1:
            raise ValueError("a path with m steps needs m + 1 rectangles")

    @property
    def start(self):
        return self.rects[0]

    @property
    def end(self):
        return self.rects[-1]

    @property
    def closed(self):
        return self.rects[0] == self.rects[-1]

    @property
    def trivial(self):
        return len(self.rects) == 1

    def __len__(self):
        return len(self.slots)

    def to_json(self):
        steps = [[r, str(s)] for r, s in zip(self.rects, self.slots)]
        steps.append([self.rects[-1], None])
        return steps


def check_plane_path(patch, p):
    for k, s in enumerate(p.slots):
        if patch.edges.get((p.rects[k], s)) != p.rects[k + 1]:
            return False
    return True


def path_from_rects(patch, rects):
    slots = []
    for a, b in zip(rects, rects[1:]):
        s = patch.slot_between(a, b)
        if s is None:
            raise CoverError(f"rects {a} and {b} are not neighbours in the patch")
        slots.append(s)
    return PlanePath(tuple(rects), tuple(slots))


def concat(p, q):
    if p.end != q.start:
        raise ValueError("paths do not meet")
    return PlanePath(p.rects + q.rects[1:], p.slots + q.slots)


def reverse(patch, p):
    slots = tuple(patch.dual_slot(s) for s in reversed(p.slots))
    return PlanePath(tuple(reversed(p.rects)), slots)


# ----------------------------------------------------------------- G-paths

@dataclass(frozen=True)
class GPath:
    """i_0, s_0, i_1, ..., s_m, i_{m+1}: indices has one more entry than slots."""

    indices: tuple
    slots: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(self.indices))
        object.__setattr__(self, "slots", tuple(self.slots))
        if len(self.slots) != len(self.indices) - 1:
            raise ValueError("a G-path with m steps needs m + 1 indices")

    @property
    def closed(self):
        return self.indices[0] == self.indices[-1]

    def __len__(self):
        return len(self.slots)

    def __str__(self):
        parts = [str(self.indices[0])]
        for s, i in zip(self.slots, self.indices[1:]):
            parts += [str(s), str(i)]
        return " ".join(parts)

    @classmethod
    def parse(cls, text):
        toks = text.split()
        if len(toks) % 2 == 0:
            raise ValueError("a G-path alternates indices and slots and starts/ends with an index")
        return cls(tuple(int(t) for t in toks[::2]), tuple(SubrectangleRef.parse(t) for t in toks[1::2]))


def gpath_problems(g, q):
    inv = g.phi_inv()
    problems = []
    for k, s in enumerate(q.slots):
        i, j = q.indices[k], q.indices[k + 1]
        if s.rect != i:
            problems.append(f"step {k}: slot {s} does not belong to rectangle {i}")
            continue
        bound = g.h[i - 1] if s.kind == "H" else g.v[i - 1]
        if not 1 <= s.slot <= bound:
            problems.append(f"step {k}: slot {s} out of range")
            continue
        nxt = g.phi[s].rect if s.kind == "H" else inv[s].rect
        if nxt != j:
            problems.append(f"step {k}: {s} leads to rectangle {nxt}, not {j}")
    return problems


def project(patch, p):
    return GPath(tuple(patch.rects[r].type for r in p.rects), p.slots)


def lift(patch, q, start):
    if isinstance(start, int):
        start = patch.rects[start]
    if start.type != q.indices[0]:
        raise ValueError(f"start rect has type {start.type}, path starts at {q.indices[0]}")
    rects = [start.id]
    cur = start
    for s in q.slots:
        cur = patch.extend(cur, s)
        rects.append(cur.id)
    return PlanePath(tuple(rects), q.slots)


def transport(w, q):
    return GPath(tuple(w.sigma[i - 1] for i in q.indices), tuple(w.map_ref(s) for s in q.slots))


# ---------------------------------------------------------- monotone chains

def _contains(outer, inner, axis):
    lo, hi = (0, 1) if axis == "x" else (2, 3)
    return outer[lo] <= inner[lo] and inner[hi] <= outer[hi]


def monotone_chain(patch, a, b):
    """Unique chain of successive predecessors (or successors) from a to b."""
    A, B = patch.rects[a], patch.rects[b]
    if a == b:
        return PlanePath((a,))
    if not interiors_meet(A.box, B.box):
        raise NotComparable(f"rects {a} and {b} have disjoint interiors")
    if _contains(B.box, A.box, "y") and _contains(A.box, B.box, "x"):
        kind, axis = "V", "x"
    elif _contains(B.box, A.box, "x") and _contains(A.box, B.box, "y"):
        kind, axis = "H", "y"
    else:
        raise NotComparable(f"rects {a} and {b} do not meet monotonically")
    rects, slots = [a], []
    node = A
    while node.id != b:
        if len(rects) > patch.max_depth:
            raise BudgetError("monotone chain exceeded depth budget")
        step = None
        for s in patch.g.slots(node.type, kind):
            child = patch.extend(node, s)
            if _contains(child.box, B.box, axis):
                step = (s, child)
                break
        if step is None:
            raise NotComparable(f"no neighbour of {node.id} contains rect {b}")
        s, child = step
        if child.id != b and child.box == B.box:
            raise NotComparable(f"rect {child.id} has the placement of {b} but is a different rect")
        slots.append(s)
        rects.append(child.id)
        node = child
    return PlanePath(tuple(rects), tuple(slots))


def associated_path(patch, gen):
    """Rectangle path associated to a generalized path (L_0, ..., L_k)."""
    path = PlanePath((gen[0],))
    for a, b in zip(gen, gen[1:]):
        path = concat(path, monotone_chain(patch, a, b))
    return path


# --------------------------------------------------------------- homotopies

def homotopy_B(p, k):
    r = p.rects
    if not (0 <= k and k + 2 < len(r) and r[k] == r[k + 2]):
        raise NotBReducible(f"no back-and-forth at position {k}")
    return PlanePath(r[: k + 1] + r[k + 3:], p.slots[:k] + p.slots[k + 2:])


def b_closure(p):
    """Cancel every back-and-forth, leftmost first.  Returns (path, positions used)."""
    moves = []
    changed = True
    while changed:
        changed = False
        for k in range(len(p.rects) - 2):
            if p.rects[k] == p.rects[k + 2]:
                p = homotopy_B(p, k)
                moves.append(k)
                changed = True
                break
    return p, moves


@dataclass(frozen=True)
class CSite:
    point: tuple
    start: int  # index in the path where L_0 occurs
    k: int
    old: tuple  # generalized path currently present, (L_0, ..., L_k)
    new: tuple  # replacement generalized path from the other cycle

    def describe(self):
        return {"point": [str(x) for x in self.point], "start": self.start, "k": self.k,
                "from": list(self.old), "to": list(self.new)}


def _other_half(cycle, k):
    if k == 4:
        return cycle[:5]
    return cycle[: 5 - k]


def cycle_sites(patch, L0, cache=None):
    """(point, positive cycle, negative cycle) for arc points interior to the sides of L0."""
    cache = {} if cache is None else cache
    if L0 in cache:
        return cache[L0]
    out = []
    box = patch.rects[L0].box
    for side in SIDES:
        try:
            aps = arc_points(patch, L0, side)
        except (CoverError, BudgetError):
            continue
        for ap in aps:
            if ap.degenerate or position(box, ap.point) is None:
                continue
            try:
                cp, cn = arc_point_cycles(patch, ap.point, L0)
            except (CoverError, BudgetError, NotAQuadrantPair):
                continue
            out.append((ap.point, cp, cn))
    cache[L0] = out
    return out


def find_c_sites(patch, p, cache=None):
    sites = []
    for i, L0 in enumerate(p.rects):
        for point, cp, cn in cycle_sites(patch, L0, cache):
            for first, other in ((cp, cn), (cn, cp)):
                for k in range(1, 5):
                    old = first.rects[: k + 1]
                    new = _other_half(other.rects, k)
                    if new[-1] != old[-1]:
                        continue
                    try:
                        seg = associated_path(patch, old)
                    except (NotComparable, BudgetError):
                        continue
                    n = len(seg.rects)
                    if p.rects[i:i + n] == seg.rects:
                        sites.append(CSite(point, i, k, old, new))
    return sites


def homotopy_C(patch, p, site):
    old = associated_path(patch, site.old)
    n = len(old.rects)
    i = site.start
    if p.rects[i:i + n] != old.rects:
        raise NotCApplicable("the cycle segment does not occur at the recorded position")
    if site.new[0] != site.old[0] or site.new[-1] != site.old[-1]:
        raise NotCApplicable("replacement does not share the endpoints of the segment")
    new = associated_path(patch, site.new)
    rects = p.rects[:i] + new.rects + p.rects[i + n:]
    slots = p.slots[:i] + new.slots + p.slots[i + n - 1:]
    return PlanePath(rects, slots)


def swap_site(patch, p, site):
    """Site that undoes `site` on the path produced by it."""
    return CSite(site.point, site.start, site.k, site.new, site.old)


# ---------------------------------------------------------------- reduction

@dataclass(frozen=True)
class ReductionResult:
    status: str  # "trivial" or "exhausted"
    moves: tuple = ()
    final: object = None
    depth: int = 0

    @property
    def trivial(self):
        return self.status == "trivial"


def reduce(patch, p, depth=8, require_closed=True):
    """Eager B-cancellation plus iterative deepening over C moves."""
    if require_closed and not p.closed:
        raise NotClosed("reduce needs a closed path")
    cache = {}
    best = [None]

    def search(path, budget, moves, seen):
        path, bs = b_closure(path)
        moves = moves + tuple(("B", k) for k in bs)
        if best[0] is None or len(path.rects) < len(best[0].rects):
            best[0] = path
        if path.trivial:
            return moves, path
        if budget == 0:
            return None
        key = path.rects
        if seen.get(key, -1) >= budget:
            return None
        seen[key] = budget
        for site in find_c_sites(patch, path, cache):
            try:
                nxt = homotopy_C(patch, path, site)
            except (NotCApplicable, NotComparable, BudgetError):
                continue
            if (nxt.rects[0], nxt.rects[-1]) != (path.rects[0], path.rects[-1]):
                raise GeomTypeError("C move changed endpoints")
            found = search(nxt, budget - 1, moves + (("C", site),), seen)
            if found:
                return found
        return None

    for d in range(depth + 1):
        found = search(p, d, (), {})
        if found:
            moves, final = found
            return ReductionResult("trivial", moves, final, d)
    return ReductionResult("exhausted", (), best[0], depth)
