"""Geometric types with cycles: closed G-paths attached to a type, their checks and equivalence."""

from dataclasses import dataclass

from .core import parse, serialize
from .equivalence import all_witnesses, canonical_form
from .errors import ParseError
from .paths import GPath, gpath_problems, transport


@dataclass(frozen=True)
class GeometricTypeWithCycles:
    g: object
    A: frozenset

    def __post_init__(self):
        object.__setattr__(self, "A", frozenset(self.A))

    def problems(self):
        out = []
        for q in sorted(self.A, key=str):
            out += [f"cycle {q}: {p}" for p in gpath_problems(self.g, q)]
            if not q.closed:
                out.append(f"cycle {q}: not closed")
        return out


def rotations(q):
    m = len(q.slots)
    if m == 0:
        return [q]
    out = []
    for k in range(m):
        idx = q.indices[k:-1] + q.indices[:k] + (q.indices[k],)
        out.append(GPath(idx, q.slots[k:] + q.slots[:k]))
    return out


def rotation_canonical(q):
    if not q.closed:
        return q
    return min(rotations(q), key=str)


@dataclass(frozen=True)
class CycleStats:
    length: int
    runs: int  # maximal monotone runs, counted cyclically for closed paths
    canonical: GPath


@dataclass(frozen=True)
class CycleReport:
    closed: bool
    problems: tuple
    linear_runs: int
    stats: CycleStats

    @property
    def cycle_shaped(self):
        return self.closed and not self.problems and self.stats.runs >= 2 and self.stats.runs % 2 == 0


def _runs(kinds, cyclic):
    if not kinds:
        return 0
    runs = 1 + sum(1 for a, b in zip(kinds, kinds[1:]) if a != b)
    if cyclic and runs > 1 and kinds[0] == kinds[-1]:
        runs -= 1
    return runs


def check_cycle(g, q):
    """Structural checks: closedness, legality of each step and the monotone-run decomposition.

    A V-slot step goes to a predecessor (decreasing), an H-slot step to a successor.
    """
    problems = tuple(gpath_problems(g, q))
    kinds = [s.kind for s in q.slots]
    linear = _runs(kinds, False)
    cyclic = _runs(kinds, q.closed)
    stats = CycleStats(len(q.slots), cyclic, rotation_canonical(q))
    return CycleReport(q.closed, problems, linear, stats)


def _key(q, mode):
    return str(rotation_canonical(q)) if mode == "rotation" else str(q)


def cycles_equivalent(a1, a2, mode="rotation"):
    if len(a1.A) != len(a2.A):
        return False, None
    target = {_key(q, mode) for q in a2.A}
    for w in all_witnesses(a1.g, a2.g):
        if {_key(transport(w, q), mode) for q in a1.A} == target:
            return True, w
    return False, None


def canonical_with_cycles(a):
    c = canonical_form(a.g)
    best = None
    for w in all_witnesses(a.g, c):
        key = tuple(sorted(_key(transport(w, q), "rotation") for q in a.A))
        if best is None or key < best:
            best = key
    return GeometricTypeWithCycles(c, frozenset(GPath.parse(s) for s in best))


# ------------------------------------------------------------------ format

def parse_gtc(text):
    cycles = []

    def extra(lineno, col, line):
        if not line.startswith("cycle:"):
            return False
        try:
            cycles.append(GPath.parse(line[len("cycle:"):]))
        except (ValueError, ParseError) as e:
            raise ParseError(f"bad cycle line: {e}", lineno, col)
        return True

    g = parse(text, _extra=extra)
    return GeometricTypeWithCycles(g, frozenset(cycles))


def serialize_gtc(a):
    lines = [serialize(a.g).rstrip("\n")]
    for s in sorted(str(rotation_canonical(q)) for q in a.A):
        lines.append(f"cycle: {s}")
    return "\n".join(lines) + "\n"
