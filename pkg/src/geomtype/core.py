"""Geometric types: data model, validation and the `.gt` text format."""

import re
from dataclasses import dataclass, field

from .errors import KindError, ParseError


@dataclass(frozen=True, order=True)
class SubrectangleRef:
    kind: str  # "H" or "V"
    rect: int
    slot: int

    def __post_init__(self):
        if self.kind not in ("H", "V"):
            raise KindError(f"kind must be H or V, got {self.kind!r}")

    def __str__(self):
        return f"{self.kind}{self.rect}.{self.slot}"

    @classmethod
    def parse(cls, text):
        m = re.fullmatch(r"([HV])(\d+)\.(\d+)", text.strip())
        if not m:
            raise ParseError(f"bad subrectangle label {text!r}")
        return cls(m.group(1), int(m.group(2)), int(m.group(3)))


def H(i, j):
    return SubrectangleRef("H", i, j)


def V(i, j):
    return SubrectangleRef("V", i, j)


@dataclass(frozen=True)
class GeometricType:
    """(n, h, v, phi, u).  phi maps H-refs to V-refs, u maps H-refs to +-1.

    Construction does not check the axioms: use validate() for that.
    """

    n: int
    h: tuple
    v: tuple
    phi: dict = field(hash=False, compare=False)
    u: dict = field(hash=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "h", tuple(self.h))
        object.__setattr__(self, "v", tuple(self.v))
        object.__setattr__(self, "phi", dict(self.phi))
        object.__setattr__(self, "u", dict(self.u))

    def _key(self):
        return (self.n, self.h, self.v, tuple(sorted(self.phi.items())), tuple(sorted(self.u.items())))

    def __eq__(self, other):
        return isinstance(other, GeometricType) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def hrefs(self):
        return [H(i, j) for i in range(1, self.n + 1) for j in range(1, self.h[i - 1] + 1)]

    def vrefs(self):
        return [V(i, j) for i in range(1, self.n + 1) for j in range(1, self.v[i - 1] + 1)]

    def slots(self, i, kind):
        count = self.h[i - 1] if kind == "H" else self.v[i - 1]
        return [SubrectangleRef(kind, i, j) for j in range(1, count + 1)]

    def phi_inv(self):
        return {b: a for a, b in self.phi.items()}

    def __repr__(self):
        return f"GeometricType(n={self.n}, h={self.h}, v={self.v})"


def make_type(n, h, v, maps):
    """maps: iterable of (H-ref or 'Hi.j', V-ref or 'Vk.l', sign)."""
    phi, u = {}, {}
    for a, b, s in maps:
        a = a if isinstance(a, SubrectangleRef) else SubrectangleRef.parse(a)
        b = b if isinstance(b, SubrectangleRef) else SubrectangleRef.parse(b)
        phi[a] = b
        u[a] = s
    return GeometricType(n, h, v, phi, u)


# The three small types used throughout the docs and tests.
TRIV = make_type(1, (1,), (1,), [("H1.1", "V1.1", 1)])
FULL2 = make_type(1, (2,), (2,), [("H1.1", "V1.1", 1), ("H1.2", "V1.2", 1)])
GOLD = make_type(2, (2, 1), (2, 1), [("H1.1", "V1.1", 1), ("H1.2", "V2.1", 1), ("H2.1", "V1.2", 1)])


@dataclass(frozen=True)
class ValidationReport:
    problems: tuple = ()

    @property
    def ok(self):
        return not self.problems

    def __bool__(self):
        return self.ok

    def __str__(self):
        return "valid" if self.ok else "\n".join(self.problems)


def validate(g):
    problems = []
    n = g.n
    if not isinstance(n, int) or n < 1:
        return ValidationReport((f"n must be a positive integer, got {n!r}",))
    if len(g.h) != n or len(g.v) != n:
        problems.append(f"expected {n} values of h and v, got {len(g.h)} and {len(g.v)}")
        return ValidationReport(tuple(problems))
    for name, seq in (("h", g.h), ("v", g.v)):
        for i, x in enumerate(seq, 1):
            if not isinstance(x, int) or x < 1:
                problems.append(f"{name}_{i} must be a positive integer, got {x!r}")
    if problems:
        return ValidationReport(tuple(problems))
    if sum(g.h) != sum(g.v):
        problems.append(f"sum mismatch: sum h = {sum(g.h)} != sum v = {sum(g.v)}")

    def in_range(r, kind):
        if r.kind != kind or not 1 <= r.rect <= n:
            return False
        bound = g.h[r.rect - 1] if kind == "H" else g.v[r.rect - 1]
        return 1 <= r.slot <= bound

    hset = set(g.hrefs())
    vset = set(g.vrefs())
    images = {}
    for a, b in sorted(g.phi.items()):
        if not in_range(a, "H"):
            problems.append(f"phi defined on out-of-range or non-H slot {a}")
        if not in_range(b, "V"):
            problems.append(f"phi({a}) = {b} is an out-of-range or non-V slot")
        images.setdefault(b, []).append(a)
    for a in sorted(hset - set(g.phi)):
        problems.append(f"phi undefined on {a}")
    for b, srcs in sorted(images.items()):
        if len(srcs) > 1:
            problems.append(f"phi not injective: {', '.join(map(str, srcs))} all map to {b}")
    for b in sorted(vset - set(images)):
        problems.append(f"phi not surjective: {b} has no preimage")
    for a in sorted(hset - set(g.u)):
        problems.append(f"u undefined on {a}")
    for a, s in sorted(g.u.items()):
        if a not in hset:
            problems.append(f"u defined on out-of-range slot {a}")
        if s not in (1, -1) or isinstance(s, bool):
            problems.append(f"u({a}) = {s!r} is not +1 or -1")
    return ValidationReport(tuple(problems))


def return_image(g, r):
    if r.kind != "H":
        raise KindError(f"return_image expects an H slot, got {r}")
    return g.phi[r], g.u[r]


def inverse_image(g, r):
    if r.kind != "V":
        raise KindError(f"inverse_image expects a V slot, got {r}")
    for a, b in g.phi.items():
        if b == r:
            return a, g.u[a]
    raise KeyError(str(r))


# ---------------------------------------------------------------- text format

_N_RE = re.compile(r"n\s*=\s*(\d+)$")
_RECT_RE = re.compile(r"rect\s+(\d+)\s+h\s*=\s*(\d+)\s+v\s*=\s*(\d+)$")
_MAP_RE = re.compile(r"map\s+([HV]\d+\.\d+)\s+([HV]\d+\.\d+)\s+([+-])$")


def _content_lines(text):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        stripped = line.strip()
        if stripped:
            col = len(line) - len(line.lstrip()) + 1
            yield lineno, col, stripped


def parse(text, _extra=None):
    """Parse `.gt` text.  Semantic problems are left for validate()."""
    n = None
    hv = {}
    phi, u = {}, {}
    for lineno, col, line in _content_lines(text):
        if n is None:
            m = _N_RE.match(line)
            if not m:
                raise ParseError("expected 'n=<int>'", lineno, col)
            n = int(m.group(1))
            continue
        m = _RECT_RE.match(line)
        if m:
            i = int(m.group(1))
            if i in hv:
                raise ParseError(f"rectangle {i} declared twice", lineno, col)
            if phi:
                raise ParseError("rect lines must precede map lines", lineno, col)
            hv[i] = (int(m.group(2)), int(m.group(3)))
            continue
        m = _MAP_RE.match(line)
        if m:
            a = SubrectangleRef.parse(m.group(1))
            b = SubrectangleRef.parse(m.group(2))
            if a.kind != "H" or b.kind != "V":
                raise ParseError("map lines read 'map H<i>.<j> V<k>.<l> <+|->'", lineno, col)
            if a in phi:
                raise ParseError(f"{a} mapped twice", lineno, col)
            phi[a] = b
            u[a] = 1 if m.group(3) == "+" else -1
            continue
        if _extra is not None and _extra(lineno, col, line):
            continue
        raise ParseError(f"unrecognised line {line!r}", lineno, col)
    if n is None:
        raise ParseError("empty input: expected 'n=<int>'", 1, 1)
    if sorted(hv) != list(range(1, n + 1)):
        raise ParseError(f"expected rect lines for 1..{n}, got {sorted(hv)}")
    h = tuple(hv[i][0] for i in range(1, n + 1))
    v = tuple(hv[i][1] for i in range(1, n + 1))
    return GeometricType(n, h, v, phi, u)


def serialize(g):
    """`.gt` text with maps sorted by (i, j)."""
    lines = [f"n={g.n}"]
    for i in range(1, g.n + 1):
        lines.append(f"rect {i} h={g.h[i - 1]} v={g.v[i - 1]}")
    for a in sorted(g.phi, key=lambda r: (r.rect, r.slot)):
        lines.append(f"map {a} {g.phi[a]} {'+' if g.u.get(a, 1) > 0 else '-'}")
    return "\n".join(lines) + "\n"


def load(path):
    if path == "-":
        import sys
        return parse(sys.stdin.read())
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())
