"""Equality and equivalence of geometric types, generator moves, classes and canonical forms."""

import itertools
from dataclasses import dataclass

from .core import GeometricType, SubrectangleRef, parse, serialize
from .errors import IllegalMove


@dataclass(frozen=True)
class EquivalenceWitness:
    """Witness (sigma, eps, eps') from a source type with shape (h, v).

    sigma[i-1] is the new index of rectangle i; eps_prime = c * eps.
    """

    sigma: tuple
    eps: tuple
    c: int
    h: tuple
    v: tuple

    @property
    def eps_prime(self):
        return tuple(self.c * e for e in self.eps)

    @property
    def n(self):
        return len(self.sigma)

    def map_ref(self, r):
        i = r.rect
        j = self.sigma[i - 1]
        if r.kind == "H":
            slot = r.slot if self.eps[i - 1] > 0 else self.h[i - 1] + 1 - r.slot
        else:
            slot = r.slot if self.c * self.eps[i - 1] > 0 else self.v[i - 1] + 1 - r.slot
        return SubrectangleRef(r.kind, j, slot)

    def inverse(self):
        n = self.n
        sig = [0] * n
        eps = [0] * n
        h = [0] * n
        v = [0] * n
        for i in range(n):
            j = self.sigma[i] - 1
            sig[j] = i + 1
            eps[j] = self.eps[i]
            h[j] = self.h[i]
            v[j] = self.v[i]
        return EquivalenceWitness(tuple(sig), tuple(eps), self.c, tuple(h), tuple(v))

    def then(self, other):
        """Composite witness: first self, then other."""
        sig = tuple(other.sigma[s - 1] for s in self.sigma)
        eps = tuple(e * other.eps[s - 1] for e, s in zip(self.eps, self.sigma))
        return EquivalenceWitness(sig, eps, self.c * other.c, self.h, self.v)

    def is_equality(self):
        return self.c == 1 and all(e == 1 for e in self.eps)

    def to_json(self):
        return {"sigma": list(self.sigma), "eps": list(self.eps), "eps_prime": list(self.eps_prime)}


def identity_witness(g):
    return EquivalenceWitness(tuple(range(1, g.n + 1)), (1,) * g.n, 1, g.h, g.v)


def apply_witness(g, w):
    n = g.n
    h = [0] * n
    v = [0] * n
    for i in range(n):
        j = w.sigma[i] - 1
        h[j] = g.h[i]
        v[j] = g.v[i]
    phi, u = {}, {}
    for a, b in g.phi.items():
        na = w.map_ref(a)
        phi[na] = w.map_ref(b)
        u[na] = w.eps[a.rect - 1] * w.eps[b.rect - 1] * g.u[a]
    return GeometricType(n, tuple(h), tuple(v), phi, u)


def _search(g1, g2, equal_only):
    """Yield every witness from g1 to g2 (backtracking over rectangles)."""
    n = g1.n
    if n != g2.n or sorted(zip(g1.h, g1.v)) != sorted(zip(g2.h, g2.v)):
        return
    by_rect = {i: [a for a in g1.phi if a.rect == i] for i in range(1, n + 1)}
    # visit rectangles so that each is adjacent to earlier ones where possible
    order = []
    seen = set()
    for start in range(1, n + 1):
        stack = [start]
        while stack:
            i = stack.pop(0)
            if i in seen:
                continue
            seen.add(i)
            order.append(i)
            stack.extend(sorted({g1.phi[a].rect for a in by_rect[i]} | {a.rect for a, b in g1.phi.items() if b.rect == i}))
    sigma = [0] * n
    eps = [0] * n
    signs = (1,) if equal_only else (1, -1)

    def consistent(i, c):
        w = EquivalenceWitness(tuple(sigma), tuple(eps), c, g1.h, g1.v)
        for a, b in g1.phi.items():
            if sigma[a.rect - 1] == 0 or sigma[b.rect - 1] == 0:
                continue
            if a.rect != i and b.rect != i:
                continue
            na = w.map_ref(a)
            if g2.phi.get(na) != w.map_ref(b):
                return False
            if g2.u.get(na) != eps[a.rect - 1] * eps[b.rect - 1] * g1.u[a]:
                return False
        return True

    def rec(k, c, used):
        if k == n:
            yield EquivalenceWitness(tuple(sigma), tuple(eps), c, g1.h, g1.v)
            return
        i = order[k]
        for j in range(1, n + 1):
            if j in used or (g2.h[j - 1], g2.v[j - 1]) != (g1.h[i - 1], g1.v[i - 1]):
                continue
            for e in signs:
                sigma[i - 1], eps[i - 1] = j, e
                if consistent(i, c):
                    yield from rec(k + 1, c, used | {j})
                sigma[i - 1], eps[i - 1] = 0, 0

    for c in signs:
        yield from rec(0, c, frozenset())


def all_witnesses(g1, g2, equal_only=False):
    return list(_search(g1, g2, equal_only))


def is_equal(g1, g2):
    w = next(_search(g1, g2, True), None)
    return w is not None, w


def is_equivalent(g1, g2):
    w = next(_search(g1, g2, False), None)
    return w is not None, w


# ----------------------------------------------------------------- moves

@dataclass(frozen=True)
class Reindex:
    sigma: tuple


@dataclass(frozen=True)
class FlipBoth:
    i: int


@dataclass(frozen=True)
class FlipAllStable:
    pass


@dataclass(frozen=True)
class FlipAllUnstable:
    pass


def move_witness(g, m):
    n = g.n
    ident = tuple(range(1, n + 1))
    if isinstance(m, Reindex):
        sigma = tuple(m.sigma)
        if sorted(sigma) != list(ident):
            raise IllegalMove(f"{sigma} is not a permutation of 1..{n}")
        for i in range(n):
            j = sigma[i] - 1
            if (g.h[i], g.v[i]) != (g.h[j], g.v[j]):
                raise IllegalMove(f"reindexing {i + 1}->{j + 1} mismatches (h, v) pairs")
        return EquivalenceWitness(sigma, (1,) * n, 1, g.h, g.v)
    if isinstance(m, FlipBoth):
        if not 1 <= m.i <= n:
            raise IllegalMove(f"no rectangle {m.i}")
        eps = tuple(-1 if i == m.i else 1 for i in ident)
        return EquivalenceWitness(ident, eps, 1, g.h, g.v)
    if isinstance(m, FlipAllStable):
        return EquivalenceWitness(ident, (1,) * n, -1, g.h, g.v)
    if isinstance(m, FlipAllUnstable):
        return EquivalenceWitness(ident, (-1,) * n, -1, g.h, g.v)
    raise IllegalMove(f"unknown move {m!r}")


def apply_move(g, m):
    return apply_witness(g, move_witness(g, m))


def legal_moves(g):
    moves = [FlipBoth(i) for i in range(1, g.n + 1)] + [FlipAllStable(), FlipAllUnstable()]
    for i in range(g.n):
        for j in range(i + 1, g.n):
            if (g.h[i], g.v[i]) == (g.h[j], g.v[j]):
                sigma = list(range(1, g.n + 1))
                sigma[i], sigma[j] = sigma[j], sigma[i]
                moves.append(Reindex(tuple(sigma)))
    return moves


# ----------------------------------------------------------- canonical forms

def _sorted_reindexings(g):
    """Pair-preserving reindexings that put the rect header lines in lexicographic order."""
    keys = [f"h={g.h[i]} v={g.v[i]}" for i in range(g.n)]
    order = sorted(range(g.n), key=lambda i: keys[i])
    groups = []
    for i in order:
        if groups and keys[groups[-1][0]] == keys[i]:
            groups[-1].append(i)
        else:
            groups.append([i])
    for choice in itertools.product(*(itertools.permutations(gr) for gr in groups)):
        sigma = [0] * g.n
        pos = 1
        for gr in choice:
            for i in gr:
                sigma[i] = pos
                pos += 1
        yield tuple(sigma)


def equality_key(g):
    """(least serialization over pair-preserving reindexings, the reindexing achieving it)."""
    best = None
    for sigma in _sorted_reindexings(g):
        w = EquivalenceWitness(sigma, (1,) * g.n, 1, g.h, g.v)
        text = serialize(apply_witness(g, w))
        if best is None or text < best[0]:
            best = (text, sigma)
    return best


def canonical_witness(g):
    """Witness from g to its canonical form."""
    best = None
    for c in (1, -1):
        for eps in itertools.product((1, -1), repeat=g.n):
            w0 = EquivalenceWitness(tuple(range(1, g.n + 1)), eps, c, g.h, g.v)
            g0 = apply_witness(g, w0)
            text, sigma = equality_key(g0)
            if best is None or text < best[0]:
                best = (text, w0.then(EquivalenceWitness(sigma, (1,) * g.n, 1, g0.h, g0.v)))
    return best[1]


def canonical_form(g):
    return apply_witness(g, canonical_witness(g))


def canonical_text(g):
    return serialize(canonical_form(g))


def enumerate_class(g):
    """Closure of {g} under the generator moves, one representative per equality class."""
    start_key = equality_key(g)[0]
    seen = {start_key: g}
    queue = [g]
    while queue:
        cur = queue.pop()
        for m in legal_moves(cur):
            nxt = apply_move(cur, m)
            key = equality_key(nxt)[0]
            if key not in seen:
                seen[key] = nxt
                queue.append(nxt)
    return [parse(k) for k in sorted(seen)]
