"""Exact arithmetic in Q(lam) for a real algebraic number lam of small degree.

Elements are coefficient vectors over the power basis 1, lam, ..., lam^(d-1).
Signs are decided by interval evaluation on an isolating interval of lam that
is bisected on demand, so comparisons are exact (no tolerance anywhere).
"""

from fractions import Fraction

import sympy


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _polymul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _polysub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def _polydivmod(a, b):
    a = _trim(a)
    b = _trim(b)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        f = r[-1] / b[-1]
        q[shift] = f
        for i, y in enumerate(b):
            r[i + shift] -= f * y
        r = _trim(r)
    return _trim(q), r


def _eval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _imul(a, b):
    prods = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(prods), max(prods))


class NumberField:
    """Q(lam) where lam is the largest real root of an irreducible monic polynomial."""

    def __init__(self, minpoly):
        poly = [Fraction(c) for c in minpoly]
        poly = _trim(poly)
        lead = poly[-1]
        self.minpoly = tuple(c / lead for c in poly)
        self.degree = len(self.minpoly) - 1
        if self.degree < 1:
            raise ValueError("minimal polynomial must have degree >= 1")
        if self.degree == 1:
            root = -self.minpoly[0]
            self._lo = self._hi = root
        else:
            x = sympy.Symbol("x")
            sp = sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in self.minpoly])), x)
            if not sp.is_irreducible:
                raise ValueError("minimal polynomial is not irreducible over Q")
            ivs = sp.intervals()
            if not ivs:
                raise ValueError("polynomial has no real root")
            (lo, hi), _ = max(ivs, key=lambda t: t[0][1])
            self._lo = Fraction(int(lo.p), int(lo.q))
            self._hi = Fraction(int(hi.p), int(hi.q))
            if self._lo == self._hi:
                raise ValueError("irreducible polynomial of degree >= 2 has a rational root")
        self._slo = self._sign_poly(self._lo)
        self._powers = {}
        while self._hi - self._lo > Fraction(1, 2**70) * max(1, abs(self._lo)):
            self.refine()
        self.approx = float(self._lo)

    def _sign_poly(self, x):
        v = _eval(self.minpoly, x)
        return (v > 0) - (v < 0)

    def refine(self):
        if self._lo == self._hi:
            return
        mid = (self._lo + self._hi) / 2
        s = self._sign_poly(mid)
        if s == 0:
            self._lo = self._hi = mid
        elif s == self._slo:
            self._lo = mid
        else:
            self._hi = mid

    @property
    def interval(self):
        return self._lo, self._hi

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.minpoly == other.minpoly

    def __hash__(self):
        return hash(self.minpoly)

    def __repr__(self):
        return f"NumberField({[str(c) for c in self.minpoly]})"

    # element constructors
    def __call__(self, value):
        if isinstance(value, FieldElement):
            return value
        if isinstance(value, (list, tuple)):
            return FieldElement(self, value)
        return FieldElement(self, [Fraction(value)])

    @property
    def gen(self):
        if self.degree == 1:
            return FieldElement(self, [self._lo])
        return FieldElement(self, [0, 1])

    def one(self):
        return FieldElement(self, [1])

    def zero(self):
        return FieldElement(self, [])

    def gen_power(self, m):
        if m not in self._powers:
            self._powers[m] = self.gen ** m
        return self._powers[m]

    def reduce(self, poly):
        _, r = _polydivmod(poly, list(self.minpoly))
        return r


class FieldElement:
    __slots__ = ("field", "c", "_hash")

    def __init__(self, field, coeffs):
        self.field = field
        p = field.reduce([Fraction(x) for x in coeffs]) if len(coeffs) > field.degree else _trim(Fraction(x) for x in coeffs)
        self.c = tuple(p) + (Fraction(0),) * (field.degree - len(p))
        self._hash = None

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, [other])
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, [a + b for a, b in zip(self.c, o.c)])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, [-a for a in self.c])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, [a - b for a, b in zip(self.c, o.c)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, [a * other for a in self.c])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, _polymul(_trim(self.c), _trim(o.c)))

    __rmul__ = __mul__

    def inverse(self):
        a = _trim(self.c)
        if not a:
            raise ZeroDivisionError("inverse of zero in number field")
        # extended Euclid: find s with s*a = 1 mod minpoly
        r0, r1 = list(self.field.minpoly), a
        s0, s1 = [], [Fraction(1)]
        while r1:
            q, r = _polydivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _polysub(s0, _polymul(q, s1))
        # r0 is a nonzero constant because minpoly is irreducible
        k = r0[0]
        return FieldElement(self.field, [x / k for x in s0])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, [a / other for a in self.c])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, m):
        if m < 0:
            return self.inverse() ** (-m)
        out = FieldElement(self.field, [1])
        base = self
        while m:
            if m & 1:
                out = out * base
            base = base * base
            m >>= 1
        return out

    def is_zero(self):
        return not any(self.c)

    def sign(self):
        p = _trim(self.c)
        if not p:
            return 0
        f = self.field
        # float filter: the error of this evaluation is far below `margin`, so a clear sign is exact
        try:
            v, margin, xk = 0.0, 0.0, 1.0
            for coef in p:
                fc = coef.numerator / coef.denominator
                v += fc * xk
                margin += abs(fc) * max(1.0, abs(xk))
                xk *= f.approx
            if abs(v) > 1e-9 * margin:
                return 1 if v > 0 else -1
        except OverflowError:
            pass
        while True:
            lo, hi = f.interval
            if lo == hi:
                v = _eval(p, lo)
                return (v > 0) - (v < 0)
            acc = (Fraction(0), Fraction(0))
            for coef in reversed(p):
                acc = _imul(acc, (lo, hi))
                acc = (acc[0] + coef, acc[1] + coef)
            if acc[0] > 0:
                return 1
            if acc[1] < 0:
                return -1
            f.refine()

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, FieldElement) else other
        if o is NotImplemented:
            return False
        return self.c == o.c

    def __hash__(self):
        if self._hash is None:
            # rational elements compare equal to ints and Fractions, so hash like them
            self._hash = hash(self.c[0]) if self.is_rational() else hash(self.c)
        return self._hash

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self):
        p = _trim(self.c)
        if not p:
            return 0.0
        f = self.field
        while True:
            lo, hi = f.interval
            if hi - lo <= Fraction(1, 10**22) * max(1, abs(lo)):
                break
            f.refine()
        return float(_eval(p, (lo + hi) / 2))

    def is_rational(self):
        return not any(self.c[1:])

    def as_fraction(self):
        if not self.is_rational():
            raise ValueError("element is irrational")
        return self.c[0]

    def to_json(self):
        """Coefficient vector over 1, lam, lam^2, ... as 'p/q' strings."""
        return [str(x) for x in self.c]

    def __repr__(self):
        terms = []
        for i, x in enumerate(self.c):
            if x == 0:
                continue
            terms.append(str(x) if i == 0 else f"{x}*L" if i == 1 else f"{x}*L^{i}")
        return " + ".join(terms) if terms else "0"
