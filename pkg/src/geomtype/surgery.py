"""Prong arithmetic for surgeries along periodic orbits.

Prong data (n, k): n prongs, rotation offset k in [1, n].  A surgery matrix
(a, b, c, d) with ad - bc = 1 transforms it by

    n2 = -b (n1 - k1) + d n1
    n2 - k2 = a (n1 - k1) - c n1

i.e. the vector (n - k, n) is multiplied by [[a, -c], [-b, d]].
"""

import math
from dataclasses import dataclass

from .errors import DetError, FormatError


@dataclass(frozen=True)
class ProngData:
    n: int
    k: int

    def __post_init__(self):
        if self.n < 2:
            raise FormatError(f"prong count must be >= 2, got {self.n}")
        if not 1 <= self.k <= self.n:
            raise FormatError(f"offset must lie in [1, {self.n}], got {self.k}")

    @classmethod
    def normalized(cls, n, k):
        """Accepts any integer k and folds it into [1, n] by k <- ((k - 1) mod n) + 1."""
        if n < 2:
            raise FormatError(f"prong count must be >= 2, got {n}")
        return cls(n, (k - 1) % n + 1)

    @property
    def gcd(self):
        return math.gcd(self.n, self.k)


@dataclass(frozen=True)
class SurgeryMatrix:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise DetError(f"det({self.a},{self.b},{self.c},{self.d}) = {self.a * self.d - self.b * self.c} != 1")

    def __matmul__(self, other):
        return SurgeryMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self):
        return SurgeryMatrix(self.d, -self.b, -self.c, self.a)


IDENTITY = SurgeryMatrix(1, 0, 0, 1)


@dataclass(frozen=True)
class ProngResult:
    status: str  # "valid", "one-prong" or "invalid"
    n2: int
    k2: int
    data: object = None
    reason: str = ""

    @property
    def valid(self):
        return self.status == "valid"

    def to_json(self):
        out = {"status": self.status, "n2": self.n2, "k2": self.k2,
               "gcd": math.gcd(self.n2, self.k2) if self.valid else None}
        if self.reason:
            out["reason"] = self.reason
        return out


def prong_after_surgery(p, A):
    x = p.n - p.k
    n2 = -A.b * x + A.d * p.n
    k2 = n2 - (A.a * x - A.c * p.n)
    if n2 == 1:
        return ProngResult("one-prong", n2, k2, None, "surgery would create a 1-prong orbit")
    if n2 < 2:
        return ProngResult("invalid", n2, k2, None, f"n2 = {n2} < 1")
    if not 1 <= k2 <= n2:
        return ProngResult("invalid", n2, k2, None, f"k2 = {k2} outside [1, {n2}]")
    return ProngResult("valid", n2, k2, ProngData(n2, k2))


def meridian_parallel_check(p, coeffs):
    """True iff coeffs = (m_exp, p_exp) writes P = m_exp*m + p_exp*p, i.e. (-(n-k)/gcd, n/gcd)."""
    m_exp, p_exp = coeffs
    if not all(isinstance(x, int) for x in (m_exp, p_exp)):
        raise FormatError("meridian/parallel exponents must be integers")
    d = p.gcd
    return (m_exp, p_exp) == (-(p.n - p.k) // d, p.n // d)


def gcd_invariance_check(p, A):
    res = prong_after_surgery(p, A)
    if not res.valid:
        raise ValueError("gcd invariance is only asserted for valid outcomes")
    return p.gcd == res.data.gcd
