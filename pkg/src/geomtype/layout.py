"""Geometrisation of a geometric type: concrete placements of rectangles and slots."""

from dataclasses import dataclass
from fractions import Fraction

from .symbolic import perron, spectral_radius, transition_matrix


@dataclass(frozen=True)
class Layout:
    mode: str
    lam: object
    widths: tuple
    heights: tuple
    hslots: dict  # H-ref -> (y_lo, y_hi)
    vslots: dict  # V-ref -> (x_lo, x_hi)
    field: object = None
    exact: bool = True

    def hbox(self, r):
        y0, y1 = self.hslots[r]
        return (0, self.widths[r.rect - 1], y0, y1)

    def vbox(self, r):
        x0, x1 = self.vslots[r]
        return (x0, x1, 0, self.heights[r.rect - 1])


@dataclass(frozen=True)
class Affine:
    """(x, y) -> (tx + sx*x, ty + sy*y)."""

    sx: object
    sy: object
    tx: object
    ty: object

    def __call__(self, x, y):
        return (self.tx + self.sx * x, self.ty + self.sy * y)

    def after(self, f):
        """self o f."""
        return Affine(self.sx * f.sx, self.sy * f.sy, self.tx + self.sx * f.tx, self.ty + self.sy * f.ty)

    def inverse(self):
        return Affine(1 / self.sx, 1 / self.sy, -self.tx / self.sx, -self.ty / self.sy)


def layout(g, mode="perron"):
    if mode == "perron":
        return _perron_layout(g)
    if mode == "uniform":
        return _uniform_layout(g)
    raise ValueError(f"unknown layout mode {mode!r}")


def _stack(items, start):
    out = {}
    pos = start
    for ref, size in items:
        out[ref] = (pos, pos + size)
        pos = pos + size
    return out


def _perron_layout(g):
    pd = perron(g)
    lam, w, t = pd.lam, pd.w, pd.t
    zero = pd.field.zero() if pd.exact else 0.0
    inv = g.phi_inv()
    hslots, vslots = {}, {}
    for i in range(1, g.n + 1):
        hs = [(r, t[g.phi[r].rect - 1] / lam) for r in g.slots(i, "H")]
        vs = [(r, w[inv[r].rect - 1] / lam) for r in g.slots(i, "V")]
        hslots.update(_stack(hs, zero))
        vslots.update(_stack(vs, zero))
    return Layout("perron", lam, tuple(w), tuple(t), hslots, vslots, pd.field, pd.exact)


def _uniform_layout(g):
    def bands(m):
        return [(Fraction(2 * k - 1, 2 * m + 1), Fraction(2 * k, 2 * m + 1)) for k in range(1, m + 1)]

    hslots, vslots = {}, {}
    for i in range(1, g.n + 1):
        for r, b in zip(g.slots(i, "H"), bands(g.h[i - 1])):
            hslots[r] = b
        for r, b in zip(g.slots(i, "V"), bands(g.v[i - 1])):
            vslots[r] = b
    ones = tuple(Fraction(1) for _ in range(g.n))
    lam = spectral_radius(transition_matrix(g).M)
    return Layout("uniform", lam, ones, ones, hslots, vslots, None, False)


def return_map(lay, g, href):
    """Affine map of the layout sending the band of href onto the band of phi(href)."""
    vref, sign = g.phi[href], g.u[href]
    hx0, hx1, hy0, hy1 = lay.hbox(href)
    vx0, vx1, vy0, vy1 = lay.vbox(vref)
    sx = (vx1 - vx0) / (hx1 - hx0)
    sy = (vy1 - vy0) / (hy1 - hy0)
    if sign > 0:
        return Affine(sx, sy, vx0 - sx * hx0, vy0 - sy * hy0)
    return Affine(-sx, -sy, vx1 + sx * hx0, vy1 + sy * hy0)
