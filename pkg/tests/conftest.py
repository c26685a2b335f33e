import random
import sys
from pathlib import Path

from hypothesis import settings
from hypothesis import strategies as st

from geomtype.core import GeometricType, H, V
from geomtype.symbolic import structure

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("repeatable", derandomize=True, deadline=None)
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile("repeatable")

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE = {}


def random_type(rng, n_max=3, slot_max=3):
    """A random valid geometric type."""
    n = rng.randint(1, n_max)
    h = [rng.randint(1, slot_max) for _ in range(n)]
    # v: same total, each entry in [1, slot_max]
    v = [1] * n
    for _ in range(sum(h) - n):
        v[rng.choice([i for i in range(n) if v[i] < slot_max])] += 1
    hs = [H(i + 1, j + 1) for i in range(n) for j in range(h[i])]
    vs = [V(i + 1, j + 1) for i in range(n) for j in range(v[i])]
    rng.shuffle(vs)
    return GeometricType(n, tuple(h), tuple(v), dict(zip(hs, vs)), {a: rng.choice((1, -1)) for a in hs})


def random_irreducible(rng, n_max=3, slot_max=3):
    while True:
        g = random_type(rng, n_max, slot_max)
        if structure(g).irreducible:
            return g


@st.composite
def types(draw, n_max=3, slot_max=3):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_type(random.Random(seed), n_max, slot_max)


@st.composite
def irreducible_types(draw, n_max=3, slot_max=3):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_irreducible(random.Random(seed), n_max, slot_max)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
