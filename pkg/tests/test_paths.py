import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geomtype.core import FULL2, GOLD, H, V
from geomtype.cover import explore, origin
from geomtype.equivalence import apply_witness, legal_moves, move_witness
from geomtype.errors import CoverError, NotBReducible, NotCApplicable, NotClosed, NotComparable
from geomtype.paths import (
    CSite,
    GPath,
    PlanePath,
    associated_path,
    b_closure,
    check_plane_path,
    concat,
    find_c_sites,
    gpath_problems,
    homotopy_B,
    homotopy_C,
    lift,
    monotone_chain,
    path_from_rects,
    project,
    reduce,
    reverse,
    transport,
)


def test_plane_path_shape():
    with pytest.raises(ValueError):
        PlanePath((0, 1), ())
    p = PlanePath((0,))
    assert p.trivial and p.closed and len(p) == 0


def test_lift_project_round_trip():
    patch, r = origin(GOLD, 1)
    q = GPath.parse("1 H1.2 2 H2.1 1 V1.2 2")
    p = lift(patch, q, r)
    assert check_plane_path(patch, p)
    assert project(patch, p) == q
    assert path_from_rects(patch, p.rects) == p


def test_lift_type_mismatch():
    patch, r = origin(GOLD, 1)
    with pytest.raises(ValueError):
        lift(patch, GPath.parse("2 H2.1 1"), r)


def test_path_from_non_neighbours():
    patch, r = origin(GOLD, 1)
    a = patch.extend(r, V(1, 1))
    b = patch.extend(a, V(1, 1))
    with pytest.raises(CoverError):
        path_from_rects(patch, (r.id, b.id))


def test_gpath_text():
    q = GPath.parse("1 H1.1 1 V1.2 2")
    assert str(q) == "1 H1.1 1 V1.2 2"
    assert not q.closed
    with pytest.raises(ValueError):
        GPath.parse("1 H1.1")


def test_gpath_problems():
    assert gpath_problems(GOLD, GPath.parse("1 H1.2 2 H2.1 1")) == []
    assert gpath_problems(GOLD, GPath.parse("1 H1.2 1"))  # leads to 2
    assert gpath_problems(GOLD, GPath.parse("1 H2.1 1"))  # wrong rectangle
    assert gpath_problems(GOLD, GPath.parse("2 H2.2 1"))  # out of range


def test_concat_and_reverse():
    patch, r = origin(FULL2, 1)
    p = lift(patch, GPath.parse("1 H1.1 1 V1.2 1"), r)
    back = reverse(patch, p)
    assert check_plane_path(patch, back)
    loop = concat(p, back)
    assert loop.closed
    reduced, moves = b_closure(loop)
    assert reduced.trivial and len(moves) == 2
    with pytest.raises(ValueError):
        concat(back, back)


def test_homotopy_B():
    p = PlanePath((0, 1, 0, 2), (V(1, 1), H(1, 1), V(1, 2)))
    assert homotopy_B(p, 0) == PlanePath((0, 2), (V(1, 2),))
    with pytest.raises(NotBReducible):
        homotopy_B(p, 1)


def test_monotone_chain():
    patch, r = origin(FULL2, 1)
    a = patch.extend(r, V(1, 2))
    b = patch.extend(a, V(1, 1))
    chain = monotone_chain(patch, r.id, b.id)
    assert chain.rects == (r.id, a.id, b.id)
    assert chain.slots == (V(1, 2), V(1, 1))
    assert associated_path(patch, (r.id, b.id)) == chain
    assert monotone_chain(patch, r.id, r.id).trivial


def test_monotone_chain_disjoint():
    patch, r = origin(FULL2, 1)
    a = patch.extend(r, V(1, 1))
    b = patch.extend(r, V(1, 2))
    with pytest.raises(NotComparable):
        monotone_chain(patch, a.id, b.id)


def test_reduce_requires_closed():
    patch, r = origin(FULL2, 1)
    p = lift(patch, GPath.parse("1 H1.1 1"), r)
    with pytest.raises(NotClosed):
        reduce(patch, p)
    assert not reduce(patch, p, depth=1, require_closed=False).trivial


def test_homotopy_C_checks_the_segment():
    patch, r = origin(FULL2, 1)
    explore(patch, r, 1)
    p = lift(patch, GPath.parse("1 V1.1 1"), r)
    site = CSite((0, 0), 0, 1, (r.id, 2), (r.id, 2))
    with pytest.raises(NotCApplicable):
        homotopy_C(patch, p, site)


def test_no_c_sites_on_reference_types():
    # the cycles at an arc point never pair up here, so no C move is available
    patch, r = origin(GOLD, 1)
    explore(patch, r, 1)
    p = lift(patch, GPath.parse("1 H1.2 2 H2.1 1"), r)
    assert find_c_sites(patch, p) == []


step = st.tuples(st.sampled_from("HV"), st.integers(1, 2))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([FULL2, GOLD]), st.lists(step, min_size=1, max_size=6))
def test_there_and_back_reduces(g, steps):
    patch, r = origin(g, 1)
    rects, slots = [r.id], []
    cur = r
    for kind, k in steps:
        ss = g.slots(cur.type, kind)
        s = ss[(k - 1) % len(ss)]
        cur = patch.extend(cur, s)
        rects.append(cur.id)
        slots.append(s)
    p = PlanePath(tuple(rects), tuple(slots))
    res = reduce(patch, concat(p, reverse(patch, p)), depth=0)
    assert res.trivial and res.depth == 0


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([FULL2, GOLD]), st.lists(step, min_size=1, max_size=6), st.integers(0, 10))
def test_transport_preserves_legality(g, steps, pick):
    inv = g.phi_inv()
    idx, slots = [1], []
    for kind, k in steps:
        ss = g.slots(idx[-1], kind)
        s = ss[(k - 1) % len(ss)]
        slots.append(s)
        idx.append(g.phi[s].rect if kind == "H" else inv[s].rect)
    q = GPath(tuple(idx), tuple(slots))
    moves = legal_moves(g)
    w = move_witness(g, moves[pick % len(moves)])
    q2 = transport(w, q)
    assert gpath_problems(apply_witness(g, w), q2) == []
    assert q2.closed == q.closed
