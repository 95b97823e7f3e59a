import pytest

from curvetop.curves import ARC, CLOSED, NormalCurve
from curvetop.cutting import CutError, CutSurface
from curvetop.surfops import (MinimalPair, boundary_collar,
                              boundary_slot_cycles, bounds_disk_in_surface,
                              is_essential, is_essential_arc, is_peripheral,
                              is_separating, neighborhood_boundary)

WAIST = (0, 0, 0, 0, 0, 2, 2, 2, 2)
HANDLE = (0, 0, 0, 0, 0, 0, 0, 1, 1)


def test_nonseparating_cut_is_genus1_two_boundaries(g2, g2_small_curves):
    for c in g2_small_curves[:6]:
        if all(x % 2 == 0 for x in c.weights):
            continue
        cs = CutSurface(g2, c)
        assert len(cs.pieces) == 1
        assert cs.pieces[0].genus_boundary() == (1, 2)
        assert cs.pieces[0].chi == -2


def test_waist_cut_two_tori(g2):
    cs = CutSurface(g2, NormalCurve(g2, WAIST))
    assert [ps.genus_boundary() for ps in cs.pieces] == [(1, 1), (1, 1)]
    assert sum(ps.chi for ps in cs.pieces) == -2


def test_chi_conservation(g2, g2_small_curves):
    for c in g2_small_curves[:8]:
        cs = CutSurface(g2, c)
        assert sum(ps.chi for ps in cs.pieces) == -2
        boundaries = sum(ps.genus_boundary()[1] for ps in cs.pieces)
        assert boundaries == 2 * c.component_count


def test_transfer_roundtrip(g2, g2_small_curves):
    waist = NormalCurve(g2, WAIST)
    cs = CutSurface(g2, waist)
    moved = 0
    for d in g2_small_curves[:8]:
        if MinimalPair(waist, d).intersection:
            continue
        tr = cs.transfer(d)
        (pidx, curves), = tr.items()
        assert len(curves) == 1
        back = cs.pieces[pidx].include(curves[0])
        assert back == d
        moved += 1
    assert moved >= 2


def test_transfer_crossing_curve_gives_arcs(g2):
    waist = NormalCurve(g2, WAIST)
    cs = CutSurface(g2, waist)
    d = NormalCurve(g2, (0, 1, 1, 1, 2, 1, 1, 1, 0)).canonical()
    n = MinimalPair(waist, d).intersection
    assert n == 2
    tr = cs.transfer(d)
    arcs = [c for v in tr.values() for c in v if c.kind == ARC]
    assert len(arcs) == n


def test_essentiality(g2, g2_small_curves):
    link = NormalCurve(g2, (2,) * 9)
    assert bounds_disk_in_surface(link)
    assert not is_essential(link)
    for c in g2_small_curves[:6]:
        assert is_essential(c)


def test_separating_detection(g2):
    assert is_separating(NormalCurve(g2, WAIST))
    assert not is_separating(NormalCurve(g2, HANDLE))
    # mod-2 cross-check: separating iff all weights even
    assert all(x % 2 == 0 for x in WAIST)
    assert not all(x % 2 == 0 for x in HANDLE)


def test_neighborhood_of_single_curve_two_copies(g2, g2_small_curves):
    a = g2_small_curves[0]
    nb = neighborhood_boundary([a])
    assert len(nb) == 2
    assert all(x == a for x in nb)


def test_theta_graph_boundary_is_waist(g2, g2_small_curves):
    a = g2_small_curves[0]
    for b in g2_small_curves[1:]:
        if MinimalPair(a, b).intersection == 1:
            nb = neighborhood_boundary([a, b])
            assert len(nb) == 1
            assert is_essential(nb[0])
            assert is_separating(nb[0])
            return
    pytest.fail("no once-crossing pair found")


def test_peripheral_collar(g2):
    waist = NormalCurve(g2, WAIST)
    cs = CutSurface(g2, waist)
    ps = cs.pieces[0]
    cycles = boundary_slot_cycles(ps.frame)
    assert len(cycles) == 1
    collar = boundary_collar(ps.frame, cycles[0])
    assert is_peripheral(collar)
    assert ps.include(collar) == waist.canonical()


def test_fills_requires_complement_disks(g2, g2_small_curves):
    a = g2_small_curves[0]
    for b in g2_small_curves[1:]:
        mp = MinimalPair(a, b)
        if mp.intersection == 0:
            assert not mp.fills()
            break


def test_disjoint_pair_has_complement_witnesses(g2, g2_small_curves):
    a = g2_small_curves[0]
    for b in g2_small_curves[1:]:
        mp = MinimalPair(a, b)
        if mp.intersection > 0 and not mp.fills():
            wits = [w for w in mp.complement_curves() if is_essential(w)]
            assert wits, "non-filling pair must have an essential " \
                         "complement curve"
            for w in wits:
                assert MinimalPair(a, w).intersection == 0
                assert MinimalPair(b, w).intersection == 0
            return
    pytest.skip("no suitable pair")


CROSSES_WAIST = (0, 1, 1, 1, 2, 1, 1, 0, 1)


def test_essential_arc_detection(g2):
    waist = NormalCurve(g2, WAIST)
    cs = CutSurface(g2, waist)
    d = NormalCurve(g2, CROSSES_WAIST).canonical()
    n = MinimalPair(waist, d).intersection
    assert n == 2
    tr = cs.transfer(d)
    arcs = [c for v in tr.values() for c in v if c.kind == ARC]
    assert len(arcs) == n
    for a in arcs:
        assert is_essential_arc(a)
