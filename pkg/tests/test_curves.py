import itertools

import pytest

from curvetop.curves import (ARC, CLOSED, CurveError, NormalCurve,
                             _moves, corner_counts, is_admissible)
from curvetop.frames import build_reference_frame, torus_frame


def slope_weights(p, q):
    """Normal coordinates of the (p, q) slope on the torus frame: the
    edges are the a-loop, b-loop and the a+b diagonal."""
    return (abs(q), abs(p), abs(p - q))


@pytest.fixture(scope="module")
def torus():
    return torus_frame()


@pytest.fixture(scope="module")
def g2():
    return build_reference_frame(2, 0)


def primitive_slopes(n):
    out = []
    for p in range(-n, n + 1):
        for q in range(-n, n + 1):
            if (p, q) <= (0, 0) and (p, q) >= (0, 0):
                continue
            from math import gcd
            if gcd(p, q) == 1 and (q > 0 or (q == 0 and p > 0)):
                out.append((p, q))
    return out


def test_slope_coords_admissible(torus):
    for p, q in primitive_slopes(5):
        c = NormalCurve(torus, slope_weights(p, q))
        assert c.is_connected, (p, q)


def test_slope_trace_closed(torus):
    c = NormalCurve(torus, slope_weights(1, 0))
    (comp,) = c.trace()
    assert comp.closed
    assert len(comp.steps) == 2


def test_multicurve_two_components(torus):
    c = NormalCurve(torus, (0, 2, 2))
    assert c.component_count == 2


def test_vertex_link_detected(torus):
    c = NormalCurve(torus, (2, 2, 2))
    assert c.component_count == 1
    assert c.vertex_linking_components() == [0]


def test_slope_coords_are_canonical(torus):
    for p, q in primitive_slopes(4):
        c = NormalCurve(torus, slope_weights(p, q))
        assert c.canonical() == c, (p, q)


def test_sweep_roundtrip_torus(torus):
    # applying any vertex sweep (including weight-increasing ones) must
    # stay in the isotopy class: canonicalising returns the original
    for p, q in primitive_slopes(3):
        c = NormalCurve(torus, slope_weights(p, q))
        for w2 in _moves(c):
            c2 = NormalCurve(torus, w2)
            assert c2.canonical() == c, (p, q, w2)


def test_sweep_roundtrip_two_levels(torus):
    c = NormalCurve(torus, slope_weights(2, 1))
    for w2 in _moves(c):
        c2 = NormalCurve(torus, w2)
        for w3 in _moves(c2):
            c3 = NormalCurve(torus, w3)
            assert c3.canonical() == c


def test_invalid_weights_rejected(torus):
    with pytest.raises(CurveError):
        NormalCurve(torus, (1, 0, 0))  # parity fails
    with pytest.raises(CurveError):
        NormalCurve(torus, (5, 1, 1))  # triangle inequality fails
    with pytest.raises(CurveError):
        NormalCurve(torus, (1, 1))  # wrong length


def test_closed_kind_rejects_boundary_weight():
    frame = build_reference_frame(1, 1)
    bad = [0] * frame.num_edges
    bad[frame.boundary_edges[0]] = 2
    with pytest.raises(CurveError):
        NormalCurve(frame, bad, CLOSED)


def brute_force_vectors(frame, max_total, kind=CLOSED):
    per_edge = []
    for e in range(frame.num_edges):
        if kind == CLOSED and frame.is_boundary_edge(e):
            per_edge.append((0,))
        else:
            per_edge.append(tuple(range(max_total + 1)))
    for combo in itertools.product(*per_edge):
        if 0 < sum(combo) <= max_total and is_admissible(frame, combo, kind):
            yield combo


def test_g2_small_curves_trace(g2):
    count = 0
    for w in brute_force_vectors(g2, 4):
        c = NormalCurve(g2, w)
        assert c.component_count >= 1
        total = sum(len(comp.steps) for comp in c.trace())
        # every crossing is shared by exactly two chords
        assert total == sum(w)
        count += 1
    assert count >= 9


def test_g2_sweep_roundtrip(g2):
    seen = 0
    for w in brute_force_vectors(g2, 4):
        c = NormalCurve(g2, w)
        if c.vertex_linking_components():
            continue
        base = c.canonical()
        for w2 in _moves(c):
            c2 = NormalCurve(g2, w2)
            assert c2.canonical() == base, (w, w2)
            seen += 1
    assert seen >= 20


def test_arc_systems_trace_and_canonicalise():
    frame = build_reference_frame(1, 1)
    seen = 0
    for w in brute_force_vectors(frame, 3, ARC):
        c = NormalCurve(frame, w, ARC)
        arcs = [comp for comp in c.trace() if not comp.closed]
        bdry_points = sum(w[e] for e in frame.boundary_edges)
        assert 2 * len(arcs) == bdry_points
        base = c.canonical()
        for w2 in _moves(c):
            c2 = NormalCurve(frame, w2, ARC)
            assert c2.canonical() == base, (w, w2)
            seen += 1
    assert seen > 5


def test_corner_counts_example(g2):
    w = [0] * g2.num_edges
    assert corner_counts(g2, w) == [[0, 0, 0]] * g2.num_triangles
