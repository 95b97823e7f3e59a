import pytest

from curvetop.frames import (FareyRoutedError, FrameError, Surface,
                             build_reference_frame, frame_version,
                             reference_surface, torus_frame)


def test_genus2_closed_frame_counts():
    tri = build_reference_frame(2, 0)
    assert tri.num_triangles == 6
    assert tri.num_edges == 9
    assert tri.num_vertices == 1
    assert tri.euler_characteristic == -2
    assert tri.num_boundary_components == 0
    assert tri.genus == 2
    assert tri.vertex_interior == [True]


def test_genus1_two_boundary_frame():
    tri = build_reference_frame(1, 2)
    assert tri.euler_characteristic == -2
    assert len(tri.boundary_edges) == 2
    assert tri.num_boundary_components == 2
    assert tri.genus == 1


def test_torus_routed_to_farey():
    with pytest.raises(FareyRoutedError):
        build_reference_frame(1, 0)


@pytest.mark.parametrize("g,b", [(0, 0), (0, 1), (0, 2)])
def test_nonnegative_chi_rejected(g, b):
    with pytest.raises(FrameError):
        build_reference_frame(g, b)


@pytest.mark.parametrize("g,b", [(2, 0), (1, 1), (1, 2), (0, 3), (0, 4),
                                 (3, 0), (2, 1), (1, 3), (0, 5)])
def test_frame_matches_requested_type(g, b):
    tri = build_reference_frame(g, b)
    surf = Surface(g, b, tri)
    assert surf.euler_characteristic == 2 - 2 * g - b
    assert tri.version == frame_version(g, b)
    # gluing is a fixed-point-free involution on interior slots
    for a, c in tri.gluing.items():
        assert a != c
        assert tri.gluing[c] == a


def test_determinism():
    t1 = build_reference_frame(2, 0)
    t2 = build_reference_frame(2, 0)
    assert t1.gluing == t2.gluing
    assert t1.edge_sides == t2.edge_sides


def test_torus_frame_counts():
    tri = torus_frame()
    assert tri.num_triangles == 2
    assert tri.num_edges == 3
    assert tri.num_vertices == 1
    assert tri.euler_characteristic == 0


def test_once_punctured_torus_is_farey():
    assert reference_surface(1, 1).is_farey_case
    assert not reference_surface(2, 0).is_farey_case


def test_boundary_components_are_cycles():
    tri = build_reference_frame(0, 4)
    comps = tri.boundary_components()
    assert len(comps) == 4
    seen = [e for comp in comps for e in comp]
    assert sorted(seen) == sorted(tri.boundary_edges)
