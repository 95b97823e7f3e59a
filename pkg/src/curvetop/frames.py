"""Combinatorial surfaces: oriented triangulations with boundary, and the
fixed reference frames that every curve in this package lives on.

A triangulation is a list of triangles, each with three *slots* (sides).
Triangle ``t`` has vertices ``v0, v1, v2`` in counterclockwise order and
slot ``i`` is the side from ``v_i`` to ``v_{i+1}``.  Interior slots are
glued in pairs by an orientation-reversing involution (two glued slots
traverse their common edge in opposite directions); unglued slots are
boundary edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class FrameError(ValueError):
    """An invariant of a triangulation or surface was violated."""


class FareyRoutedError(FrameError):
    """The torus is handled by the Farey module, not the generic frames."""


Slot = tuple[int, int]  # (triangle index, slot index 0..2)


def _corner_between(a: int, b: int) -> int:
    """Vertex index shared by two distinct slots of one triangle."""
    if {a, b} == {0, 1}:
        return 1
    if {a, b} == {1, 2}:
        return 2
    if {a, b} == {0, 2}:
        return 0
    raise FrameError(f"slots {a}, {b} do not share a corner")


class Triangulation:
    """An oriented triangulated compact surface.

    Construction data is the number of triangles plus the gluing map on
    slots; edges, vertices, Euler characteristic, boundary structure and
    connectivity are all derived and validated here.
    """

    def __init__(self, num_triangles: int, gluing: dict[Slot, Slot],
                 version: str = "adhoc"):
        if num_triangles <= 0:
            raise FrameError("triangulation needs at least one triangle")
        self.num_triangles = num_triangles
        self.version = version
        self.gluing: dict[Slot, Slot] = {}
        all_slots = [(t, s) for t in range(num_triangles) for s in range(3)]
        for a, b in gluing.items():
            if a not in all_slots or b not in all_slots:
                raise FrameError(f"gluing references unknown slot {a} or {b}")
            if a == b:
                raise FrameError(f"slot {a} glued to itself")
            for x, y in ((a, b), (b, a)):
                if x in self.gluing and self.gluing[x] != y:
                    raise FrameError(f"slot {x} glued twice")
                self.gluing[x] = y
        self._build_edges()
        self._build_vertices()
        self._check_connected()

    # -- derived structure ------------------------------------------------

    def _build_edges(self) -> None:
        self.edge_of: dict[Slot, int] = {}
        self.edge_sides: list[tuple[Slot, ...]] = []
        for t in range(self.num_triangles):
            for s in range(3):
                slot = (t, s)
                if slot in self.edge_of:
                    continue
                eid = len(self.edge_sides)
                if slot in self.gluing:
                    other = self.gluing[slot]
                    self.edge_sides.append((slot, other))
                    self.edge_of[slot] = eid
                    self.edge_of[other] = eid
                else:
                    self.edge_sides.append((slot,))
                    self.edge_of[slot] = eid
        self.num_edges = len(self.edge_sides)
        self.boundary_edges = tuple(e for e, sides in enumerate(self.edge_sides)
                                    if len(sides) == 1)

    def is_boundary_edge(self, e: int) -> bool:
        return len(self.edge_sides[e]) == 1

    def _rotate_corner(self, t: int, c: int) -> tuple[int, int] | None:
        """One step around vertex ``c`` of triangle ``t`` across the
        incoming slot ``c-1``; None when that slot is boundary."""
        slot = (t, (c - 1) % 3)
        if slot not in self.gluing:
            return None
        t2, s2 = self.gluing[slot]
        return (t2, s2)  # corner at the start vertex of slot s2

    def _rotate_corner_back(self, t: int, c: int) -> tuple[int, int] | None:
        """One step the other way, across the outgoing slot ``c``."""
        slot = (t, c)
        if slot not in self.gluing:
            return None
        t2, s2 = self.gluing[slot]
        return (t2, (s2 + 1) % 3)

    def _build_vertices(self) -> None:
        self.vertex_of: dict[tuple[int, int], int] = {}
        self.vertex_corners: list[tuple[tuple[int, int], ...]] = []
        self.vertex_interior: list[bool] = []
        corners = [(t, c) for t in range(self.num_triangles) for c in range(3)]
        for start in corners:
            if start in self.vertex_of:
                continue
            vid = len(self.vertex_corners)
            # walk backwards to a boundary stop if there is one
            cur = start
            seen = {start}
            interior = True
            while True:
                prev = self._rotate_corner_back(*cur)
                if prev is None:
                    interior = False
                    break
                if prev == start:
                    break
                if prev in seen:  # closed orbit not through start: impossible
                    raise FrameError("corner rotation is not a simple orbit")
                seen.add(prev)
                cur = prev
            # now collect forward from cur
            cycle = []
            node = cur
            while True:
                cycle.append(node)
                self.vertex_of[node] = vid
                nxt = self._rotate_corner(*node)
                if nxt is None:
                    interior = False
                    break
                if nxt == cycle[0]:
                    break
                node = nxt
            self.vertex_corners.append(tuple(cycle))
            self.vertex_interior.append(interior)
        self.num_vertices = len(self.vertex_corners)

    def _check_connected(self) -> None:
        seen = {0}
        stack = [0]
        while stack:
            t = stack.pop()
            for s in range(3):
                if (t, s) in self.gluing:
                    t2 = self.gluing[(t, s)][0]
                    if t2 not in seen:
                        seen.add(t2)
                        stack.append(t2)
        if len(seen) != self.num_triangles:
            raise FrameError("triangulation is not connected")

    # -- invariants --------------------------------------------------------

    @property
    def euler_characteristic(self) -> int:
        return self.num_vertices - self.num_edges + self.num_triangles

    def boundary_components(self) -> list[tuple[int, ...]]:
        """Boundary circles as cyclic tuples of boundary edge ids."""
        # successor of a boundary slot: rotate around its head vertex until
        # the next boundary slot appears.
        succ: dict[Slot, Slot] = {}
        for e in self.boundary_edges:
            (t, s), = self.edge_sides[e]
            node = (t, (s + 1) % 3)  # corner at the head vertex of slot s
            while True:
                t2, c2 = node
                if (t2, c2) not in self.gluing:
                    # outgoing slot c2 of t2 is boundary: next edge on circle
                    succ[(t, s)] = (t2, c2)
                    break
                nxt = self._rotate_corner_back(t2, c2)
                assert nxt is not None
                node = nxt
        circles = []
        done: set[Slot] = set()
        for e in self.boundary_edges:
            slot = self.edge_sides[e][0]
            if slot in done:
                continue
            circle = []
            cur = slot
            while cur not in done:
                done.add(cur)
                circle.append(self.edge_of[cur])
                cur = succ[cur]
            circles.append(tuple(circle))
        return circles

    @property
    def num_boundary_components(self) -> int:
        return len(self.boundary_components())

    @property
    def genus(self) -> int:
        chi = self.euler_characteristic
        b = self.num_boundary_components
        g2 = 2 - chi - b
        if g2 < 0 or g2 % 2:
            raise FrameError(f"inconsistent chi={chi}, boundary={b}")
        return g2 // 2

    def slot_weight_order(self, t: int, s: int, e_weight: int, pos: int) -> int:
        """Translate a position along slot (t, s) to the edge's canonical
        direction (the direction of the edge's first recorded side)."""
        e = self.edge_of[(t, s)]
        primary = self.edge_sides[e][0]
        if (t, s) == primary:
            return pos
        return e_weight - 1 - pos

    def __repr__(self):
        return (f"Triangulation({self.version!r}: {self.num_triangles} tri, "
                f"{self.num_edges} edges, {self.num_vertices} vert, "
                f"chi={self.euler_characteristic})")


@dataclass(frozen=True)
class Surface:
    """A surface of fixed topological type together with its frame."""

    genus: int
    boundary_count: int
    frame: Triangulation = field(compare=False)

    def __post_init__(self):
        chi = 2 - 2 * self.genus - self.boundary_count
        if self.frame.euler_characteristic != chi:
            raise FrameError(
                f"frame chi {self.frame.euler_characteristic} != {chi} "
                f"for (g={self.genus}, b={self.boundary_count})")
        if self.frame.num_boundary_components != self.boundary_count:
            raise FrameError("frame boundary count mismatch")

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - self.boundary_count

    @property
    def complexity(self) -> int:
        """3g - 3 + b, the dimension bound of the curve complex."""
        return 3 * self.genus - 3 + self.boundary_count

    @property
    def is_farey_case(self) -> bool:
        return (self.genus, self.boundary_count) in ((1, 0), (1, 1))


FRAME_SCHEME = "fan-v1"


def frame_version(g: int, b: int) -> str:
    return f"g{g}b{b}:{FRAME_SCHEME}"


def _polygon_frame(word: list[tuple[str, int]], free: set[str],
                   version: str) -> Triangulation:
    """Triangulation of a polygon scheme.

    ``word`` lists the polygon sides in ccw order as (label, sign); sides
    with the same label and opposite signs are glued; labels in ``free``
    stay boundary.  The polygon is fan-triangulated from vertex 0.
    """
    n = len(word)
    if n < 3:
        raise FrameError("polygon needs at least 3 sides")
    # side i -> slot of the fan triangulation
    def side_slot(i: int) -> Slot:
        if i == 0:
            return (0, 0)
        if i == n - 1:
            return (n - 3, 2)
        return (i - 1, 1)

    gluing: dict[Slot, Slot] = {}
    # interior fan diagonals: triangle k-1 slot2 with triangle k slot0
    for k in range(1, n - 2):
        gluing[(k - 1, 2)] = (k, 0)
        gluing[(k, 0)] = (k - 1, 2)
    by_label: dict[str, list[int]] = {}
    for i, (lab, _) in enumerate(word):
        by_label.setdefault(lab, []).append(i)
    for lab, sides in by_label.items():
        if lab in free:
            if len(sides) != 1:
                raise FrameError(f"free label {lab} used twice")
            continue
        if len(sides) != 2:
            raise FrameError(f"label {lab} must appear exactly twice")
        i, j = sides
        if word[i][1] * word[j][1] != -1:
            raise FrameError(f"label {lab} needs opposite signs")
        a, b = side_slot(i), side_slot(j)
        gluing[a] = b
        gluing[b] = a
    return Triangulation(n - 2, gluing, version=version)


def build_reference_frame(g: int, b: int) -> Triangulation:
    """The fixed reference triangulation for the surface of genus ``g``
    with ``b`` boundary components.

    Deterministic: the same (g, b) always yields the identical frame.  The
    closed torus is rejected here and handled by the Farey module.
    """
    if g < 0 or b < 0:
        raise FrameError("genus and boundary count must be non-negative")
    if (g, b) == (1, 0):
        raise FareyRoutedError("closed torus curves route to the Farey module")
    chi = 2 - 2 * g - b
    if chi >= 0:
        raise FrameError(f"no curve-complex frame for (g={g}, b={b}): chi={chi}")
    word: list[tuple[str, int]] = []
    for i in range(g):
        word += [(f"a{i}", 1), (f"b{i}", 1), (f"a{i}", -1), (f"b{i}", -1)]
    free = set()
    for i in range(b):
        word += [(f"r{i}", 1), (f"z{i}", 1), (f"r{i}", -1)]
        free.add(f"z{i}")
    tri = _polygon_frame(word, free, version=frame_version(g, b))
    surf = Surface(g, b, tri)  # validates chi and boundary count
    assert surf.frame is tri
    return tri


def torus_frame() -> Triangulation:
    """One-vertex triangulation of the closed torus (2 triangles, 3 edges).

    Used internally by the Farey module for slope arithmetic; the generic
    factory refuses (1, 0) on purpose.
    """
    word = [("a", 1), ("b", 1), ("a", -1), ("b", -1)]
    return _polygon_frame(word, set(), version=f"g1b0:{FRAME_SCHEME}")


def reference_surface(g: int, b: int) -> Surface:
    return Surface(g, b, build_reference_frame(g, b))
