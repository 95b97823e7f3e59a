"""Glued polygon complexes: the bookkeeping behind cut surfaces.

A ``PolyComplex`` is a disjoint union of polygons with some sides glued in
pairs (always orientation-reversingly, as everything here lives on an
oriented surface).  It knows its Euler characteristic, boundary circles
and connectivity; cut pieces of surfaces are assembled as these complexes
before being re-triangulated.
"""

from __future__ import annotations

Side = tuple[int, int]  # (polygon index, side index)


class ComplexError(ValueError):
    pass


class PolyComplex:
    """Polygons ``p`` with ``sizes[p]`` sides; ``gluing`` pairs sides.

    Side ``i`` of a polygon runs from its corner ``i`` to corner ``i+1``
    (counterclockwise).  Glued sides are traversed in opposite directions
    by their two polygons.
    """

    def __init__(self, sizes: list[int], gluing: dict[Side, Side]):
        self.sizes = list(sizes)
        for p, k in enumerate(self.sizes):
            if k < 1:
                raise ComplexError(f"polygon {p} has {k} sides")
        self.gluing: dict[Side, Side] = {}
        for a, b in gluing.items():
            self._check_side(a)
            self._check_side(b)
            if a == b:
                raise ComplexError(f"side {a} glued to itself")
            for x, y in ((a, b), (b, a)):
                if x in self.gluing and self.gluing[x] != y:
                    raise ComplexError(f"side {x} glued twice")
                self.gluing[x] = y
        self._build_vertices()

    def _check_side(self, s: Side):
        p, i = s
        if not (0 <= p < len(self.sizes) and 0 <= i < self.sizes[p]):
            raise ComplexError(f"unknown side {s}")

    # corner i of polygon p sits between side i-1 and side i
    def _rotate(self, p: int, c: int):
        """Across the incoming side c-1."""
        side = (p, (c - 1) % self.sizes[p])
        if side not in self.gluing:
            return None
        p2, i2 = self.gluing[side]
        return (p2, i2)

    def _rotate_back(self, p: int, c: int):
        side = (p, c)
        if side not in self.gluing:
            return None
        p2, i2 = self.gluing[side]
        return (p2, (i2 + 1) % self.sizes[p2])

    def _build_vertices(self):
        self.vertex_of: dict[tuple[int, int], int] = {}
        self.vertex_corners: list[tuple[tuple[int, int], ...]] = []
        self.vertex_interior: list[bool] = []
        corners = [(p, c) for p, k in enumerate(self.sizes) for c in range(k)]
        for start in corners:
            if start in self.vertex_of:
                continue
            cur = start
            interior = True
            while True:
                prev = self._rotate_back(*cur)
                if prev is None:
                    interior = False
                    break
                if prev == start:
                    break
                cur = prev
            cycle = []
            node = cur
            while True:
                cycle.append(node)
                self.vertex_of[node] = len(self.vertex_corners)
                nxt = self._rotate(*node)
                if nxt is None:
                    interior = False
                    break
                if nxt == cycle[0]:
                    break
                node = nxt
            self.vertex_corners.append(tuple(cycle))
            self.vertex_interior.append(interior)

    @property
    def num_faces(self) -> int:
        return len(self.sizes)

    @property
    def num_edges(self) -> int:
        total = sum(self.sizes)
        glued = len(self.gluing) // 2
        return total - glued

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_corners)

    @property
    def euler_characteristic(self) -> int:
        return self.num_vertices - self.num_edges + self.num_faces

    def components(self) -> list[set[int]]:
        seen: set[int] = set()
        comps = []
        for p0 in range(len(self.sizes)):
            if p0 in seen:
                continue
            comp = {p0}
            stack = [p0]
            seen.add(p0)
            while stack:
                p = stack.pop()
                for i in range(self.sizes[p]):
                    g = self.gluing.get((p, i))
                    if g is not None and g[0] not in seen:
                        seen.add(g[0])
                        comp.add(g[0])
                        stack.append(g[0])
            comps.append(comp)
        return comps

    def boundary_walks(self) -> list[list[Side]]:
        """Boundary circles as cyclic lists of unglued sides, each circle
        traversed against the polygons' ccw orientation (so that the
        complex lies on the walker's left)."""
        free = [s for s in ((p, i) for p, k in enumerate(self.sizes)
                            for i in range(k)) if s not in self.gluing]
        succ: dict[Side, Side] = {}
        for (p, i) in free:
            # rotate around the head vertex of side (p, i) until the next
            # unglued side appears
            node = (p, (i + 1) % self.sizes[p])
            while True:
                p2, c2 = node
                if (p2, c2) not in self.gluing:
                    succ[(p, i)] = (p2, c2)
                    break
                node = self._rotate_back(p2, c2)
        walks = []
        done: set[Side] = set()
        for s in free:
            if s in done:
                continue
            walk = []
            cur = s
            while cur not in done:
                done.add(cur)
                walk.append(cur)
                cur = succ[cur]
            walks.append(walk)
        return walks

    def genus_of_component(self, comp: set[int]) -> tuple[int, int, int]:
        """(genus, boundary circles, chi) of one connected component."""
        sides = {(p, i) for p in comp for i in range(self.sizes[p])}
        chi = 0
        vseen = set()
        for p in comp:
            chi += 1
        eseen = set()
        for s in sides:
            if s in eseen:
                continue
            eseen.add(s)
            g = self.gluing.get(s)
            if g is not None:
                eseen.add(g)
            chi -= 1
        for p in comp:
            for c in range(self.sizes[p]):
                v = self.vertex_of[(p, c)]
                if v not in vseen:
                    vseen.add(v)
                    chi += 1
        b = sum(1 for w in self.boundary_walks() if w[0][0] in comp)
        g2 = 2 - chi - b
        if g2 < 0 or g2 % 2:
            raise ComplexError(f"bad component invariants chi={chi} b={b}")
        return g2 // 2, b, chi
