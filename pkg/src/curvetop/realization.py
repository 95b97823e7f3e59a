"""Simultaneous embeddings of several multicurves on one frame.

Each triangle is modelled as a convex disk whose boundary nodes (corner
markers and curve crossings) sit at integer points in strictly convex
position; chords are straight segments, so every incidence question is an
exact integer predicate.  The overlay keeps, per edge, the joint order of
all layers' crossing points, and derives chords, crossings and the cell
decomposition from it.

Bigon reduction slides a mobile layer across two-cornered disk faces of
the complement (and one-cornered half-bigon faces along the boundary)
until none remain; the bigon criterion then certifies minimal position,
and the crossing count is the geometric intersection number.
"""

from __future__ import annotations

from .cellcomplex import PolyComplex
from .curves import ARC, CLOSED, CurveError, NormalCurve
from .frames import Triangulation


class OverlayError(RuntimeError):
    pass


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _seg_crossing(p1, p2, p3, p4):
    """Exact crossing of open segments with integer endpoints, or None.

    Returns (x_num, y_num, den, t_num, t_den) with den, t_den > 0; t is the
    parameter along p1->p2.
    """
    d1 = _cross(p3, p4, p1)
    d2 = _cross(p3, p4, p2)
    d3 = _cross(p1, p2, p3)
    d4 = _cross(p1, p2, p4)
    if (d1 > 0) == (d2 > 0) or (d3 > 0) == (d4 > 0):
        return None
    if 0 in (d1, d2, d3, d4):
        raise OverlayError("degenerate segment contact")
    t_num, t_den = d1, d1 - d2
    if t_den < 0:
        t_num, t_den = -t_num, -t_den
    xn = p1[0] * t_den + (p2[0] - p1[0]) * t_num
    yn = p1[1] * t_den + (p2[1] - p1[1]) * t_num
    return (xn, yn, t_den, t_num, t_den)


def _frac_lt(a, b):
    return a[0] * b[1] < b[0] * a[1]


def _dir_key(v):
    """Sort key for exact counterclockwise angular order of vectors."""
    x, y = v
    if y > 0 or (y == 0 and x > 0):
        half = 0
    else:
        half = 1
    return (half, )


def _angle_sort(vectors):
    """Indices of integer vectors sorted counterclockwise from +x axis."""
    idx = list(range(len(vectors)))

    def cmp_key(i):
        return i

    def less(i, j):
        vi, vj = vectors[i], vectors[j]
        hi, hj = _dir_key(vi)[0], _dir_key(vj)[0]
        if hi != hj:
            return hi < hj
        c = vi[0] * vj[1] - vi[1] * vj[0]
        if c == 0:
            raise OverlayError("parallel directions at a node")
        return c > 0

    # simple insertion sort with the exact comparator
    out = []
    for i in idx:
        lo = 0
        while lo < len(out) and less(out[lo], i):
            lo += 1
        out.insert(lo, i)
    return out


class _Arrangement:
    """Exact chord arrangement inside one triangle."""

    def __init__(self, nodes, coords, segs, outer_start):
        self.nodes = nodes          # node key -> True
        self.coords = coords        # node key -> (xn, yn, den)
        self.segs = segs            # seg key -> (node_u, node_v, info)
        self.outer_start = outer_start
        self._build_faces()

    def _build_faces(self):
        incident: dict = {}
        for sk, (u, v, info) in self.segs.items():
            incident.setdefault(u, []).append((sk, v))
            incident.setdefault(v, []).append((sk, u))
        rotation: dict = {}
        for node, ends in incident.items():
            ox, oy, od = self.coords[node]
            vecs = []
            for sk, other in ends:
                x, y, d = self.coords[other]
                # direction (x/d - ox/od, ...) scaled by positive od*d
                vecs.append((x * od - ox * d, y * od - oy * d))
            order = _angle_sort(vecs)
            rotation[node] = [ends[i] for i in order]
        # half edge (sk, u, v); next = cw-next around v after (v, u)
        nxt = {}
        for node, ends in rotation.items():
            k = len(ends)
            for i, (sk, other) in enumerate(ends):
                # half edge arriving INTO node along sk from other:
                # continue with the cw-previous end at node
                prev = ends[(i - 1) % k]
                nxt[(sk, other, node)] = (prev[0], node, prev[1])
        faces = []
        seen = set()
        for he in sorted(nxt):
            if he in seen:
                continue
            walk = []
            cur = he
            while cur not in seen:
                seen.add(cur)
                walk.append(cur)
                cur = nxt[cur]
            faces.append(walk)
        # identify and drop the outer face: it contains outer_start
        self.faces = []
        for walk in faces:
            if self.outer_start in walk:
                continue
            self.faces.append(walk)
        # deterministic face order
        self.faces.sort(key=lambda w: min(w))


class Overlay:
    """Layers of normal curves realized together on one frame."""

    def __init__(self, frame: Triangulation, curves: list[NormalCurve]):
        self.frame = frame
        self.kinds = []
        self.point_edge: dict[int, int] = {}
        self.point_layer: dict[int, int] = {}
        self.edge_order: list[list[int]] = [[] for _ in range(frame.num_edges)]
        self.chords: dict[int, tuple] = {}
        self._next_pid = 0
        self._next_cid = 0
        for li, c in enumerate(curves):
            if c.frame is not frame:
                raise OverlayError("curve on a different frame")
            self._add_layer(li, c)
        self._dirty = True

    # -- construction -------------------------------------------------------

    def _add_layer(self, li: int, curve: NormalCurve):
        self.kinds.append(curve.kind)
        frame = self.frame
        pid_at: dict[tuple[int, int], int] = {}
        for e in range(frame.num_edges):
            for pos in range(curve.weights[e]):
                pid = self._next_pid
                self._next_pid += 1
                pid_at[(e, pos)] = pid
                self.point_edge[pid] = e
                self.point_layer[pid] = li
                self.edge_order[e].append(pid)
        for comp in curve.trace():
            for st in comp.steps:
                e_in = frame.edge_of[(st.tri, st.in_slot)]
                e_out = frame.edge_of[(st.tri, st.out_slot)]
                pa = pid_at[(e_in, frame.slot_weight_order(
                    st.tri, st.in_slot, curve.weights[e_in], st.in_pos))]
                pb = pid_at[(e_out, frame.slot_weight_order(
                    st.tri, st.out_slot, curve.weights[e_out], st.out_pos))]
                cid = self._next_cid
                self._next_cid += 1
                self.chords[cid] = (li, st.tri, (pa, st.in_slot),
                                    (pb, st.out_slot))

    @property
    def num_layers(self) -> int:
        return len(self.kinds)

    def point_pos(self, pid: int) -> int:
        return self.edge_order[self.point_edge[pid]].index(pid)

    # -- derived geometry ---------------------------------------------------

    def _slot_points(self, t: int, s: int) -> list[int]:
        e = self.frame.edge_of[(t, s)]
        pts = self.edge_order[e]
        primary = self.frame.edge_sides[e][0]
        if (t, s) == primary:
            return list(pts)
        return list(reversed(pts))

    def _triangle_arrangement(self, t: int) -> _Arrangement:
        frame = self.frame
        boundary = []   # node keys in ccw order
        arcs = []       # (u, v, slot, slot-local gap index)
        for s in range(3):
            group = [("c", t, s)] + [("p", pid)
                                     for pid in self._slot_points(t, s)]
            boundary.extend(group)
            for j in range(len(group)):
                arcs.append((group[j], None, s, j))
        for i in range(len(arcs)):
            u = arcs[i][0]
            v = arcs[(i + 1) % len(arcs)][0]
            arcs[i] = (u, v, arcs[i][2], arcs[i][3])
        n = len(boundary)
        coords = {}
        for r, key in enumerate(boundary):
            coords[key] = (r, r * r * n + ((r * 7919) % n), 1)
        segs = {}
        # boundary arcs, labelled by the global gap they border
        for (u, v, s, j) in arcs:
            e = frame.edge_of[(t, s)]
            w = len(self.edge_order[e])
            primary = frame.edge_sides[e][0]
            g = j if (t, s) == primary else w - j
            segs[("g", t, s, j)] = (u, v, ("gap", e, g, t, s))
        # chords and their crossings
        tri_chords = [(cid, c) for cid, c in self.chords.items()
                      if c[1] == t]
        cuts: dict[int, list] = {cid: [] for cid, _ in tri_chords}
        for i in range(len(tri_chords)):
            cid_a, ca = tri_chords[i]
            pa = coords[("p", ca[2][0])], coords[("p", ca[3][0])]
            for j in range(i + 1, len(tri_chords)):
                cid_b, cb = tri_chords[j]
                pb = coords[("p", cb[2][0])], coords[("p", cb[3][0])]
                hit = _seg_crossing(
                    (pa[0][0], pa[0][1]), (pa[1][0], pa[1][1]),
                    (pb[0][0], pb[0][1]), (pb[1][0], pb[1][1]))
                if hit is None:
                    continue
                if ca[0] == cb[0]:
                    raise OverlayError(
                        f"layer {ca[0]} self-crossing in triangle {t}")
                xn, yn, den, tn, td = hit
                xkey = ("x", t, cid_a, cid_b)
                coords[xkey] = (xn, yn, den)
                cuts[cid_a].append(((tn, td), xkey))
                # parameter along chord b
                hit2 = _seg_crossing(
                    (pb[0][0], pb[0][1]), (pb[1][0], pb[1][1]),
                    (pa[0][0], pa[0][1]), (pa[1][0], pa[1][1]))
                cuts[cid_b].append(((hit2[3], hit2[4]), xkey))
        from fractions import Fraction
        for cid, ca in tri_chords:
            lst = sorted(cuts[cid], key=lambda it: Fraction(*it[0]))
            for a, b in zip(lst, lst[1:]):
                if a[0][0] * b[0][1] == b[0][0] * a[0][1]:
                    raise OverlayError("concurrent crossings on a chord")
            chain = [("p", ca[2][0])] + [k for _, k in lst] + [("p", ca[3][0])]
            for k in range(len(chain) - 1):
                segs[("ch", cid, k)] = (chain[k], chain[k + 1],
                                        ("ch", ca[0], cid, k))
        nodes = {k: True for k in coords}
        outer_start = None
        # the outer face passes the boundary backwards: corner0 <- next node
        u, v = boundary[0], boundary[1]
        outer_start = (("g", t, 0, 0), v, u)
        return _Arrangement(nodes, coords, segs, outer_start)

    # -- cells and pieces -----------------------------------------------------

    def build_cells(self):
        if not self._dirty and getattr(self, "_cells", None) is not None:
            return self._cells
        arrs = {}
        cells = []           # (t, face index) -> walk (list of half-edges)
        side_occurrences: dict = {}
        cell_walks = {}
        for t in range(self.frame.num_triangles):
            arr = self._triangle_arrangement(t)
            arrs[t] = arr
            for fi, walk in enumerate(arr.faces):
                cell = (t, fi)
                cells.append(cell)
                cell_walks[cell] = walk
                for (sk, u, v) in walk:
                    info = arr.segs[sk][2]
                    if info[0] == "gap":
                        key = ("gap", info[1], info[2])
                    else:
                        key = ("ch", info[2], info[3])
                    side_occurrences.setdefault(key, []).append(
                        (cell, (sk, u, v), info))
        self._cells = (arrs, cells, cell_walks, side_occurrences)
        self._dirty = False
        return self._cells

    def crossings(self, layers_a: set[int], layers_b: set[int]) -> int:
        arrs, cells, walks, occ = self.build_cells()
        count = 0
        for t, arr in arrs.items():
            for key in arr.coords:
                if key[0] != "x":
                    continue
                la = self.chords[key[2]][0]
                lb = self.chords[key[3]][0]
                if (la in layers_a and lb in layers_b) or \
                        (la in layers_b and lb in layers_a):
                    count += 1
        return count

    def complement(self, cut_layers: set[int]):
        """Union-find of cells across everything except cut-layer chords."""
        arrs, cells, walks, occ = self.build_cells()
        parent = {c: c for c in cells}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        for key, occs in occ.items():
            if key[0] == "gap":
                if len(occs) == 2:
                    union(occs[0][0], occs[1][0])
            else:
                cid = key[1]
                if self.chords[cid][0] not in cut_layers:
                    if len(occs) != 2:
                        raise OverlayError("chord segment not two-sided")
                    union(occs[0][0], occs[1][0])
        groups: dict = {}
        for c in cells:
            groups.setdefault(find(c), []).append(c)
        return [sorted(v) for v in sorted(groups.values())]

    def faces(self, cut_layers: set[int]):
        """Complement components of the cut layers, analysed."""
        comps = self.complement(cut_layers)
        return [Piece(self, cut_layers, comp) for comp in comps]


class Piece:
    """One complement component of a set of cut layers, as a surface."""

    def __init__(self, overlay: Overlay, cut_layers: set[int], cells):
        self.overlay = overlay
        self.cut_layers = set(cut_layers)
        self.cells = list(cells)
        arrs, all_cells, walks, occ = overlay.build_cells()
        index = {c: i for i, c in enumerate(self.cells)}
        sizes = []
        side_info = []   # per polygon: list of (glue key, info, u, v)
        for c in self.cells:
            walk = walks[c]
            arr = arrs[c[0]]
            sides = []
            for (sk, u, v) in walk:
                info = arr.segs[sk][2]
                if info[0] == "gap":
                    key = ("gap", info[1], info[2])
                else:
                    key = ("ch", info[2], info[3])
                sides.append((key, info, u, v))
            sizes.append(len(sides))
            side_info.append(sides)
        gluing = {}
        half: dict = {}
        for pi, sides in enumerate(side_info):
            for si, (key, info, u, v) in enumerate(sides):
                cut = (key[0] == "ch" and
                       self.overlay.chords[key[1]][0] in self.cut_layers)
                bdry_gap = (key[0] == "gap" and len(occ[key]) == 1)
                if cut or bdry_gap:
                    continue
                if key in half:
                    other = half.pop(key)
                    gluing[(pi, si)] = other
                    gluing[other] = (pi, si)
                else:
                    half[key] = (pi, si)
        if half:
            raise OverlayError(f"unmatched internal sides: {sorted(half)}")
        self.sizes = sizes
        self.side_info = side_info
        self.complex = PolyComplex(sizes, gluing)
        self.chi = self.complex.euler_characteristic
        self.circles = self.complex.boundary_walks()

    @property
    def is_disk(self) -> bool:
        return self.chi == 1

    def circle_labels(self, walk):
        """The labels of one boundary circle: list of (kind, info, u, v)."""
        out = []
        for (pi, si) in walk:
            key, info, u, v = self.side_info[pi][si]
            out.append((key, info, u, v))
        return out

    def corner_nodes(self, walk):
        """Crossing nodes where a boundary circle switches between a cut
        layer and a different cut layer (occurrence count, not set)."""
        labels = self.circle_labels(walk)
        n = len(labels)
        corners = []
        for i in range(n):
            key_a, info_a, ua, va = labels[i]
            key_b, info_b, ub, vb = labels[(i + 1) % n]
            if key_a[0] != "ch" or key_b[0] != "ch":
                continue
            la = self.overlay.chords[key_a[1]][0]
            lb = self.overlay.chords[key_b[1]][0]
            if va == ub and va[0] == "x" and la != lb:
                corners.append((va, i))
        return corners

    def boundary_gap_count(self, walk) -> int:
        return sum(1 for (key, info, u, v) in self.circle_labels(walk)
                   if key[0] == "gap")


def _dedupe(seq):
    out = []
    for x in seq:
        if not out or out[-1] != x:
            out.append(x)
    return out


class _NewChord:
    """A chord to create: endpoints reference old pids, new points by
    index, or the new endpoint; each carries its slot in ``tri``."""

    def __init__(self, tri, end_a, end_b):
        self.tri = tri
        self.end_a = end_a   # ("old"|"new"|"end", pid-or-index, slot)
        self.end_b = end_b


class _Rewrite:
    def __init__(self, mobile_cids, mobile_pids, new_points, new_chords,
                 old_endpoint=None, new_endpoint=None):
        self.mobile_cids = mobile_cids   # chords to delete
        self.mobile_pids = mobile_pids   # interior points to delete
        self.new_points = new_points     # [(anchor pid, after: bool)]
        self.new_chords = new_chords     # [_NewChord]
        self.old_endpoint = old_endpoint  # pid to delete (half-bigon)
        self.new_endpoint = new_endpoint  # (anchor pid, after: bool)


class Reducer:
    """Removes bigons and half-bigons of one mobile layer against a fixed
    set of layers until that pair of families is in minimal position."""

    def __init__(self, overlay: Overlay, mobile: int, fixed: set[int]):
        self.ov = overlay
        self.mobile = mobile
        self.fixed = set(fixed)
        if mobile in self.fixed:
            raise OverlayError("mobile layer cannot be fixed")

    def run(self):
        guard = 0
        limit = 4 * (self.ov.crossings({self.mobile}, self.fixed) + 8)
        while True:
            rw = self._find_rewrite()
            if rw is None:
                return self
            before = self.ov.crossings({self.mobile}, self.fixed)
            self._apply(rw)
            after = self.ov.crossings({self.mobile}, self.fixed)
            if after >= before:
                raise OverlayError(
                    f"rewrite failed to reduce crossings ({before}->{after})")
            guard += 1
            if guard > limit:
                raise OverlayError("bigon reduction exceeded its budget")

    # -- candidate search ---------------------------------------------------

    def _mobile_corners(self, piece, walk):
        out = []
        for node, i in piece.corner_nodes(walk):
            la = self.ov.chords[node[2]][0]
            lb = self.ov.chords[node[3]][0]
            if self.mobile in (la, lb) and \
                    (la in self.fixed or lb in self.fixed):
                out.append((node, i))
        return out

    def _find_rewrite(self):
        cut = {self.mobile} | self.fixed
        for piece in self.ov.faces(cut):
            if piece.chi != 1 or len(piece.circles) != 1:
                continue
            walk = piece.circles[0]
            labels = piece.circle_labels(walk)
            junctions = [s[3] for s in labels]
            if len(set(junctions)) != len(junctions):
                continue  # pinched disk: not an embedded bigon
            corners = self._mobile_corners(piece, walk)
            gaps = piece.boundary_gap_count(walk)
            if len(corners) == 2 and gaps == 0:
                rw = self._extract_bigon(piece, labels, corners)
                if rw is not None:
                    return rw
            if len(corners) == 1 and gaps > 0 and \
                    self.ov.kinds[self.mobile] == ARC:
                rw = self._extract_half(piece, labels, corners)
                if rw is not None:
                    return rw
        return None

    # -- shared helpers -------------------------------------------------------

    def _side_layer(self, side):
        key = side[0]
        if key[0] != "ch":
            return None
        return self.ov.chords[key[1]][0]

    def _arc_sides(self, labels, start, stop):
        n = len(labels)
        out = []
        i = (start + 1) % n
        while True:
            out.append(labels[i])
            if i == stop:
                break
            i = (i + 1) % n
        return out

    def _seg_forward(self, side):
        key, info, u, v = side
        cid, k = key[1], key[2]
        arrs, cells, walks, occ = self.ov.build_cells()
        t = self.ov.chords[cid][1]
        seg = arrs[t].segs[("ch", cid, k)]
        return (seg[0], seg[1]) == (u, v)

    def _survivor_behind(self, side):
        """Endpoint record of the chord behind the start of this side."""
        cid = side[0][1]
        li, t, (pa, sa), (pb, sb) = self.ov.chords[cid]
        if self._seg_forward(side):
            return (pa, t, sa)
        return (pb, t, sb)

    def _survivor_ahead(self, side):
        cid = side[0][1]
        li, t, (pa, sa), (pb, sb) = self.ov.chords[cid]
        if self._seg_forward(side):
            return (pb, t, sb)
        return (pa, t, sa)

    def _junction_pids(self, sides):
        """Edge points passed between consecutive sides of one arc."""
        pids = []
        for a, b in zip(sides, sides[1:]):
            node = a[3]
            if node[0] == "p":
                pids.append(node[1])
        return pids

    def _face_far_side(self, piece, pid):
        """True if the face borders the gap before pid, so new points go
        after it (and vice versa)."""
        ov = self.ov
        e = ov.point_edge[pid]
        idx = ov.edge_order[e].index(pid)
        arrs, cells, walks, occ = ov.build_cells()
        cellset = set(piece.cells)
        lo = any(c in cellset for c, he, info in occ.get(("gap", e, idx), []))
        hi = any(c in cellset
                 for c, he, info in occ.get(("gap", e, idx + 1), []))
        if lo == hi:
            raise OverlayError("face is not transverse at a point")
        return lo

    def _chord_slot_at(self, cid, pid):
        li, t, (pa, sa), (pb, sb) = self.ov.chords[cid]
        if pa == pid:
            return sa
        if pb == pid:
            return sb
        raise OverlayError("point not on chord")

    def _build_parallel_path(self, piece, fix_sides, from_start_corner,
                             p_before, terminal):
        """New points and chords parallel to a fixed arc.

        ``fix_sides`` run in circle order; the new mobile path starts at
        ``p_before`` beside the corner at the arc's ``start`` end if
        ``from_start_corner`` else beside its end.  ``terminal`` is either
        ("old", pid, tri, slot) or ("end", anchor_pid): the far attachment.
        """
        fix_cids = _dedupe([s[0][1] for s in fix_sides])
        fix_pids = self._junction_pids(fix_sides)
        if from_start_corner:
            cid_path = fix_cids
            pid_path = fix_pids
        else:
            cid_path = list(reversed(fix_cids))
            pid_path = list(reversed(fix_pids))
        new_points = []
        for pid in pid_path:
            after = self._face_far_side(piece, pid)
            new_points.append((pid, after))
        chords = []
        prev_end = ("old", p_before[0], p_before[2])
        prev_tri = p_before[1]
        for k, cid in enumerate(cid_path):
            tri = self.ov.chords[cid][1]
            if k < len(pid_path):
                anchor = pid_path[k]
                here = ("new", k, self._chord_slot_at(cid, anchor))
                chords.append(_NewChord(tri, prev_end, here))
                nxt_cid = cid_path[k + 1]
                prev_end = ("new", k, self._chord_slot_at(nxt_cid, anchor))
            else:
                if terminal[0] == "old":
                    chords.append(_NewChord(
                        tri, prev_end, ("old", terminal[1], terminal[3])))
                else:
                    anchor = terminal[1]
                    chords.append(_NewChord(
                        tri, prev_end,
                        ("end", None, self._chord_slot_at(cid, anchor))))
        return new_points, chords

    # -- extraction -----------------------------------------------------------

    def _extract_bigon(self, piece, labels, corners):
        (nx, i1), (ny, i2) = corners
        arc_a = self._arc_sides(labels, i1, i2)
        arc_b = self._arc_sides(labels, i2, i1)
        lay_a = {self._side_layer(s) for s in arc_a}
        lay_b = {self._side_layer(s) for s in arc_b}
        if lay_a == {self.mobile} and self.mobile not in lay_b:
            mob, fix = arc_a, arc_b
        elif lay_b == {self.mobile} and self.mobile not in lay_a:
            mob, fix = arc_b, arc_a
        else:
            return None
        # mobile run goes (circle order) corner_start -> corner_end; the
        # fixed arc then runs corner_end -> corner_start, so the parallel
        # path follows it reversed (i.e. not from its start corner).
        mob_pids = self._junction_pids(mob)
        mob_cids = _dedupe([s[0][1] for s in mob])
        p_before = self._survivor_behind(mob[0])
        p_after = self._survivor_ahead(mob[-1])
        terminal = ("old", p_after[0], p_after[1], p_after[2])
        new_points, chords = self._build_parallel_path(
            piece, fix, False, p_before, terminal)
        return _Rewrite(mob_cids, mob_pids, new_points, chords)

    def _extract_half(self, piece, labels, corners):
        n = len(labels)
        (nx, i1), = corners
        sides_after = []
        i = (i1 + 1) % n
        while labels[i][0][0] == "ch":
            sides_after.append(labels[i])
            i = (i + 1) % n
        sides_before = []
        i = i1
        while labels[i][0][0] == "ch":
            sides_before.insert(0, labels[i])
            i = (i - 1) % n
        lay_b = {self._side_layer(s) for s in sides_before}
        lay_a = {self._side_layer(s) for s in sides_after}
        if lay_b == {self.mobile} and self.mobile not in lay_a:
            mob, fix = sides_before, sides_after
            mob_end_node = mob[0][2]
            p_before = self._survivor_ahead(mob[-1])
            fix_from_corner = True
            f_end_node = fix[-1][3]
        elif lay_a == {self.mobile} and self.mobile not in lay_b:
            mob, fix = sides_after, sides_before
            mob_end_node = mob[-1][3]
            p_before = self._survivor_behind(mob[0])
            fix_from_corner = False
            f_end_node = fix[0][2]
        else:
            return None
        if mob_end_node[0] != "p" or f_end_node[0] != "p":
            return None
        old_endpoint = mob_end_node[1]
        f_end = f_end_node[1]
        if self.ov.point_layer[old_endpoint] != self.mobile:
            return None
        if not self.ov.frame.is_boundary_edge(self.ov.point_edge[f_end]):
            return None
        mob_pids = self._junction_pids(mob)
        mob_cids = _dedupe([s[0][1] for s in mob])
        new_points, chords = self._build_parallel_path(
            piece, fix, fix_from_corner, p_before, ("end", f_end))
        after = self._face_far_side(piece, f_end)
        return _Rewrite(mob_cids, mob_pids, new_points, chords,
                        old_endpoint=old_endpoint,
                        new_endpoint=(f_end, after))

    # -- application ----------------------------------------------------------

    def _apply(self, rw: _Rewrite):
        ov = self.ov
        for cid in rw.mobile_cids:
            del ov.chords[cid]
        doomed = set(rw.mobile_pids)
        if rw.old_endpoint is not None:
            doomed.add(rw.old_endpoint)
        for pid in doomed:
            e = ov.point_edge[pid]
            ov.edge_order[e].remove(pid)
            del ov.point_edge[pid]
            del ov.point_layer[pid]
        created = []
        for anchor, after in rw.new_points:
            e = ov.point_edge[anchor]
            idx = ov.edge_order[e].index(anchor)
            npid = ov._next_pid
            ov._next_pid += 1
            ov.point_edge[npid] = e
            ov.point_layer[npid] = self.mobile
            ov.edge_order[e].insert(idx + 1 if after else idx, npid)
            created.append(npid)
        end_pid = None
        if rw.new_endpoint is not None:
            anchor, after = rw.new_endpoint
            e = ov.point_edge[anchor]
            idx = ov.edge_order[e].index(anchor)
            end_pid = ov._next_pid
            ov._next_pid += 1
            ov.point_edge[end_pid] = e
            ov.point_layer[end_pid] = self.mobile
            ov.edge_order[e].insert(idx + 1 if after else idx, end_pid)

        def resolve(end):
            kind, ref, slot = end
            if kind == "old":
                return (ref, slot)
            if kind == "new":
                return (created[ref], slot)
            return (end_pid, slot)

        for nc in rw.new_chords:
            cid = ov._next_cid
            ov._next_cid += 1
            ov.chords[cid] = (self.mobile, nc.tri,
                              resolve(nc.end_a), resolve(nc.end_b))
        ov._dirty = True


def reduce_overlay(overlay: Overlay) -> Overlay:
    """Stagewise minimal position: layer k is reduced against the union of
    layers below it; lower layers never move again."""
    for k in range(1, overlay.num_layers):
        Reducer(overlay, k, set(range(k))).run()
    return overlay


def geometric_intersection(c1: NormalCurve, c2: NormalCurve) -> int:
    """Minimal transverse intersection number of two normal multicurves."""
    if c1.frame is not c2.frame:
        raise CurveError("curves live on different frames")
    ov = Overlay(c1.frame, [c1, c2])
    Reducer(ov, 1, {0}).run()
    return ov.crossings({0}, {1})


def layer_component_events(ov: Overlay, li: int):
    """Re-walk one layer of an overlay into strand event lists.

    Returns [(closed, events)] per component, with events in the format
    of curves._component_events.
    """
    by_pid: dict[int, list[int]] = {}
    for cid, (layer, t, (pa, sa), (pb, sb)) in ov.chords.items():
        if layer != li:
            continue
        by_pid.setdefault(pa, []).append(cid)
        by_pid.setdefault(pb, []).append(cid)
    for pid, cids in by_pid.items():
        want = 1 if ov.frame.is_boundary_edge(ov.point_edge[pid]) else 2
        if len(cids) != want:
            raise OverlayError(
                f"point {pid} has {len(cids)} layer-{li} chords")
    unused = {cid for cid, c in ov.chords.items() if c[0] == li}

    def chord_ends(cid):
        _, t, (pa, sa), (pb, sb) = ov.chords[cid]
        return (pa, (t, sa)), (pb, (t, sb))

    def walk(cid, start_pid):
        events = []
        cur, enter = cid, start_pid
        while True:
            unused.discard(cur)
            (pa, sla), (pb, slb) = chord_ends(cur)
            out_pid, out_slot = (pb, slb) if enter == pa else (pa, sla)
            nxts = [c for c in by_pid[out_pid] if c != cur]
            if not nxts or ov.frame.is_boundary_edge(
                    ov.point_edge[out_pid]):
                events.append(("b", out_slot))
                return events, False
            nxt = nxts[0]
            if nxt not in unused:
                land = ov.frame.gluing[out_slot]
                events.append(("x", out_slot, land))
                return events, True
            (qa, qsa), (qb, qsb) = chord_ends(nxt)
            land = qsa if qa == out_pid else qsb
            events.append(("x", out_slot, land))
            cur, enter = nxt, out_pid
        raise OverlayError("unreachable")

    comps = []
    # arcs first: deterministic over endpoint pids
    endpoints = sorted(pid for pid, cids in by_pid.items()
                       if ov.frame.is_boundary_edge(ov.point_edge[pid]))
    for pid in endpoints:
        cid = by_pid[pid][0]
        if cid not in unused:
            continue
        _, t, (pa, sa), (pb, sb) = ov.chords[cid]
        start_slot = (t, sa) if pa == pid else (t, sb)
        events, closed = walk(cid, pid)
        comps.append((False, [("b", start_slot)] + events))
    while unused:
        cid = min(unused)
        (pa, sla), _ = chord_ends(cid)
        events, closed = walk(cid, pa)
        if not closed:
            raise OverlayError("closed walk ended on the boundary")
        comps.append((True, events))
    return comps


def layer_curve(ov: Overlay, li: int, canonicalise: bool = True):
    """The isotopy class of one layer, reading its current position."""
    from .curves import _cancel_returns, _event_weights, canonical_form
    counts = [0] * ov.frame.num_edges
    kind = ov.kinds[li]
    for closed, events in layer_component_events(ov, li):
        events = _cancel_returns(events, closed)
        if not events and closed:
            raise OverlayError("layer component became null-homotopic")
        for w, c in enumerate(_event_weights(ov.frame, events)):
            counts[w] += c
    curve = NormalCurve(ov.frame, counts, kind)
    return canonical_form(curve) if canonicalise else curve


def algebraic_intersection(c1: NormalCurve, c2: NormalCurve) -> int:
    """Signed intersection sum of the raw overlay: a homology pairing,
    well defined given the deterministic trace orientations."""
    if c1.frame is not c2.frame:
        raise CurveError("curves live on different frames")
    ov = Overlay(c1.frame, [c1, c2])
    arrs, cells, walks, occ = ov.build_cells()
    total = 0
    for t, arr in arrs.items():
        for key, (xn, yn, den) in arr.coords.items():
            if key[0] != "x":
                continue
            cid_a, cid_b = key[2], key[3]
            la = ov.chords[cid_a][0]
            if la != 0:
                cid_a, cid_b = cid_b, cid_a
            _, _, (pa, sa), (pb, sb) = ov.chords[cid_a]
            _, _, (qa, qsa), (qb, qsb) = ov.chords[cid_b]
            ca, cb = arr.coords[("p", pa)], arr.coords[("p", pb)]
            da, db = arr.coords[("p", qa)], arr.coords[("p", qb)]
            va = (cb[0] - ca[0], cb[1] - ca[1])
            vb = (db[0] - da[0], db[1] - da[1])
            cr = va[0] * vb[1] - va[1] * vb[0]
            total += 1 if cr > 0 else -1
    return total


def intersection_parity(c1: NormalCurve, c2: NormalCurve) -> int:
    """Mod-2 intersection number (isotopy invariant; no reduction)."""
    ov = Overlay(c1.frame, [c1, c2])
    return ov.crossings({0}, {1}) % 2
