"""Surface-level predicates built on cutting: essentiality, separation,
filling pairs, regular-neighbourhood boundaries and boundary collars."""

from __future__ import annotations

from .curves import (ARC, CLOSED, CurveError, NormalCurve, _cancel_returns,
                     _event_weights, _fan_crossing, _vertex_cycle_data,
                     canonical_form)
from .cutting import CutError, CutSurface, PieceSurface
from .frames import Triangulation
from .realization import Overlay, Reducer


def boundary_slot_cycles(frame: Triangulation):
    """Boundary circles as cyclic tuples of boundary slots (t, s)."""
    comps = frame.boundary_components()
    out = []
    for comp in comps:
        slots = []
        for e in comp:
            (t, s), = frame.edge_sides[e]
            slots.append((t, s))
        out.append(tuple(slots))
    return out


def boundary_collar(frame: Triangulation, circle_slots) -> NormalCurve:
    """The closed curve parallel to one boundary circle.

    Walking the circle, the collar crosses every interior edge end hanging
    off each boundary vertex it passes.
    """
    events = []
    for (t, s) in circle_slots:
        # arriving along boundary slot (t, s); its head vertex chain ends
        # here, so the collar wraps the chain descending
        u = frame.vertex_of[(t, (s + 1) % 3)]
        corners, ends, index = _vertex_cycle_data(frame, u)
        L = len(corners)
        for j in range(L - 2, -1, -1):
            events.append(_fan_crossing(frame, corners, j, False))
    events = _cancel_returns(events, closed=True)
    if not events:
        raise CurveError("boundary collar is degenerate")
    return canonical_form(
        NormalCurve(frame, _event_weights(frame, events), CLOSED))


def peripheral_classes(frame: Triangulation) -> list[NormalCurve]:
    """Canonical classes of curves parallel to each boundary circle."""
    cache = getattr(frame, "_peripheral_cache", None)
    if cache is None:
        cache = [boundary_collar(frame, c)
                 for c in boundary_slot_cycles(frame)]
        frame._peripheral_cache = cache
    return cache


def is_peripheral(c: NormalCurve) -> bool:
    if c.kind != CLOSED:
        raise CurveError("peripherality is for closed curves")
    cc = c.canonical()
    return any(cc == p for p in peripheral_classes(c.frame))


def bounds_disk_in_surface(c: NormalCurve) -> bool:
    """Whether a connected closed curve bounds a disk in its surface."""
    cut = CutSurface(c.frame, c)
    return any(ps.chi == 1 for ps in cut.pieces)


def is_essential(c: NormalCurve) -> bool:
    """Essential = bounds no disk and is not parallel to the boundary.

    Closed connected curves only; arcs have ``is_essential_arc``.
    """
    if c.kind != CLOSED:
        raise CurveError("arc essentiality is a separate test")
    if c.is_empty or not c.is_connected:
        return False
    if bounds_disk_in_surface(c):
        return False
    return not is_peripheral(c)


def is_essential_arc(a: NormalCurve) -> bool:
    """An arc is essential when it does not cut a disk off the surface."""
    if a.kind != ARC:
        raise CurveError("expected an arc system")
    if a.is_empty or not a.is_connected:
        return False
    ov = Overlay(a.frame, [a])
    for piece in ov.faces({0}):
        if piece.chi != 1 or len(piece.circles) != 1:
            continue
        labels = piece.circle_labels(piece.circles[0])
        runs = 0
        prev_chord = False
        kinds = [key[0] == "ch" for (key, info, u, v) in labels]
        for i, k in enumerate(kinds):
            if k and not kinds[i - 1]:
                runs += 1
        if runs == 1:
            return False  # half-disk between the arc and the boundary
    return True


def is_separating(c: NormalCurve) -> bool:
    if not is_essential(c):
        raise CurveError("separation asks for an essential curve")
    return len(CutSurface(c.frame, c).pieces) == 2


class MinimalPair:
    """Two curve systems in minimal position, with complement analysis."""

    def __init__(self, a: NormalCurve, b: NormalCurve):
        if a.frame is not b.frame:
            raise CurveError("curves on different frames")
        self.a = a
        self.b = b
        self.overlay = Overlay(a.frame, [a, b])
        Reducer(self.overlay, 1, {0}).run()
        self._pieces = None

    @property
    def intersection(self) -> int:
        return self.overlay.crossings({0}, {1})

    def pieces(self):
        if self._pieces is None:
            faces = self.overlay.faces({0, 1})
            self._pieces = [
                PieceSurface(self.a.frame, None, self.overlay, piece, i,
                             f"{self.a.frame.version}/pair/{i}")
                for i, piece in enumerate(faces)]
        return self._pieces

    def fills(self) -> bool:
        """Every complement component a disk or boundary-parallel annulus."""
        for ps in self.pieces():
            if ps.chi == 1 and len(ps.piece.circles) == 1:
                continue
            if ps.chi == 0 and len(ps.piece.circles) == 2:
                kinds = []
                for walk in ps.piece.circles:
                    labels = ps.piece.circle_labels(walk)
                    kinds.append({key[0] for (key, info, u, v) in labels})
                if {"gap"} in kinds and {"ch"} in kinds:
                    continue
            return False
        return True

    def complement_curves(self) -> list[NormalCurve]:
        """Canonical ambient classes of the complement boundary circles:
        every essential curve here is disjoint from both inputs."""
        out = set()
        for ps in self.pieces():
            frame = ps.frame
            for circle in boundary_slot_cycles(frame):
                try:
                    collar = boundary_collar(frame, circle)
                except CurveError:
                    continue
                try:
                    amb = ps.include(collar)
                except CutError:
                    continue
                out.add(amb)
        return sorted(out, key=lambda c: c.key())


def geometric_intersection_pair(a, b) -> int:
    return MinimalPair(a, b).intersection


def neighborhood_boundary(parts: list[NormalCurve],
                          discard_inessential: bool = False):
    """Boundary multicurve classes of a regular neighbourhood of a union
    of curves/arcs in pairwise minimal position.

    Returns the canonical classes of the boundary circles (with
    multiplicity), sorted; optionally drops inessential components.
    """
    if not parts:
        raise CurveError("empty union")
    frame = parts[0].frame
    for p in parts:
        if p.frame is not frame:
            raise CurveError("parts on different frames")
    ov = Overlay(frame, parts)
    for k in range(1, len(parts)):
        Reducer(ov, k, set(range(k))).run()
    faces = ov.faces(set(range(len(parts))))
    out = []
    for i, piece in enumerate(faces):
        ps = PieceSurface(frame, None, ov, piece, i,
                          f"{frame.version}/nbhd/{i}")
        for circle, slot_cycle in circle_slot_cycles(ps):
            labels = ps.piece.circle_labels(circle)
            if all(key[0] == "gap" for (key, info, u, v) in labels):
                continue  # a component of the ambient boundary, not of N
            collar = boundary_collar(ps.frame, slot_cycle)
            amb = ps.include(collar)
            if discard_inessential and not is_essential(amb):
                continue
            out.append(amb)
    return sorted(out, key=lambda c: c.key())


def circle_slot_cycles(ps: PieceSurface):
    """Pair each piece-complex boundary circle with the matching boundary
    slot cycle of the rebuilt piece frame."""
    frame_cycles = boundary_slot_cycles(ps.frame)
    out = []
    for circle in ps.piece.circles:
        edges = {ps.frame.edge_of[(ps.tri_id[side], 1)] for side in circle}
        match = [cyc for cyc in frame_cycles
                 if {ps.frame.edge_of[sl] for sl in cyc} == edges]
        if len(match) != 1:
            raise CutError("ambiguous circle correspondence")
        out.append((circle, match[0]))
    return out
