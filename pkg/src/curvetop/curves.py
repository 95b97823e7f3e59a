"""Normal multicurves and arc systems in edge-weight coordinates.

A multicurve on a frame is recorded by one non-negative integer per edge
(the number of transverse crossings).  Inside each triangle the crossings
pair off into chords cutting the three corners; the corner counts are
``n_i = (w_i + w_{i-1} - w_{i+1}) / 2`` for slot weights ``w``.  Arcs are
carried in the same scheme: their endpoints are the crossings on boundary
edges.

Equality of *canonical* coordinates is the package's notion of isotopy.
Canonical form minimises total weight over sweeps across interior vertices
(and endpoint slides across boundary vertices for arcs), breaking ties by
lexicographic order.  Uniqueness of the minimal representative on
one-vertex frames has known corner cases; the test suite pins the ones we
rely on.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .frames import Triangulation

CLOSED = "closed"
ARC = "arc"

_CANON_STATE_BUDGET = 40000


class CurveError(ValueError):
    """Invalid normal coordinates or an unsatisfied precondition."""


@dataclass(frozen=True)
class Step:
    """One chord of a traced component: enter ``tri`` through ``in_slot``
    at slot-local position ``in_pos``, leave through ``out_slot``."""

    tri: int
    in_slot: int
    in_pos: int
    out_slot: int
    out_pos: int

    @property
    def corner(self) -> int:
        a, b = self.in_slot, self.out_slot
        if {a, b} == {0, 1}:
            return 1
        if {a, b} == {1, 2}:
            return 2
        return 0

    @property
    def nesting(self) -> int:
        """Depth of this chord at its corner (0 = nearest the vertex)."""
        c = self.corner
        return self.out_pos if self.out_slot == c else self.in_pos

    def reversed(self) -> "Step":
        return Step(self.tri, self.out_slot, self.out_pos,
                    self.in_slot, self.in_pos)


@dataclass(frozen=True)
class Component:
    steps: tuple[Step, ...]
    closed: bool
    # for arcs: (edge, canonical position) of the two endpoints
    endpoints: tuple[tuple[int, int], ...] = ()


def corner_counts(frame: Triangulation, weights) -> list[list[int]]:
    """Per-triangle corner counts; raises CurveError if not matching."""
    out = []
    for t in range(frame.num_triangles):
        w = [weights[frame.edge_of[(t, s)]] for s in range(3)]
        ns = []
        for i in range(3):
            val = w[i] + w[(i - 1) % 3] - w[(i + 1) % 3]
            if val < 0 or val % 2:
                raise CurveError(
                    f"weights {tuple(weights)} fail matching in triangle {t}")
            ns.append(val // 2)
        out.append(ns)
    return out


def is_admissible(frame: Triangulation, weights, kind: str = CLOSED) -> bool:
    try:
        NormalCurve(frame, weights, kind)
    except CurveError:
        return False
    return True


class NormalCurve:
    """An isotopy class (once canonicalised) of a normal multicurve or arc
    system on a fixed frame.  Immutable."""

    __slots__ = ("frame", "weights", "kind", "_trace", "_hash")

    def __init__(self, frame: Triangulation, weights, kind: str = CLOSED):
        if kind not in (CLOSED, ARC):
            raise CurveError(f"unknown kind {kind!r}")
        weights = tuple(int(x) for x in weights)
        if len(weights) != frame.num_edges:
            raise CurveError(
                f"expected {frame.num_edges} weights, got {len(weights)}")
        if any(x < 0 for x in weights):
            raise CurveError("weights must be non-negative")
        if kind == CLOSED:
            for e in frame.boundary_edges:
                if weights[e]:
                    raise CurveError("closed multicurve crosses boundary edge")
        self.frame = frame
        self.weights = weights
        self.kind = kind
        self._trace: tuple[Component, ...] | None = None
        self._hash = hash((id(frame), weights, kind))
        corner_counts(frame, weights)  # validate on construction

    def __eq__(self, other):
        return (isinstance(other, NormalCurve) and self.frame is other.frame
                and self.weights == other.weights and self.kind == other.kind)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"NormalCurve({self.kind}, {self.weights})"

    @property
    def total_weight(self) -> int:
        return sum(self.weights)

    @property
    def is_empty(self) -> bool:
        return self.total_weight == 0

    def key(self):
        """Deterministic sort key."""
        return (self.total_weight, self.kind, self.weights)

    def trace(self) -> tuple[Component, ...]:
        if self._trace is None:
            self._trace = _trace_components(self.frame, self.weights)
        return self._trace

    @property
    def component_count(self) -> int:
        return len(self.trace())

    @property
    def is_connected(self) -> bool:
        return self.component_count == 1

    def canonical(self) -> "NormalCurve":
        return canonical_form(self)

    def vertex_linking_components(self) -> list[int]:
        """Indices of components that are links of interior vertices."""
        out = []
        for ci, comp in enumerate(self.trace()):
            if not comp.closed:
                continue
            verts = {self.frame.vertex_of[(st.tri, st.corner)]
                     for st in comp.steps}
            if len(verts) != 1:
                continue
            v = verts.pop()
            if not self.frame.vertex_interior[v]:
                continue
            corners = [(st.tri, st.corner) for st in comp.steps]
            if sorted(corners) == sorted(self.frame.vertex_corners[v]):
                out.append(ci)
        return out


def _trace_components(frame: Triangulation, weights) -> tuple[Component, ...]:
    ns = corner_counts(frame, weights)
    chord_at_point: dict[tuple[int, int], list[tuple]] = {}

    def canon_pt(t, s, pos):
        e = frame.edge_of[(t, s)]
        return (e, frame.slot_weight_order(t, s, weights[e], pos))

    chords = []
    for t in range(frame.num_triangles):
        w = [weights[frame.edge_of[(t, s)]] for s in range(3)]
        for i in range(3):
            for k in range(ns[t][i]):
                s_in = (i - 1) % 3
                chord = (t, i, k, s_in, w[s_in] - 1 - k, i, k)
                chords.append(chord)
                chord_at_point.setdefault(
                    canon_pt(t, s_in, w[s_in] - 1 - k), []).append(chord)
                chord_at_point.setdefault(canon_pt(t, i, k), []).append(chord)

    for (e, pos), lst in chord_at_point.items():
        want = 1 if frame.is_boundary_edge(e) else 2
        if len(lst) != want:
            raise CurveError(
                f"point {pos} on edge {e} has {len(lst)} chord ends, "
                f"expected {want}")

    def step_from(chord, enter_slot):
        t, i, k, s_a, p_a, s_b, p_b = chord
        if enter_slot == s_a:
            return Step(t, s_a, p_a, s_b, p_b)
        return Step(t, s_b, p_b, s_a, p_a)

    unused = set(chords)

    def other_chord(pt, chord):
        lst = chord_at_point[pt]
        if len(lst) == 1:
            return None
        return lst[1] if lst[0] == chord else lst[0]

    def walk(chord, enter_slot):
        steps = []
        cur, s_enter = chord, enter_slot
        while True:
            st = step_from(cur, s_enter)
            steps.append(st)
            unused.discard(cur)
            exit_pt = canon_pt(st.tri, st.out_slot, st.out_pos)
            nxt = other_chord(exit_pt, cur)
            if nxt is None:
                return steps, exit_pt  # hit a boundary edge: arc end
            if nxt not in unused:
                return steps, None  # closed up
            for s2, p2 in ((nxt[3], nxt[4]), (nxt[5], nxt[6])):
                if canon_pt(nxt[0], s2, p2) == exit_pt:
                    cur, s_enter = nxt, s2
                    break
            else:
                raise CurveError("trace failed to continue")

    components = []
    boundary_starts = sorted(pt for pt in chord_at_point
                             if frame.is_boundary_edge(pt[0]))
    for pt in boundary_starts:
        chord = chord_at_point[pt][0]
        if chord not in unused:
            continue
        t = chord[0]
        enter = chord[3] if canon_pt(t, chord[3], chord[4]) == pt else chord[5]
        steps, endpt = walk(chord, enter)
        if endpt is None:
            raise CurveError("component starting on boundary failed to end")
        components.append(Component(tuple(steps), closed=False,
                                    endpoints=(pt, endpt)))
    while unused:
        chord = min(unused)
        steps, endpt = walk(chord, chord[3])
        if endpt is not None:
            raise CurveError("closed trace hit a boundary point")
        components.append(Component(tuple(steps), closed=True))
    return tuple(components)


# -- vertex sweeps and canonical form ----------------------------------------


def _vertex_cycle_data(frame: Triangulation, v: int):
    """Corners of vertex v in rotation order plus the edge crossed between
    corner j and corner j+1 (the edge under slot (c_j - 1) of corner j)."""
    cache = getattr(frame, "_vcycle_cache", None)
    if cache is None:
        cache = {}
        frame._vcycle_cache = cache
    if v not in cache:
        corners = frame.vertex_corners[v]
        ends = []
        for (t, c) in corners:
            slot = (t, (c - 1) % 3)
            ends.append(frame.edge_of.get(slot))
        index = {c: j for j, c in enumerate(corners)}
        cache[v] = (corners, ends, index)
    return cache[v]


def _component_runs(curve: NormalCurve, comp: Component):
    """Maximal innermost runs of a component hugging one interior vertex.

    A run is a chain of nesting-0 chords whose consecutive members sit at
    rotation-adjacent corners and share the crossing at the vertex end of
    the edge between those corners.  Yields (vertex, steps in strand order).
    """
    frame = curve.frame
    steps = comp.steps
    n = len(steps)

    def hug_vertex(i):
        st = steps[i]
        v = frame.vertex_of[(st.tri, st.corner)]
        if st.nesting != 0 or not frame.vertex_interior[v]:
            return None
        return v

    def continues(i, j):
        """Step j extends the run of step i around their common vertex."""
        v = hug_vertex(i)
        if v is None or hug_vertex(j) != v:
            return False
        corners, _ends, index = _vertex_cycle_data(frame, v)
        L = len(corners)
        si, sj = steps[i], steps[j]
        ji = index[(si.tri, si.corner)]
        jj = index[(sj.tri, sj.corner)]
        if si.out_slot == (si.corner - 1) % 3:
            return jj == (ji + 1) % L  # exits across end[ji]
        return jj == (ji - 1) % L      # exits across end[ji - 1]

    runs = []
    used = [False] * n
    for i in range(n):
        if used[i] or hug_vertex(i) is None:
            continue
        lo = hi = i
        closed_loop = False
        while True:
            j = (hi + 1) % n if comp.closed else hi + 1
            if not comp.closed and j >= n:
                break
            if j == lo and comp.closed:
                if continues(hi, j):
                    closed_loop = True
                break
            if used[j] or not continues(hi, j):
                break
            hi = j
            used[j] = True
        if not closed_loop:
            while True:
                j = (lo - 1) % n if comp.closed else lo - 1
                if not comp.closed and j < 0:
                    break
                if j == hi and comp.closed:
                    break
                if used[j] or not continues(j, lo):
                    break
                lo = j
                used[j] = True
        used[i] = True
        if closed_loop:
            continue  # component encircles the vertex: no sweep move
        idxs = []
        j = lo
        while True:
            idxs.append(j)
            if j == hi:
                break
            j = (j + 1) % n if comp.closed else j + 1
        if comp.closed and len(idxs) == n:
            continue  # sweeping an entire closed component: skip
        runs.append((hug_vertex(i), idxs))
    return runs


def _component_events(frame: Triangulation, comp: Component):
    """The component as a strand event list: directed interior crossings
    ("x", depart_slot, land_slot) with boundary endpoints ("b", slot)."""
    evs = []
    n = len(comp.steps)
    if not comp.closed:
        st0 = comp.steps[0]
        evs.append(("b", (st0.tri, st0.in_slot)))
    for i, st in enumerate(comp.steps):
        dep = (st.tri, st.out_slot)
        if not comp.closed and i == n - 1:
            evs.append(("b", dep))
        else:
            land = frame.gluing.get(dep)
            if land is None:
                raise CurveError("closed strand crossed a boundary edge")
            evs.append(("x", dep, land))
    return evs


def _cancel_returns(evs, closed):
    """Remove adjacent crossing pairs through the same slot (the strand
    enters and immediately leaves a triangle through one edge)."""
    evs = list(evs)
    changed = True
    while changed and evs:
        changed = False
        n = len(evs)
        last = n if closed else n - 1
        for i in range(last):
            a, b = evs[i], evs[(i + 1) % n]
            if a[0] != "x" or b[0] != "x":
                continue
            if a[2] == b[1]:
                for j in sorted((i, (i + 1) % n), reverse=True):
                    evs.pop(j)
                changed = True
                break
    return evs


def _event_weights(frame: Triangulation, evs) -> list[int]:
    counts = [0] * frame.num_edges
    for ev in evs:
        counts[frame.edge_of[ev[1]]] += 1
    return counts


def _check_event_chain(evs, closed):
    n = len(evs)
    last = n if closed else n - 1
    for i in range(last):
        a, b = evs[i], evs[(i + 1) % n]
        t_in = a[2][0] if a[0] == "x" else a[1][0]
        t_out = b[1][0]
        if t_in != t_out:
            raise CurveError("event chain is not triangle-consistent")


def _fan_crossing(frame, corners, j, ascending):
    """Directed crossing over the end between corners j and j+1 of a
    vertex rotation, travelling with or against the rotation order."""
    L = len(corners)
    t_j, c_j = corners[j]
    t_k, c_k = corners[(j + 1) % L]
    lo_side = (t_j, (c_j - 1) % 3)
    hi_side = (t_k, c_k)
    if ascending:
        return ("x", lo_side, hi_side)
    return ("x", hi_side, lo_side)


def _sweep_weights(curve: NormalCurve, comp_idx: int, v: int, idxs):
    """Coordinates after sweeping an innermost run across vertex v: splice
    the complementary fan route into the strand and cancel returns."""
    frame = curve.frame
    comp = curve.trace()[comp_idx]
    steps = comp.steps
    n = len(steps)
    corners, ends, index = _vertex_cycle_data(frame, v)
    L = len(corners)
    m = len(idxs)
    cov = [index[(steps[j].tri, steps[j].corner)] for j in idxs]
    if m >= L:
        return None
    if m > 1:
        ascending = (cov[1] - cov[0]) % L == 1
        if not ascending and (cov[1] - cov[0]) % L != L - 1:
            raise CurveError("run is not rotation-consecutive")
    else:
        st = steps[idxs[0]]
        ascending = st.out_slot == (st.corner - 1) % 3
    evs = _component_events(frame, comp)
    # crossing i of a closed component sits after step i; removed span:
    # entry crossing (before the run), internals, exit crossing (after)
    lo, hi = idxs[0], idxs[-1]
    if comp.closed:
        removed = {(lo - 1) % n}
        j = lo
        while True:
            removed.add(j)
            if j == hi:
                break
            j = (j + 1) % n
    else:
        if lo == 0 or hi == n - 1:
            return None  # run touches an arc endpoint: handled by slides
        removed = set(range(lo - 1, hi + 1))
        removed = {i + 1 for i in removed}  # arc events are offset by "b"
    if ascending:
        route = [_fan_crossing(frame, corners, (cov[0] - 1 - i) % L, False)
                 for i in range(1, L - m)]
    else:
        route = [_fan_crossing(frame, corners, (cov[0] + i) % L, True)
                 for i in range(1, L - m)]
    out = []
    inserted = False
    for i, ev in enumerate(evs):
        if i in removed:
            if not inserted:
                out.extend(route)
                inserted = True
            continue
        out.append(ev)
    if not inserted:  # removal span wrapped the end of the cyclic list
        out.extend(route)
    _check_event_chain(out, comp.closed)
    out = _cancel_returns(out, comp.closed)
    if comp.closed and not out:
        return None  # the component was null-homotopic; no normal image
    old = _event_weights(frame, _component_events(frame, comp))
    new = _event_weights(frame, out)
    result = tuple(w - o + c for w, o, c in zip(curve.weights, old, new))
    try:
        corner_counts(frame, result)
    except CurveError:
        return None  # swept position has no normal representative
    return result


def _slide_weights(curve: NormalCurve, comp_idx: int):
    """Coordinates after sliding an arc endpoint across an adjacent
    boundary vertex (both endpoints, both directions where eligible)."""
    frame = curve.frame
    comp = curve.trace()[comp_idx]
    results = []
    for end_idx in (0, 1):
        edge, cpos = comp.endpoints[end_idx]
        (t0, s0), = frame.edge_sides[edge]
        w = curve.weights[edge]
        for local_extreme, corner_c in ((0, s0), (w - 1, (s0 + 1) % 3)):
            if frame.slot_weight_order(t0, s0, w, local_extreme) != cpos:
                continue
            u = frame.vertex_of[(t0, corner_c)]
            if frame.vertex_interior[u]:
                raise CurveError("boundary edge ends at an interior vertex")
            corners, ends, index = _vertex_cycle_data(frame, u)
            L = len(corners)
            if (t0, corner_c) == corners[0]:
                from_low = True
            elif (t0, corner_c) == corners[-1]:
                from_low = False
            else:
                raise CurveError("endpoint corner is not a chain end")
            evs = _component_events(frame, comp)
            if end_idx == 1:
                evs = [_flip_event(ev) for ev in reversed(evs)]
            t_last, c_last = corners[-1]
            t_first, c_first = corners[0]
            if from_low:
                new_b = ("b", (t_last, (c_last - 1) % 3))
                wrap = [_fan_crossing(frame, corners, j, False)
                        for j in range(L - 2, -1, -1)]
            else:
                new_b = ("b", (t_first, c_first))
                wrap = [_fan_crossing(frame, corners, j, True)
                        for j in range(0, L - 1)]
            out = [new_b] + wrap + evs[1:]
            _check_event_chain(out, closed=False)
            out = _cancel_returns(out, closed=False)
            old = _event_weights(frame, _component_events(frame, comp))
            new = _event_weights(frame, out)
            result = tuple(wt - o + c for wt, o, c in
                           zip(curve.weights, old, new))
            try:
                corner_counts(frame, result)
            except CurveError:
                continue  # slid into a position with no normal coordinates
            results.append(result)
    return results


def _flip_event(ev):
    if ev[0] == "b":
        return ev
    return ("x", ev[2], ev[1])


def _moves(curve: NormalCurve):
    """All coordinate vectors one vertex sweep or endpoint slide away."""
    for ci, comp in enumerate(curve.trace()):
        for v, idxs in _component_runs(curve, comp):
            w = _sweep_weights(curve, ci, v, idxs)
            if w is not None:
                yield w
        if not comp.closed:
            yield from _slide_weights(curve, ci)


def canonical_form(curve: NormalCurve) -> NormalCurve:
    """Minimal-weight, lexicographically least coordinates reachable by
    weight-non-increasing sweeps across vertices."""
    frame = curve.frame
    start = curve.weights
    seen = {start}
    heap = [(sum(start), start)]
    best_total = sum(start)
    best_states = {start}
    while heap:
        total, weights = heapq.heappop(heap)
        if total < best_total:
            best_total = total
            best_states = {weights}
        elif total == best_total:
            best_states.add(weights)
        cur = NormalCurve(frame, weights, curve.kind)
        for neww in _moves(cur):
            if sum(neww) > total or neww in seen:
                continue
            seen.add(neww)
            if len(seen) > _CANON_STATE_BUDGET:
                raise CurveError("canonicalisation state budget exceeded")
            heapq.heappush(heap, (sum(neww), neww))
    return NormalCurve(frame, min(best_states), curve.kind)
