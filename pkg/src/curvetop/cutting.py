"""Cutting surfaces along multicurves and moving curves across the cut.

A cut piece is rebuilt as its own triangulation: every complement cell of
the cut locus is coned from a fresh interior vertex, so a cell with k
sides contributes k triangles (side i lives on slot 1 of triangle i).
Each piece keeps enough of the embedding to transfer ambient curves into
piece coordinates and to include piece curves back into the ambient
frame; both directions canonicalise, so the round trip is the identity
on isotopy classes.
"""

from __future__ import annotations

from .curves import (ARC, CLOSED, CurveError, NormalCurve, _cancel_returns,
                     _event_weights, canonical_form)
from .frames import Surface, Triangulation
from .realization import Overlay, OverlayError, Reducer


class CutError(ValueError):
    pass


class PieceSurface:
    """One component of the complement of a multicurve, re-triangulated."""

    def __init__(self, ambient: Triangulation, locus: NormalCurve,
                 overlay: Overlay, piece, index: int, tag: str):
        self.ambient = ambient
        self.locus = locus
        self.piece = piece
        self.index = index
        self.tag = tag
        self._build()

    def _build(self):
        piece = self.piece
        tri_id = {}
        count = 0
        for pi in range(len(piece.cells)):
            for i in range(piece.sizes[pi]):
                tri_id[(pi, i)] = count
                count += 1
        gluing = {}
        for pi in range(len(piece.cells)):
            k = piece.sizes[pi]
            for i in range(k):
                t = tri_id[(pi, i)]
                t2 = tri_id[(pi, (i + 1) % k)]
                gluing[(t, 2)] = (t2, 0)
                gluing[(t2, 0)] = (t, 2)
        for a, b in piece.complex.gluing.items():
            sa = (tri_id[a], 1)
            sb = (tri_id[b], 1)
            gluing[sa] = sb
            gluing[sb] = sa
        self.tri_id = tri_id
        self.side_of_tri = {t: side for side, t in tri_id.items()}
        self.frame = Triangulation(count, gluing, version=self.tag)

    def side_ambient(self, pi: int, i: int):
        """(edge, gap, tri, slot) when side (pi, i) lies on an ambient
        edge, else None (locus copies)."""
        key, info, u, v = self.piece.side_info[pi][i]
        if key[0] != "gap":
            return None
        return info[1], info[2], info[3], info[4]

    def genus_boundary(self) -> tuple[int, int]:
        comps = self.piece.complex.components()
        if len(comps) != 1:
            raise CutError("piece complex is not connected")
        g, b, _chi = self.piece.complex.genus_of_component(comps[0])
        return g, b

    @property
    def chi(self) -> int:
        return self.piece.chi

    def surface(self) -> Surface:
        g, b = self.genus_boundary()
        return Surface(g, b, self.frame)

    def include(self, c: NormalCurve) -> NormalCurve:
        """Isotopy class in the ambient surface of a closed piece curve."""
        if c.frame is not self.frame:
            raise CutError("curve not on this piece frame")
        if c.kind != CLOSED:
            raise CutError("only closed curves include back")
        counts = [0] * self.ambient.num_edges
        for comp in c.trace():
            events = []
            for st in comp.steps:
                if st.out_slot != 1:
                    continue  # spoke: stays in the same ambient triangle
                pi, i = self.side_of_tri[st.tri]
                amb = self.side_ambient(pi, i)
                if amb is None:
                    raise CutError("closed piece curve crossed the locus")
                e, g, t, s = amb
                if (t, s) not in self.ambient.gluing:
                    raise CutError("piece curve crossed the surface boundary")
                events.append(("x", (t, s), self.ambient.gluing[(t, s)]))
            events = _cancel_returns(events, closed=True)
            if not events:
                raise CutError("piece curve is null-homotopic upstairs")
            for e, cnt in enumerate(_event_weights(self.ambient, events)):
                counts[e] += cnt
        return canonical_form(NormalCurve(self.ambient, counts, CLOSED))


class CutSurface:
    """A frame cut along a multicurve, with curve-transfer both ways."""

    def __init__(self, frame: Triangulation, locus: NormalCurve):
        if locus.frame is not frame:
            raise CutError("locus on a different frame")
        if locus.kind != CLOSED:
            raise CutError("can only cut along closed multicurves")
        self.frame = frame
        self.locus = locus
        self.overlay = Overlay(frame, [locus])
        faces = self.overlay.faces({0})
        self.pieces = []
        for idx, piece in enumerate(faces):
            tag = (f"{frame.version}/cut{list(locus.weights)}/{idx}")
            self.pieces.append(
                PieceSurface(frame, locus, self.overlay, piece, idx, tag))
        self._build_occurrence_tables()

    def _build_occurrence_tables(self):
        """Where every gap and every locus-chord side lands in the pieces."""
        arrs, cells, walks, occ = self.overlay.build_cells()
        self.gap_occ = {}
        self.chord_occ = {}
        for pidx, ps in enumerate(self.pieces):
            piece = ps.piece
            for pi in range(len(piece.cells)):
                for i, (key, info, u, v) in enumerate(piece.side_info[pi]):
                    if key[0] == "gap":
                        e, g, t, s = info[1], info[2], info[3], info[4]
                        self.gap_occ[(e, g, t, s)] = (pidx, pi, i)
                    else:
                        cid, k = key[1], key[2]
                        t = self.overlay.chords[cid][1]
                        seg = arrs[t].segs[("ch", cid, k)]
                        forward = (seg[0], seg[1]) == (u, v)
                        self.chord_occ[(cid, forward)] = (pidx, pi, i)

    # -- transferring an ambient curve ---------------------------------------

    def transfer(self, d: NormalCurve):
        """Pieces of ``d`` inside each cut piece.

        Returns {piece index: [NormalCurve]} with closed components and
        (when ``d`` crosses the locus) arcs, all canonicalised.  ``d`` is
        put in minimal position with the locus first.
        """
        if d.frame is not self.frame:
            raise CutError("curve on a different frame")
        if d.kind != CLOSED:
            raise CutError("only closed curves transfer")
        ov = Overlay(self.frame, [self.locus, d])
        Reducer(ov, 1, {0}).run()
        out: dict[int, list[NormalCurve]] = {}
        for pidx, kind, weights in self._split(ov):
            curve = canonical_form(
                NormalCurve(self.pieces[pidx].frame, weights, kind))
            out.setdefault(pidx, []).append(curve)
        for v in out.values():
            v.sort(key=lambda c: c.key())
        return out

    def crossing_count(self, d: NormalCurve) -> int:
        ov = Overlay(self.frame, [self.locus, d])
        Reducer(ov, 1, {0}).run()
        return ov.crossings({0}, {1})

    def _split(self, ov: Overlay):
        arrs, cells, walks, occ = ov.build_cells()
        chains = self._chord_chains(ov, arrs)
        for closed, elements, segcids in self._strands(ov, chains):
            xs = [i for i, el in enumerate(elements) if el[0] == "xm"]
            if not xs:
                yield self._emit(ov, arrs, elements, segcids, closed=True)
                continue
            first = xs[0]
            els = elements[first:] + elements[:first]
            cds = segcids[first:] + segcids[:first]
            run_e, run_c = [els[0]], []
            for j, el in enumerate(els[1:] + [els[0]]):
                run_c.append(cds[j])
                run_e.append(el)
                if el[0] == "xm":
                    yield self._emit(ov, arrs, run_e, run_c, closed=False)
                    run_e, run_c = [el], []

    def _chord_chains(self, ov, arrs):
        chains = {}
        for cid, (layer, t, (pa, sa), (pb, sb)) in ov.chords.items():
            if layer != 1:
                continue
            chain = [("p", pa)]
            k = 0
            while ("ch", cid, k) in arrs[t].segs:
                chain.append(arrs[t].segs[("ch", cid, k)][1])
                k += 1
            if chain[-1] != ("p", pb):
                raise CutError("chord chain did not reach its endpoint")
            chains[cid] = chain
        return chains

    def _strands(self, ov, chains):
        """Components of layer 1 as (closed, elements, per-segment chord).

        Elements are ("pt", pid) edge crossings and ("xm", xnode) locus
        crossings; segcids[j] carries the segment elements[j]->[j+1].
        """
        by_pid: dict[int, list[int]] = {}
        for cid in chains:
            _, t, (pa, sa), (pb, sb) = ov.chords[cid]
            by_pid.setdefault(pa, []).append(cid)
            by_pid.setdefault(pb, []).append(cid)
        unused = set(chains)
        strands = []
        while unused:
            cid0 = min(unused)
            pa0 = ov.chords[cid0][2][0]
            elements = [("pt", pa0)]
            segcids = []
            cur, enter = cid0, pa0
            while True:
                unused.discard(cur)
                chain = chains[cur]
                walk = chain if chain[0] == ("p", enter) \
                    else list(reversed(chain))
                for node in walk[1:-1]:
                    elements.append(("xm", node))
                    segcids.append(cur)
                segcids.append(cur)
                out_pid = walk[-1][1]
                nxts = [c for c in by_pid[out_pid] if c != cur] or [cur]
                nxt = nxts[0]
                if nxt not in unused:
                    break
                elements.append(("pt", out_pid))
                cur, enter = nxt, out_pid
            strands.append((True, elements, segcids))
        return strands

    def _point_side(self, ov, pid, tri, slot):
        e = ov.point_edge[pid]
        g = 0
        for q in ov.edge_order[e]:
            if q == pid:
                break
            if ov.point_layer[q] == 0:
                g += 1
        return self.gap_occ[(e, g, tri, slot)]

    def _element_side(self, ov, arrs, el, other, seg_cid):
        """(piece, cell, side) of an element as seen from the segment of
        chord ``seg_cid`` whose other end is element ``other``."""
        _, t, (pa, sa), (pb, sb) = ov.chords[seg_cid]
        if el[0] == "pt":
            pid = el[1]
            if pid == pa:
                return self._point_side(ov, pid, t, sa)
            if pid == pb:
                return self._point_side(ov, pid, t, sb)
            raise CutError("point element not on its segment chord")
        xnode = el[1]
        cid_a, cid_b = xnode[2], xnode[3]
        cid_m = cid_a if ov.chords[cid_a][0] == 0 else cid_b
        _, tm, (ma, _msa), (mb, _msb) = ov.chords[cid_m]
        coords = arrs[t].coords
        A, B = coords[("p", ma)], coords[("p", mb)]
        other_key = ("p", other[1]) if other[0] == "pt" else other[1]
        P = coords[other_key]
        ux, uy = B[0] * A[2] - A[0] * B[2], B[1] * A[2] - A[1] * B[2]
        vx, vy = P[0] * A[2] - A[0] * P[2], P[1] * A[2] - A[1] * P[2]
        cr = (ux * vy - uy * vx) * B[2] * P[2]
        if cr == 0:
            raise CutError("degenerate crossing side")
        return self.chord_occ[(cid_m, cr > 0)]

    def _emit(self, ov, arrs, elements, segcids, closed):
        """(piece index, kind, weights) of one sub-strand."""
        m = len(elements)
        segs = m if closed else m - 1
        entry_exit = []
        piece_idx = None
        for j in range(segs):
            a, b = elements[j], elements[(j + 1) % m]
            cid = segcids[j]
            loc_a = self._element_side(ov, arrs, a, b, cid)
            loc_b = self._element_side(ov, arrs, b, a, cid)
            if loc_a[:2] != loc_b[:2]:
                raise CutError("segment endpoints disagree on their cell")
            if piece_idx is None:
                piece_idx = loc_a[0]
            elif piece_idx != loc_a[0]:
                raise CutError("strand changed piece without a crossing")
            entry_exit.append((loc_a, loc_b))
        ps = self.pieces[piece_idx]

        def spokes(pi, a, b):
            k = ps.piece.sizes[pi]
            out = []
            mm = (a + 1) % k
            while mm != (b + 1) % k:
                t_prev = ps.tri_id[(pi, (mm - 1) % k)]
                t_here = ps.tri_id[(pi, mm)]
                out.append(("x", (t_prev, 2), (t_here, 0)))
                mm = (mm + 1) % k
            return out

        events = []
        if not closed:
            (p0, pi0, i0) = entry_exit[0][0]
            events.append(("b", (ps.tri_id[(pi0, i0)], 1)))
        for j in range(segs):
            (pa_, pia, ia), (pb_, pib, ib) = entry_exit[j]
            if ia != ib:
                events.extend(spokes(pia, ia, ib))
            if closed or j < segs - 1:
                here = (ps.tri_id[(pib, ib)], 1)
                (pn, pin, i_n) = entry_exit[(j + 1) % segs][0]
                there = (ps.tri_id[(pin, i_n)], 1)
                if ps.frame.gluing.get(here) != there:
                    raise CutError("gap crossing not glued inside the piece")
                events.append(("x", here, there))
        if not closed:
            (pl, pil, il) = entry_exit[-1][1]
            events.append(("b", (ps.tri_id[(pil, il)], 1)))
        events = _cancel_returns(events, closed)
        if closed and not events:
            raise CutError("transfer produced a null component")
        kind = CLOSED if closed else ARC
        return piece_idx, kind, tuple(_event_weights(ps.frame, events))


def cut_along(frame: Triangulation, locus: NormalCurve) -> CutSurface:
    return CutSurface(frame, locus)
