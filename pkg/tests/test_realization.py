import itertools
from fractions import Fraction
from math import gcd

import pytest

from curvetop.curves import NormalCurve
from curvetop.realization import (Overlay, Reducer, algebraic_intersection,
                                  geometric_intersection, layer_curve)

from conftest import slope_weights


def primitive_slopes(n):
    out = []
    for p in range(-n, n + 1):
        for q in range(-n, n + 1):
            if gcd(p, q) == 1 and (q > 0 or (q == 0 and p > 0)):
                out.append((p, q))
    return out


def lattice_crossing_oracle(p, q, r, s):
    """Count crossings of the straight-line lifts of two torus slopes in
    one fundamental domain, with generic rational offsets.

    Solves t*(p,q) = (x0,y0) + u*(r,s) + (m,n) over integer shifts with
    t, u in [0,1); exact rational arithmetic throughout.
    """
    det = p * s - q * r
    if det == 0:
        return 0
    x0, y0 = Fraction(1, 7), Fraction(1, 11)
    count = 0
    bound = abs(p) + abs(q) + abs(r) + abs(s) + 2
    for m in range(-bound, bound + 1):
        for n in range(-bound, bound + 1):
            ax, ay = x0 + m, y0 + n
            t = Fraction(ax * s - ay * r, det)
            u = Fraction(p * ay - q * ax, det)
            if 0 <= t < 1 and 0 <= u < 1:
                count += 1
    return count


class TestTorusOracle:
    def test_meridian_longitude(self, torus):
        a = NormalCurve(torus, slope_weights(1, 0))
        b = NormalCurve(torus, slope_weights(0, 1))
        assert geometric_intersection(a, b) == 1

    def test_self_zero(self, torus):
        for pq in [(1, 0), (2, 1), (3, 2), (5, 2)]:
            c = NormalCurve(torus, slope_weights(*pq))
            assert geometric_intersection(c, c) == 0

    def test_two_one_vs_one_two(self, torus):
        a = NormalCurve(torus, slope_weights(2, 1))
        b = NormalCurve(torus, slope_weights(1, 2))
        assert geometric_intersection(a, b) == 3

    @pytest.mark.parametrize("n", [3])
    def test_against_determinant(self, torus, n):
        for (p, q) in primitive_slopes(n):
            for (r, s) in primitive_slopes(n):
                a = NormalCurve(torus, slope_weights(p, q))
                b = NormalCurve(torus, slope_weights(r, s))
                assert geometric_intersection(a, b) == abs(p * s - q * r)

    def test_lattice_oracle_agrees_with_determinant(self):
        for (p, q) in primitive_slopes(3):
            for (r, s) in primitive_slopes(3):
                assert lattice_crossing_oracle(p, q, r, s) == \
                    abs(p * s - q * r)


class TestGenus2:
    def test_symmetric(self, g2_small_curves):
        cs = g2_small_curves[:10]
        for a, b in itertools.combinations(cs, 2):
            assert geometric_intersection(a, b) == \
                geometric_intersection(b, a)

    def test_self_zero(self, g2_small_curves):
        for c in g2_small_curves[:10]:
            assert geometric_intersection(c, c) == 0

    def test_isotopy_invariance_via_sweeps(self, g2, g2_small_curves):
        from curvetop.curves import _moves
        a, b = g2_small_curves[0], g2_small_curves[3]
        base = geometric_intersection(a, b)
        for w2 in _moves(NormalCurve(g2, b.weights)):
            b2 = NormalCurve(g2, w2)
            assert geometric_intersection(a, b2) == base

    def test_layer_extraction_roundtrip(self, g2, g2_small_curves):
        a, b = g2_small_curves[1], g2_small_curves[4]
        ov = Overlay(g2, [a, b])
        Reducer(ov, 1, {0}).run()
        assert layer_curve(ov, 0) == a
        assert layer_curve(ov, 1) == b


class TestAlgebraic:
    def test_matches_determinant_on_torus(self, torus):
        for (p, q) in primitive_slopes(2):
            for (r, s) in primitive_slopes(2):
                a = NormalCurve(torus, slope_weights(p, q))
                b = NormalCurve(torus, slope_weights(r, s))
                assert abs(algebraic_intersection(a, b)) == abs(p * s - q * r)

    def test_antisymmetric_parity(self, g2_small_curves):
        for a, b in itertools.combinations(g2_small_curves[:8], 2):
            x = algebraic_intersection(a, b)
            y = algebraic_intersection(b, a)
            assert x == -y
            assert abs(x) <= geometric_intersection(a, b)
            assert (x - geometric_intersection(a, b)) % 2 == 0
