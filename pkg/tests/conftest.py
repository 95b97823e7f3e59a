import itertools

import pytest

from curvetop.curves import NormalCurve, is_admissible
from curvetop.frames import build_reference_frame, torus_frame


def slope_weights(p, q):
    return (abs(q), abs(p), abs(p - q))


@pytest.fixture(scope="session")
def torus():
    return torus_frame()


@pytest.fixture(scope="session")
def g2():
    return build_reference_frame(2, 0)


def enumerate_connected(frame, max_total, cap=None):
    """Connected essential-candidate normal curves up to a weight bound,
    canonical and deduplicated (brute force; test helper)."""
    seen = set()
    for w in itertools.product(range(max_total + 1),
                               repeat=frame.num_edges):
        if not 0 < sum(w) <= max_total or not is_admissible(frame, w):
            continue
        c = NormalCurve(frame, w)
        if not c.is_connected or c.vertex_linking_components():
            continue
        seen.add(c.canonical())
        if cap and len(seen) >= cap:
            break
    return sorted(seen, key=lambda c: c.key())


@pytest.fixture(scope="session")
def g2_small_curves(g2):
    return enumerate_connected(g2, 6)
