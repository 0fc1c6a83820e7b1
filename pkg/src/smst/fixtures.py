"""Small canonical instances used by the tests, the docs and the CLI."""

from fractions import Fraction

from .instance import CORE, Edge, SunflowerInstance


def _e(eid, u, v, w, part=CORE):
    return Edge(eid, u, v, Fraction(w), part)


def fix1() -> SunflowerInstance:
    """Triangles ``xzy`` (G1) and ``xwy`` (G2) sharing the heavy core edge ``xy``.

    The unique solution is ``{xz, zy, xw, wy}``.
    """
    vertices = {"x": CORE, "y": CORE, "z": 1, "w": 2}
    edges = [
        _e("xy", "x", "y", 2),
        _e("xz", "x", "z", 1, 1),
        _e("zy", "z", "y", 1, 1),
        _e("xw", "x", "w", 1, 2),
        _e("wy", "w", "y", 1, 2),
    ]
    return SunflowerInstance.build(2, vertices, edges)


def fix1_minus_xz() -> SunflowerInstance:
    """FIX1 without ``xz``; infeasible."""
    return fix1().without_edges(["xz"]).checked()


def fix2() -> SunflowerInstance:
    """Paired stars: a greedy core-first choice goes wrong here.

    Core vertices ``a1 a2 b1 b2``.  G1 hangs weight-0 leaves ``c1 c2 d1 d2`` off
    them and has the exclusive weight-1 edge ``c1c2``.  G2 joins ``a_i`` to
    ``b_i`` by weight-0 paths through ``p_i`` (a direct ``a_i b_i`` edge would
    be a core edge).  Core weight-1 edges ``a1a2`` and ``b1b2``.  The unique
    solution takes weight-1 edges ``b1b2`` and ``c1c2``.
    """
    vertices = {
        "a1": CORE, "a2": CORE, "b1": CORE, "b2": CORE,
        "c1": 1, "c2": 1, "d1": 1, "d2": 1,
        "p1": 2, "p2": 2,
    }
    edges = [
        _e("a1c1", "a1", "c1", 0, 1),
        _e("a2c2", "a2", "c2", 0, 1),
        _e("b1d1", "b1", "d1", 0, 1),
        _e("b2d2", "b2", "d2", 0, 1),
        _e("c1c2", "c1", "c2", 1, 1),
        _e("a1p1", "a1", "p1", 0, 2),
        _e("p1b1", "p1", "b1", 0, 2),
        _e("a2p2", "a2", "p2", 0, 2),
        _e("p2b2", "p2", "b2", 0, 2),
        _e("a1a2", "a1", "a2", 1),
        _e("b1b2", "b1", "b2", 1),
    ]
    return SunflowerInstance.build(2, vertices, edges)


def fix3() -> SunflowerInstance:
    """G1 is the single edge ``xy``, G2 the unit triangle ``xyz``.

    The x-z edge is named ``zx`` so that id order reads ``xy, yz, zx``.
    Solutions: ``{xy, yz}`` and ``{xy, zx}``.
    """
    vertices = {"x": CORE, "y": CORE, "z": 2}
    edges = [
        _e("xy", "x", "y", 1),
        _e("yz", "y", "z", 1, 2),
        _e("zx", "z", "x", 1, 2),
    ]
    return SunflowerInstance.build(2, vertices, edges)


FIXTURES = {"fix1": fix1, "fix1-minus-xz": fix1_minus_xz, "fix2": fix2, "fix3": fix3}
