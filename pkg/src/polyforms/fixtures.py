"""Small reference complexes used by the test suites and the CLI."""

from __future__ import annotations

from itertools import combinations

from .polyhedra import PolyhedralComplex, Polyhedron


def _simplicial(ambient_dim: int, points: dict[str, tuple], simplices: list[str]) -> PolyhedralComplex:
    """Complex generated by the named simplices (strings of vertex names) and all their faces."""
    names: dict[str, None] = {}
    for s in simplices:
        for k in range(1, len(s) + 1):
            for sub in combinations(s, k):
                names["".join(sub)] = None
    ordered = sorted(names, key=lambda n: (len(n), list(names).index(n)))
    cells = [Polyhedron(n, [points[v] for v in n]) for n in ordered]
    pairs = []
    for n in ordered:
        if len(n) > 1:
            for k in range(len(n)):
                pairs.append((n[:k] + n[k + 1:], n))
    return PolyhedralComplex(ambient_dim, cells, pairs)


def unit_interval() -> PolyhedralComplex:
    return _simplicial(1, {"A": (0,), "B": (1,)}, ["AB"])


def segment() -> PolyhedralComplex:
    """The segment from (0, 0) to (1, 0) with its endpoints."""
    return _simplicial(2, {"A": (0, 0), "B": (1, 0)}, ["AB"])


_TRIANGLE = {"A": (0, 0), "B": (1, 0), "C": (0, 1)}


def solid_triangle() -> PolyhedralComplex:
    return _simplicial(2, _TRIANGLE, ["ABC"])


def triangle_boundary() -> PolyhedralComplex:
    return _simplicial(2, _TRIANGLE, ["AB", "BC", "AC"])


def tetrahedron_boundary() -> PolyhedralComplex:
    pts = {"A": (0, 0, 0), "B": (1, 0, 0), "C": (0, 1, 0), "D": (0, 0, 1)}
    return _simplicial(3, pts, ["ABC", "ABD", "ACD", "BCD"])


def tropical_line() -> PolyhedralComplex:
    """The origin with rays along e1, e2 and -(e1 + e2)."""
    o = Polyhedron("O", [(0, 0)])
    rays = [
        Polyhedron("R1", [(0, 0)], [(1, 0)]),
        Polyhedron("R2", [(0, 0)], [(0, 1)]),
        Polyhedron("R3", [(0, 0)], [(-1, -1)]),
    ]
    return PolyhedralComplex(2, [o] + rays, [("O", c.id) for c in rays])


FIXTURES = {
    "segment": segment,
    "solid_triangle": solid_triangle,
    "triangle_boundary": triangle_boundary,
    "tropical_line": tropical_line,
    "tetrahedron_boundary": tetrahedron_boundary,
}
