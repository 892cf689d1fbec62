"""Interior counting for simple cycles of an embedded graph.

For any simple cycle, the numbers v, e, f of vertices, edges and bounded
faces strictly inside satisfy v - e + f = 1, so v + e + f (the number of
refinement vertices inside) is always odd.  This parity is the backbone of
every gliding argument, so it gets its own exhaustively testable operation.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _geom
from .errors import NotAPath
from .planar import PlanarGraph


class NotACycle(NotAPath):
    pass


@dataclass(frozen=True)
class InteriorCount:
    vertices: int
    edges: int
    faces: int

    @property
    def total(self) -> int:
        return self.vertices + self.edges + self.faces

    @property
    def parity(self) -> str:
        return "odd" if self.total % 2 == 1 else "even"


def interior_vertex_count(g: PlanarGraph, cycle: list[int]) -> InteriorCount:
    """Count original vertices, edges and bounded faces strictly inside a
    simple cycle (edge endpoints may lie on the cycle).

    Vertices and edge midpoints are tested with exact winding numbers;
    faces are read off the face decomposition (the faces left of the
    counterclockwise cycle plus both sides of every interior edge).
    """
    if len(cycle) < 3:
        raise NotACycle("a cycle needs at least 3 vertices")
    if len(set(cycle)) != len(cycle):
        raise NotACycle("repeated vertex")
    cycle_edges = []
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        e = g.edge_between(a, b)
        if e is None:
            raise NotACycle(f"{a},{b} is not an edge")
        cycle_edges.append(e.id)
    polygon = [g.vertices[v].pos for v in cycle]
    if _geom.polygon_area2(polygon) < 0:
        cycle = list(reversed(cycle))
        cycle_edges = [g.edge_between(a, b).id
                       for a, b in zip(cycle, cycle[1:] + cycle[:1])]
        polygon = list(reversed(polygon))

    on_cycle = set(cycle)
    v_in = 0
    for v in g.vertices:
        if v in on_cycle:
            continue
        if _geom.point_in_polygon(g.vertices[v].pos, polygon) == 1:
            v_in += 1
    e_in = []
    cyc_set = set(cycle_edges)
    for e in g.edges.values():
        if e.id in cyc_set:
            continue
        a = g.vertices[e.u].pos
        b = g.vertices[e.v].pos
        mid = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
        if _geom.point_in_polygon(mid, polygon) == 1:
            e_in.append(e.id)

    faces = g.trace_faces()
    inside_faces: set[int] = set()
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        eid = g.edge_between(a, b).id
        inside_faces.add(faces.dart_face[(eid, a)])  # face left of the ccw cycle
    for eid in e_in:
        inside_faces.update(faces.sides_of_edge(g.edges[eid]))
    inside_faces.discard(faces.infinite_index)

    count = InteriorCount(v_in, len(e_in), len(inside_faces))
    # the exact Euler identity behind the parity claim
    assert count.vertices - count.edges + count.faces == 1, \
        f"interior Euler identity failed for cycle {cycle}"
    return count


def simple_cycles(g: PlanarGraph, max_cycles: int | None = None):
    """All simple cycles, each as a vertex list starting at its smallest
    vertex with the smaller neighbor second (so each cycle appears once)."""
    out = []
    verts = sorted(g.vertices)
    for s in verts:
        stack = [(s, [s], {s})]
        while stack:
            v, path, seen = stack.pop()
            for eid in g.adj[v]:
                w = g.edges[eid].other(v)
                if w == s and len(path) >= 3:
                    if path[1] < path[-1]:
                        out.append(list(path))
                        if max_cycles is not None and len(out) >= max_cycles:
                            return out
                elif w > s and w not in seen:
                    stack.append((w, path + [w], seen | {w}))
    return out
