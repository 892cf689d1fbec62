"""Embedded plane graphs: loading, validation, faces, duals, marked boundaries.

The embedding source of truth is the set of exact rational straight-line
coordinates.  Rotation systems are recomputed from angles with exact cross
products whenever a graph is loaded; graphs produced by internal surgery
(dual refinements, symmetrizations, duals) carry combinatorially derived or
schematic coordinates and skip the geometric checks, since only their
abstract structure feeds the counting and bijection engines.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction

from . import _geom
from ._geom import Point, ccw_direction_key, frac_str, parse_frac
from .errors import (
    BadDegree,
    Disconnected,
    DualNotSimple,
    EmbeddingError,
    NotAPath,
    NotOnInfiniteFace,
    NotSimple,
    NotSymmetric,
    ParseError,
    WeightMismatch,
)

# ---------------------------------------------------------------------------
# Vertex tags
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VertexTag:
    """Provenance marker: plain vertex, edge midpoint, face center, or the
    auxiliary vertex standing in for the infinite face."""

    kind: str  # "original" | "edge-mid" | "face-center" | "infinite-aux"
    source: int | None = None

    def __str__(self):
        return self.kind if self.source is None else f"{self.kind}({self.source})"


ORIGINAL = VertexTag("original")
INFINITE_AUX = VertexTag("infinite-aux")


def edge_mid_tag(edge_id: int) -> VertexTag:
    return VertexTag("edge-mid", edge_id)


def face_center_tag(face_index: int) -> VertexTag:
    return VertexTag("face-center", face_index)


# ---------------------------------------------------------------------------
# Core data types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Vertex:
    id: int
    pos: Point
    tag: VertexTag = ORIGINAL


@dataclass(frozen=True)
class Edge:
    id: int
    u: int
    v: int
    weight: Fraction = Fraction(1)

    def other(self, w: int) -> int:
        if w == self.u:
            return self.v
        if w == self.v:
            return self.u
        raise KeyError(f"vertex {w} not an endpoint of edge {self.id}")

    @property
    def ends(self) -> frozenset[int]:
        return frozenset((self.u, self.v))


@dataclass(frozen=True)
class Face:
    index: int
    cycle: tuple[tuple[int, int], ...]  # (tail vertex, edge) darts in traversal order
    infinite: bool
    area2: Fraction

    @property
    def vertex_seq(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.cycle)

    @property
    def edge_set(self) -> frozenset[int]:
        return frozenset(e for _, e in self.cycle)


@dataclass(frozen=True)
class FaceDecomposition:
    faces: tuple[Face, ...]
    infinite_index: int
    dart_face: dict[tuple[int, int], int]  # (edge, tail) -> face index

    @property
    def infinite_face(self) -> Face:
        return self.faces[self.infinite_index]

    @property
    def bounded(self) -> tuple[Face, ...]:
        return tuple(f for f in self.faces if not f.infinite)

    def sides_of_edge(self, edge: "Edge") -> tuple[int, int]:
        """Face indices on the two sides of an edge (equal for a bridge)."""
        return (self.dart_face[(edge.id, edge.u)], self.dart_face[(edge.id, edge.v)])


class PlanarGraph:
    """Straight-line embedded simple graph with a rotation system.

    Instances are immutable by convention: all mutating surgery lives in
    functions that build new graphs.
    """

    def __init__(self, vertices: dict[int, Vertex], edges: dict[int, Edge], *,
                 geometric: bool, rotation: dict[int, tuple[int, ...]] | None = None,
                 name: str = ""):
        self.vertices = {i: vertices[i] for i in sorted(vertices)}
        self.edges = {i: edges[i] for i in sorted(edges)}
        self.geometric = geometric
        self.name = name
        adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for e in self.edges.values():
            if e.u not in adj or e.v not in adj:
                raise ParseError(f"edge {e.id} references an unknown vertex")
            adj[e.u].append(e.id)
            adj[e.v].append(e.id)
        self.adj = {v: tuple(sorted(ids)) for v, ids in adj.items()}
        self.rotation = rotation if rotation is not None else self._rotation_from_angles()
        self._faces: FaceDecomposition | None = None
        self._id: str | None = None

    # -- construction --------------------------------------------------------

    @classmethod
    def build(cls, vertices: dict[int, Vertex], edges: dict[int, Edge],
              name: str = "", require_connected: bool = True) -> "PlanarGraph":
        """Fully validated constructor for geometric graphs."""
        g = cls(vertices, edges, geometric=True, name=name)
        g._validate(require_connected)
        return g

    @classmethod
    def trusted(cls, vertices: dict[int, Vertex], edges: dict[int, Edge], *,
                rotation: dict[int, tuple[int, ...]] | None = None,
                geometric: bool = False, name: str = "") -> "PlanarGraph":
        """Constructor for graphs derived by surgery from validated inputs.

        Structural invariants (simplicity) are still enforced; the geometric
        checks are not, because synthesized coordinates are cosmetic.
        """
        g = cls(vertices, edges, geometric=geometric, rotation=rotation, name=name)
        g._check_simple()
        return g

    def _rotation_from_angles(self) -> dict[int, tuple[int, ...]]:
        rot = {}
        for v, incident in self.adj.items():
            p = self.vertices[v].pos
            dirs = []
            for eid in incident:
                q = self.vertices[self.edges[eid].other(v)].pos
                dirs.append(((q[0] - p[0], q[1] - p[1]), eid))
            dirs.sort(key=lambda t: (ccw_direction_key(t[0]), t[1]))
            rot[v] = tuple(eid for _, eid in dirs)
        return rot

    # -- validation -----------------------------------------------------------

    def _check_simple(self):
        seen_ends = {}
        for e in self.edges.values():
            if e.u == e.v:
                raise NotSimple(f"edge {e.id} is a loop")
            if e.u not in self.vertices or e.v not in self.vertices:
                raise ParseError(f"edge {e.id} references unknown vertex")
            if e.weight < 0:
                raise ParseError(f"edge {e.id} has negative weight")
            key = e.ends
            if key in seen_ends:
                raise NotSimple(f"edges {seen_ends[key]} and {e.id} are parallel")
            seen_ends[key] = e.id

    def _validate(self, require_connected: bool = True):
        self._check_simple()
        positions = {}
        for v in self.vertices.values():
            if v.pos in positions:
                raise EmbeddingError(
                    f"vertices {positions[v.pos]} and {v.id} share position")
            positions[v.pos] = v.id
        # no vertex in the interior of an edge
        for e in self.edges.values():
            a = self.vertices[e.u].pos
            b = self.vertices[e.v].pos
            for v in self.vertices.values():
                if v.id in (e.u, e.v):
                    continue
                if _geom.point_on_segment(v.pos, a, b):
                    raise EmbeddingError(f"vertex {v.id} lies on edge {e.id}")
        # pairwise segment conflicts
        eids = list(self.edges)
        for i, ei in enumerate(eids):
            e1 = self.edges[ei]
            a, b = self.vertices[e1.u].pos, self.vertices[e1.v].pos
            for ej in eids[i + 1:]:
                e2 = self.edges[ej]
                c, d = self.vertices[e2.u].pos, self.vertices[e2.v].pos
                if _geom.segments_conflict(a, b, c, d):
                    raise EmbeddingError(f"edges {ei} and {ej} cross")
        comp = self.component_map()
        if require_connected and len(set(comp.values())) > 1:
            raise Disconnected("graph is not connected")
        # Euler check through face tracing, per connected component
        faces = self.trace_faces()
        counts: dict[int, list[int]] = {}
        for v, c in comp.items():
            counts.setdefault(c, [0, 0, 0])[0] += 1
        for e in self.edges.values():
            counts[comp[e.u]][1] += 1
        for f in faces.faces:
            if f.cycle:
                counts[comp[f.cycle[0][0]]][2] += 1
        for c, (v_count, e_count, f_count) in counts.items():
            if e_count and v_count - e_count + f_count != 2:
                raise EmbeddingError(
                    f"Euler check failed: V={v_count} E={e_count} F={f_count}")

    # -- basic queries --------------------------------------------------------

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def neighbors(self, v: int):
        return tuple(self.edges[e].other(v) for e in self.adj[v])

    def edge_between(self, u: int, v: int) -> Edge | None:
        for eid in self.adj.get(u, ()):
            if self.edges[eid].other(u) == v:
                return self.edges[eid]
        return None

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        return len(set(self.component_map().values())) == 1

    def component_map(self) -> dict[int, int]:
        comp: dict[int, int] = {}
        label = 0
        for start in self.vertices:
            if start in comp:
                continue
            comp[start] = label
            stack = [start]
            while stack:
                v = stack.pop()
                for eid in self.adj[v]:
                    w = self.edges[eid].other(v)
                    if w not in comp:
                        comp[w] = label
                        stack.append(w)
            label += 1
        return comp

    @property
    def graph_id(self) -> str:
        if self._id is None:
            self._id = hashlib.sha256(dump_graph(self).encode()).hexdigest()[:12]
        return self._id

    def position(self, v: int) -> Point:
        return self.vertices[v].pos

    # -- faces ----------------------------------------------------------------

    def trace_faces(self) -> FaceDecomposition:
        if self._faces is not None:
            return self._faces
        if not self.geometric:
            raise EmbeddingError("face tracing requires a geometric embedding")
        rot_pos = {v: {e: i for i, e in enumerate(rot)} for v, rot in self.rotation.items()}
        darts = [(e.id, e.u) for e in self.edges.values()] + \
                [(e.id, e.v) for e in self.edges.values()]
        darts.sort()
        visited: set[tuple[int, int]] = set()
        faces: list[Face] = []
        dart_face: dict[tuple[int, int], int] = {}
        for start in darts:
            if start in visited:
                continue
            cycle = []
            cur = start
            while cur not in visited:
                visited.add(cur)
                cycle.append((cur[1], cur[0]))
                eid, tail = cur
                head = self.edges[eid].other(tail)
                rot = self.rotation[head]
                # predecessor in the counterclockwise order: traces every face
                # with its interior on the left, so bounded faces come out
                # counterclockwise and the infinite face clockwise
                nxt = rot[(rot_pos[head][eid] - 1) % len(rot)]
                cur = (nxt, head)
            idx = len(faces)
            for tail, eid in cycle:
                dart_face[(eid, tail)] = idx
            poly = [self.vertices[tail].pos for tail, _ in cycle]
            faces.append(Face(idx, tuple(cycle), False, _geom.polygon_area2(poly)))
        if faces:
            # the outer orbit of every connected component is unbounded; for
            # a connected graph this is the single face of smallest signed area
            comp = self.component_map()
            best: dict[int, int] = {}
            for f in faces:
                c = comp[f.cycle[0][0]]
                if c not in best or (faces[best[c]].area2, best[c]) > (f.area2, f.index):
                    best[c] = f.index
            for idx in best.values():
                faces[idx] = Face(idx, faces[idx].cycle, True, faces[idx].area2)
            infinite_index = min(best.values(),
                                 key=lambda i: (faces[i].area2, i))
        else:
            # edgeless graph: one face, the infinite one, with empty cycle
            faces = [Face(0, (), True, Fraction(0))]
            infinite_index = 0
        self._faces = FaceDecomposition(tuple(faces), infinite_index, dart_face)
        return self._faces

    def infinite_face_vertices(self) -> frozenset[int]:
        faces = self.trace_faces()
        if not self.edges:
            return frozenset(self.vertices)
        return frozenset(faces.infinite_face.vertex_seq)

    def infinite_face_edges(self) -> frozenset[int]:
        return self.trace_faces().infinite_face.edge_set


def trace_faces(g: PlanarGraph) -> FaceDecomposition:
    """Face decomposition from the rotation system (cached per graph)."""
    return g.trace_faces()


def remove_vertices(g: PlanarGraph, removed, *, name: str = "") -> PlanarGraph:
    """Induced subgraph on the complement of ``removed`` (edges incident to a
    removed vertex disappear with it).  Deleting vertices cannot break an
    embedding, so the geometric flag is inherited."""
    removed = set(removed)
    vertices = {i: v for i, v in g.vertices.items() if i not in removed}
    edges = {i: e for i, e in g.edges.items()
             if e.u not in removed and e.v not in removed}
    rotation = {v: tuple(e for e in rot if e in edges)
                for v, rot in g.rotation.items() if v not in removed}
    return PlanarGraph.trusted(vertices, edges, rotation=rotation,
                               geometric=g.geometric, name=name or g.name)


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------


def parse_graph(text: str, *, name: str = "",
                require_connected: bool = True) -> PlanarGraph:
    """Parse the line-oriented graph format and fully validate the result.

    Format: ``v <id> <x> <y>`` and ``e <id> <u> <v> [weight]`` with rational
    numbers written as ``p`` or ``p/q``; ``#`` starts a comment.
    ``require_connected=False`` admits multi-component drawings (needed to
    reload dumped derived graphs, which may legitimately be disconnected).
    """
    vertices: dict[int, Vertex] = {}
    edges: dict[int, Edge] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "v":
                if len(parts) != 4:
                    raise ValueError("expected: v <id> <x> <y>")
                vid = int(parts[1])
                if vid < 0:
                    raise ValueError("negative id")
                if vid in vertices:
                    raise ValueError(f"duplicate vertex id {vid}")
                vertices[vid] = Vertex(vid, (parse_frac(parts[2]), parse_frac(parts[3])))
            elif parts[0] == "e":
                if len(parts) not in (4, 5):
                    raise ValueError("expected: e <id> <u> <v> [weight]")
                eid = int(parts[1])
                if eid < 0:
                    raise ValueError("negative id")
                if eid in edges:
                    raise ValueError(f"duplicate edge id {eid}")
                w = parse_frac(parts[4]) if len(parts) == 5 else Fraction(1)
                edges[eid] = Edge(eid, int(parts[2]), int(parts[3]), w)
            else:
                raise ValueError(f"unknown record {parts[0]!r}")
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc
    if not vertices:
        raise ParseError("no vertices")
    return PlanarGraph.build(vertices, edges, name=name,
                             require_connected=require_connected)


load_graph = parse_graph


def dump_graph(g: PlanarGraph) -> str:
    lines = []
    for v in g.vertices.values():
        lines.append(f"v {v.id} {frac_str(v.pos[0])} {frac_str(v.pos[1])}")
    for e in g.edges.values():
        if e.weight == 1:
            lines.append(f"e {e.id} {e.u} {e.v}")
        else:
            lines.append(f"e {e.id} {e.u} {e.v} {frac_str(e.weight)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Planar dual
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DualGraph:
    """Dual of a plane graph on its bounded faces (optionally plus the
    infinite-face vertex).  Every dual edge records the primal edge it
    crosses."""

    graph: PlanarGraph
    vertex_face: dict[int, int]  # dual vertex id -> face index of the source
    primal_edge: dict[int, int]  # dual edge id -> primal edge id
    infinite_vertex: int | None = None


def _face_centroid(g: PlanarGraph, face: Face) -> Point:
    pts = [g.vertices[v].pos for v in sorted(set(face.vertex_seq))]
    n = len(pts)
    return (sum(p[0] for p in pts) / n, sum(p[1] for p in pts) / n)


def planar_dual(g: PlanarGraph, include_infinite: bool = False) -> DualGraph:
    faces = g.trace_faces()
    vertices: dict[int, Vertex] = {}
    vertex_of_face: dict[int, int] = {}
    nxt = 0
    for f in faces.bounded:
        vertices[nxt] = Vertex(nxt, _face_centroid(g, f), face_center_tag(f.index))
        vertex_of_face[f.index] = nxt
        nxt += 1
    z = None
    if include_infinite:
        xs = [v.pos[0] for v in g.vertices.values()]
        ys = [v.pos[1] for v in g.vertices.values()]
        z = nxt
        vertices[z] = Vertex(z, (max(xs) + 1, max(ys) + 1), INFINITE_AUX)
        vertex_of_face[faces.infinite_index] = z
    edges: dict[int, Edge] = {}
    primal: dict[int, int] = {}
    seen_pairs: dict[frozenset[int], int] = {}
    eid = 0
    for e in g.edges.values():
        fa, fb = faces.sides_of_edge(e)
        a_inf = fa == faces.infinite_index
        b_inf = fb == faces.infinite_index
        if fa == fb:
            if a_inf:
                continue  # bridge on the infinite face: no dual edge
            raise DualNotSimple(
                f"edge {e.id} has the bounded face {fa} on both sides")
        if (a_inf or b_inf) and not include_infinite:
            continue
        du, dv = vertex_of_face[fa], vertex_of_face[fb]
        pair = frozenset((du, dv))
        if pair in seen_pairs:
            raise DualNotSimple(
                f"faces {fa} and {fb} share edges {seen_pairs[pair]} and {e.id}")
        seen_pairs[pair] = e.id
        edges[eid] = Edge(eid, du, dv)
        primal[eid] = e.id
        eid += 1
    dual = PlanarGraph.trusted(vertices, edges, name=f"dual({g.name or g.graph_id})")
    return DualGraph(dual, {v: f for f, v in vertex_of_face.items()}, primal, z)


# ---------------------------------------------------------------------------
# Marked boundary paths
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MarkedBoundary:
    """A boundary path v1..v_{2n-1} whose even-indexed vertices have degree
    two, optionally completed with the two added leaves v0 and v_{2n} and the
    boundary edges whose midpoints become the marked edge-vertices."""

    host: str
    inner: tuple[int, ...]
    n: int
    leaves: tuple[int, int] | None = None
    boundary_edges: tuple[int, ...] | None = None  # edges {v_{j-1}, v_j}, j=1..2n

    @property
    def full_path(self) -> tuple[int, ...]:
        if self.leaves is None:
            return self.inner
        return (self.leaves[0],) + self.inner + (self.leaves[1],)


def validate_boundary_path(g: PlanarGraph, path: list[int]) -> MarkedBoundary:
    if not path:
        raise NotAPath("empty path")
    if len(path) % 2 == 0:
        raise NotAPath("path must have an odd number of vertices v1..v_{2n-1}")
    if len(set(path)) != len(path):
        raise NotAPath("repeated vertex in path")
    for v in path:
        if v not in g.vertices:
            raise NotAPath(f"unknown vertex {v}")
    boundary_vertices = g.infinite_face_vertices()
    boundary_edges = g.infinite_face_edges() if g.edges else frozenset()
    for a, b in zip(path, path[1:]):
        e = g.edge_between(a, b)
        if e is None:
            raise NotAPath(f"{a},{b} is not an edge")
        if e.id not in boundary_edges:
            raise NotOnInfiniteFace(f"edge {a}-{b} is not on the infinite face")
    for v in path:
        if v not in boundary_vertices:
            raise NotOnInfiniteFace(f"vertex {v} is not on the infinite face")
    for i, v in enumerate(path, 1):
        if i % 2 == 0 and g.degree(v) != 2:
            raise BadDegree(f"v{i}={v} has degree {g.degree(v)}, expected 2")
    return MarkedBoundary(g.graph_id, tuple(path), (len(path) + 1) // 2)


# ---------------------------------------------------------------------------
# Reflection symmetry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymmetryCertificate:
    axis_y: Fraction
    vertex_map: dict[int, int]
    edge_map: dict[int, int]
    axis_vertices: tuple[int, ...]  # ordered left to right

    def reflect_vertex(self, v: int) -> int:
        return self.vertex_map[v]

    def reflect_edge(self, e: int) -> int:
        return self.edge_map[e]


def check_reflection_symmetry(g: PlanarGraph, axis_y: Fraction) -> SymmetryCertificate:
    """Certify invariance under reflection across the horizontal line y=axis_y."""
    axis_y = Fraction(axis_y)
    by_pos = {v.pos: v.id for v in g.vertices.values()}
    vmap = {}
    for v in g.vertices.values():
        mirror = (v.pos[0], 2 * axis_y - v.pos[1])
        if mirror not in by_pos:
            raise NotSymmetric(f"vertex {v.id} has no mirror image")
        vmap[v.id] = by_pos[mirror]
    emap = {}
    for e in g.edges.values():
        m = g.edge_between(vmap[e.u], vmap[e.v])
        if m is None:
            raise NotSymmetric(f"edge {e.id} has no mirror image")
        if m.weight != e.weight:
            raise WeightMismatch(
                f"edge {e.id} weight {e.weight} != mirror {m.id} weight {m.weight}")
        emap[e.id] = m.id
    axis = sorted((v.id for v in g.vertices.values() if v.pos[1] == axis_y),
                  key=lambda i: g.vertices[i].pos[0])
    return SymmetryCertificate(axis_y, vmap, emap, tuple(axis))
