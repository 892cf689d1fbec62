"""Graph surgery: dual refinements, leaf augmentation, the plus/minus pair,
symmetrization, smashing, and the trimmed-square generator.

The dual refinement of a plane graph superimposes the graph, its planar
dual, and the midpoints of its edges.  Everything downstream (gliding,
matchings-to-trees correspondences) runs on vertex-deleted subgraphs of it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BelowDiagonal,
    EmbeddingError,
    NotAPeak,
    NotDegreeTwo,
    NotOnInfiniteFace,
    PreconditionViolated,
    ReembeddingFailed,
    SharedFace,
)
from .planar import (
    Edge,
    MarkedBoundary,
    PlanarGraph,
    Vertex,
    edge_mid_tag,
    face_center_tag,
    remove_vertices,
    validate_boundary_path,
)

# ---------------------------------------------------------------------------
# Dual refinement
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DualRefinement:
    """The refinement graph together with the maps back to its source."""

    source: PlanarGraph
    graph: PlanarGraph
    mid_of_edge: dict[int, int]      # source edge id -> refinement vertex id
    center_of_face: dict[int, int]   # source face index -> refinement vertex id

    @property
    def originals(self) -> tuple[int, ...]:
        return tuple(self.source.vertices)

    def primal_edge_of(self, mid_vertex: int) -> int:
        tag = self.graph.vertices[mid_vertex].tag
        if tag.kind != "edge-mid":
            raise KeyError(f"vertex {mid_vertex} is not an edge midpoint")
        return tag.source

    def face_of(self, center_vertex: int) -> int:
        tag = self.graph.vertices[center_vertex].tag
        if tag.kind != "face-center":
            raise KeyError(f"vertex {center_vertex} is not a face center")
        return tag.source

    def sides_of_primal_edge(self, edge_id: int) -> tuple[int, int]:
        return self.source.trace_faces().sides_of_edge(self.source.edges[edge_id])

    def is_boundary_edge(self, edge_id: int) -> bool:
        inf = self.source.trace_faces().infinite_index
        return inf in self.sides_of_primal_edge(edge_id)

    def boundary_originals(self) -> frozenset[int]:
        return self.source.infinite_face_vertices()


def dual_refinement(g: PlanarGraph,
                    dual_weights: dict[int, Fraction] | None = None) -> DualRefinement:
    """Superimpose g, its planar dual, and the midpoints of its edges.

    Each midpoint vertex joins the two endpoints of its edge (inheriting the
    edge weight) and the centers of the bounded faces containing the edge
    (weight 1, or the supplied per-primal-edge dual weight).
    """
    faces = g.trace_faces()
    inf = faces.infinite_index
    boundary = g.infinite_face_vertices()
    for v in g.vertices:
        if g.degree(v) == 1 and v not in boundary:
            raise PreconditionViolated(
                f"degree-one vertex {v} lies inside a bounded face")
    dual_weights = dual_weights or {}

    vertices: dict[int, Vertex] = dict(g.vertices)
    next_id = max(g.vertices) + 1
    mid_of_edge: dict[int, int] = {}
    for eid in sorted(g.edges):
        e = g.edges[eid]
        pu, pv = g.vertices[e.u].pos, g.vertices[e.v].pos
        vertices[next_id] = Vertex(next_id,
                                   ((pu[0] + pv[0]) / 2, (pu[1] + pv[1]) / 2),
                                   edge_mid_tag(eid))
        mid_of_edge[eid] = next_id
        next_id += 1
    center_of_face: dict[int, int] = {}
    for f in faces.bounded:
        pts = [g.vertices[v].pos for v in sorted(set(f.vertex_seq))]
        pos = (sum(p[0] for p in pts) / len(pts), sum(p[1] for p in pts) / len(pts))
        vertices[next_id] = Vertex(next_id, pos, face_center_tag(f.index))
        center_of_face[f.index] = next_id
        next_id += 1

    edges: dict[int, Edge] = {}
    eid_out = 0
    for eid in sorted(g.edges):
        e = g.edges[eid]
        m = mid_of_edge[eid]
        edges[eid_out] = Edge(eid_out, e.u, m, e.weight)
        eid_out += 1
        edges[eid_out] = Edge(eid_out, m, e.v, e.weight)
        eid_out += 1
    for eid in sorted(g.edges):
        fa, fb = faces.sides_of_edge(g.edges[eid])
        if fa == fb and fa != inf:
            raise PreconditionViolated(
                f"edge {eid} is a bridge inside bounded face {fa}")
        m = mid_of_edge[eid]
        # halves of a dual edge inherit its weight; the stubs joining boundary
        # midpoints to face centers belong to no dual edge and stay at 1
        interior = inf not in (fa, fb)
        w = dual_weights.get(eid, Fraction(1)) if interior else Fraction(1)
        for fi in (fa, fb):
            if fi != inf:
                edges[eid_out] = Edge(eid_out, m, center_of_face[fi], w)
                eid_out += 1

    # combinatorial rotation: correct for any planar drawing that keeps face
    # centers inside their faces, regardless of synthesized coordinates
    rotation: dict[int, tuple[int, ...]] = {}
    h_adj: dict[int, dict[int, int]] = {v: {} for v in vertices}
    for he in edges.values():
        h_adj[he.u][he.v] = he.id
        h_adj[he.v][he.u] = he.id
    for v in g.vertices:
        rotation[v] = tuple(h_adj[v][mid_of_edge[eid]] for eid in g.rotation[v])
    for eid in sorted(g.edges):
        e = g.edges[eid]
        m = mid_of_edge[eid]
        fa = faces.dart_face[(eid, e.u)]  # face left of u -> v
        fb = faces.dart_face[(eid, e.v)]
        order = [h_adj[m][e.v]]
        if fa != inf:
            order.append(h_adj[m][center_of_face[fa]])
        order.append(h_adj[m][e.u])
        if fb != inf and fb != fa:
            order.append(h_adj[m][center_of_face[fb]])
        rotation[m] = tuple(order)
    for f in faces.bounded:
        c = center_of_face[f.index]
        rotation[c] = tuple(h_adj[c][mid_of_edge[eid]] for _, eid in f.cycle)

    graph = PlanarGraph.trusted(vertices, edges, rotation=rotation,
                                name=f"refine({g.name or g.graph_id})")
    assert len(graph.vertices) % 2 == 1, "refinement must have oddly many vertices"
    return DualRefinement(g, graph, mid_of_edge, center_of_face)


# ---------------------------------------------------------------------------
# Leaf augmentation
# ---------------------------------------------------------------------------

_LEAF_DIRS = [(1, 0), (-1, 0), (1, 1), (-1, 1), (0, 1), (-1, -1), (0, -1), (1, -1)]
_LEAF_RADII = [Fraction(1, 4), Fraction(1, 16), Fraction(1, 64), Fraction(1, 256), Fraction(1)]


def _leaf_candidates(g: PlanarGraph, anchor: int, taken: set):
    apos = g.vertices[anchor].pos
    from . import _geom
    for r in _LEAF_RADII:
        for dx, dy in _LEAF_DIRS:
            p = (apos[0] + r * dx, apos[1] + r * dy)
            if p in taken or any(v.pos == p for v in g.vertices.values()):
                continue
            ok = True
            for e in g.edges.values():
                a, b = g.vertices[e.u].pos, g.vertices[e.v].pos
                if _geom.segments_conflict(apos, p, a, b):
                    ok = False
                    break
                if _geom.point_on_segment(p, a, b):
                    ok = False
                    break
            if ok:
                yield p


def augment_with_leaves(g0: PlanarGraph, path: list[int]) -> tuple[PlanarGraph, MarkedBoundary]:
    """Attach leaf vertices before and after the marked boundary path, drawn
    in the infinite face."""
    mb = validate_boundary_path(g0, path)
    v1, v_last = mb.inner[0], mb.inner[-1]
    leaf0 = max(g0.vertices) + 1
    leaf1 = leaf0 + 1
    e0 = max(g0.edges, default=-1) + 1
    e1 = e0 + 1
    from . import _geom
    for p0 in _leaf_candidates(g0, v1, set()):
        for p1 in _leaf_candidates(g0, v_last, {p0}):
            if v1 == v_last and p0 == p1:
                continue
            if _geom.segments_conflict(g0.vertices[v1].pos, p0,
                                       g0.vertices[v_last].pos, p1):
                continue
            vertices = dict(g0.vertices)
            vertices[leaf0] = Vertex(leaf0, p0)
            vertices[leaf1] = Vertex(leaf1, p1)
            edges = dict(g0.edges)
            edges[e0] = Edge(e0, leaf0, v1)
            edges[e1] = Edge(e1, v_last, leaf1)
            try:
                g = PlanarGraph.build(vertices, edges,
                                      name=f"{g0.name or g0.graph_id}+leaves")
            except EmbeddingError:
                continue
            onb = g.infinite_face_vertices()
            if leaf0 not in onb or leaf1 not in onb:
                continue
            full = (leaf0,) + mb.inner + (leaf1,)
            bedges = tuple(g.edge_between(a, b).id for a, b in zip(full, full[1:]))
            return g, MarkedBoundary(g.graph_id, mb.inner, mb.n,
                                     leaves=(leaf0, leaf1), boundary_edges=bedges)
    raise EmbeddingError("could not place the boundary leaves in the infinite face")


# ---------------------------------------------------------------------------
# The plus/minus pair and the symmetrized graph
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PlusMinusInstance:
    """Everything derived from one marked boundary: the augmented graph, its
    refinement, the even-trimmed stage graph, and the two half graphs."""

    base: PlanarGraph
    augmented: PlanarGraph
    boundary: MarkedBoundary
    refinement: DualRefinement
    trimmed: PlanarGraph         # refinement minus v0, v2, ..., v_{2n}
    plus: PlanarGraph            # trimmed minus odd-indexed midpoints
    minus: PlanarGraph           # trimmed minus even-indexed midpoints
    mids: tuple[int, ...]        # refinement vertex ids of m_1..m_{2n}


def build_plus_minus(refinement: DualRefinement,
                     mb: MarkedBoundary) -> tuple[PlanarGraph, PlanarGraph]:
    """The two vertex-deleted refinement graphs whose matchings are swapped
    by the gliding bijection."""
    if mb.leaves is None or mb.boundary_edges is None:
        raise PreconditionViolated("boundary must be augmented with leaves first")
    mids = tuple(refinement.mid_of_edge[e] for e in mb.boundary_edges)
    evens = mb.full_path[0::2]
    trimmed = remove_vertices(refinement.graph, evens, name="trimmed")
    plus = remove_vertices(trimmed, mids[0::2], name="plus")
    minus = remove_vertices(trimmed, mids[1::2], name="minus")
    return plus, minus


def section_instance(g0: PlanarGraph, path: list[int],
                     dual_weights: dict[int, Fraction] | None = None) -> PlusMinusInstance:
    g, mb = augment_with_leaves(g0, path)
    ref = dual_refinement(g, dual_weights)
    mids = tuple(ref.mid_of_edge[e] for e in mb.boundary_edges)
    evens = mb.full_path[0::2]
    trimmed = remove_vertices(ref.graph, evens, name="trimmed")
    plus = remove_vertices(trimmed, mids[0::2], name="plus")
    minus = remove_vertices(trimmed, mids[1::2], name="minus")
    return PlusMinusInstance(g0, g, mb, ref, trimmed, plus, minus, mids)


def symmetrize(refinement: DualRefinement, mb: MarkedBoundary) -> PlanarGraph:
    """Glue the even-trimmed refinement graph to its mirror image along the
    marked midpoints.

    The graph itself is defined combinatorially (vertex and edge doubling
    with identification along the midpoints).  For the drawing, the input
    must be in normal form: the marked path horizontal with the rest of the
    graph strictly above it.  The odd path vertices are then lifted off the
    axis by an exactly validated offset and the whole drawing is mirrored,
    which yields a genuine symmetric straight-line embedding.
    """
    if mb.leaves is None or mb.boundary_edges is None:
        raise PreconditionViolated("boundary must be augmented with leaves first")
    mids = tuple(refinement.mid_of_edge[e] for e in mb.boundary_edges)
    evens = mb.full_path[0::2]
    odds = mb.inner[0::2]
    trimmed = remove_vertices(refinement.graph, evens)

    axis_y = {trimmed.vertices[m].pos[1] for m in mids}
    if len(axis_y) != 1:
        raise ReembeddingFailed("marked midpoints are not on one horizontal line")
    y0 = axis_y.pop()
    on_axis = set(mids) | set(odds)
    for v in trimmed.vertices.values():
        if v.id in on_axis:
            continue
        if v.pos[1] <= y0:
            raise ReembeddingFailed(
                f"vertex {v.id} does not lie strictly above the marked line")

    top = None
    delta = Fraction(1, 4)
    for _ in range(12):
        vertices = {}
        for v in trimmed.vertices.values():
            y = v.pos[1] - y0
            if v.id in odds:
                y += delta
            vertices[v.id] = Vertex(v.id, (v.pos[0], y), v.tag)
        try:
            # removing the even path vertices may legitimately disconnect
            # path-like stretches; the drawing is still validated in full
            top = PlanarGraph.build(vertices, dict(trimmed.edges),
                                    require_connected=False)
            break
        except EmbeddingError:
            delta /= 4
    if top is None:
        raise ReembeddingFailed("could not lift the path vertices off the axis")

    mirror_of: dict[int, int] = {m: m for m in mids}
    vertices = dict(top.vertices)
    next_id = max(vertices) + 1
    for v in sorted(top.vertices):
        if v in mirror_of:
            continue
        pos = top.vertices[v].pos
        vertices[next_id] = Vertex(next_id, (pos[0], -pos[1]), top.vertices[v].tag)
        mirror_of[v] = next_id
        next_id += 1
    edges: dict[int, Edge] = {}
    next_eid = 0
    for eid in sorted(top.edges):
        e = top.edges[eid]
        edges[next_eid] = Edge(next_eid, e.u, e.v, e.weight)
        next_eid += 1
        mu, mv = mirror_of[e.u], mirror_of[e.v]
        if (mu, mv) != (e.u, e.v):
            edges[next_eid] = Edge(next_eid, mu, mv, e.weight)
            next_eid += 1
    return PlanarGraph.build(vertices, edges, name="symmetrized",
                             require_connected=False)


# ---------------------------------------------------------------------------
# Smashing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmashedGraph:
    """Refinement graph with boundary corners smashed in: each target vertex
    is deleted together with its two boundary edge midpoints, and the deletion
    is attributed to the center of the bounded face that contained it."""

    refinement: DualRefinement
    removed: tuple[int, ...]
    face_of: dict[int, int]   # smashed vertex -> face-center vertex id
    graph: PlanarGraph


def smash_in(refinement: DualRefinement, targets) -> SmashedGraph:
    g = refinement.source
    faces = g.trace_faces()
    inf = faces.infinite_index
    boundary = g.infinite_face_vertices()
    face_of: dict[int, int] = {}
    removed_vertices: set[int] = set()
    used_faces: dict[int, int] = {}
    for v in sorted(set(targets)):
        if v not in g.vertices:
            raise NotDegreeTwo(f"unknown vertex {v}")
        if g.degree(v) != 2:
            raise NotDegreeTwo(f"vertex {v} has degree {g.degree(v)}")
        if v not in boundary:
            raise NotOnInfiniteFace(f"vertex {v} is not on the infinite face")
        sides = set()
        for eid in g.adj[v]:
            sides.update(faces.sides_of_edge(g.edges[eid]))
            if not refinement.is_boundary_edge(eid):
                raise NotOnInfiniteFace(
                    f"edge {eid} at vertex {v} is not on the infinite face")
        bounded_sides = sorted(sides - {inf})
        if len(bounded_sides) != 1:
            raise PreconditionViolated(
                f"vertex {v} does not have a unique bounded face")
        f = bounded_sides[0]
        if f in used_faces:
            raise SharedFace(
                f"vertices {used_faces[f]} and {v} share bounded face {f}")
        used_faces[f] = v
        face_of[v] = refinement.center_of_face[f]
        removed_vertices.add(v)
        for eid in g.adj[v]:
            removed_vertices.add(refinement.mid_of_edge[eid])
    graph = remove_vertices(refinement.graph, removed_vertices, name="smashed")
    return SmashedGraph(refinement, tuple(sorted(set(targets))), face_of, graph)


# ---------------------------------------------------------------------------
# Trimmed squares
# ---------------------------------------------------------------------------


def _square_graph(side: int, present: set[tuple[int, int]]) -> PlanarGraph:
    # drawn rotated so the main diagonal of the square is the horizontal axis;
    # grid subgraphs are always valid embeddings, and the mirrored removals
    # may legitimately disconnect the final graph
    vertices = {}
    vid = {}
    for (i, j) in sorted(present):
        k = i * side + j
        vid[(i, j)] = k
        vertices[k] = Vertex(k, (Fraction(i + j), Fraction(j - i)))
    edges = {}
    eid = 0
    for (i, j) in sorted(present):
        for (di, dj) in ((1, 0), (0, 1)):
            if (i + di, j + dj) in present:
                edges[eid] = Edge(eid, vid[(i, j)], vid[(i + di, j + dj)])
                eid += 1
    return PlanarGraph.trusted(vertices, edges, geometric=True, name=f"square{side}")


def _quadruple(present: set[tuple[int, int]], peak: tuple[int, int]):
    i, j = peak
    nbrs = [p for p in ((i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)) if p in present]
    if len(nbrs) != 2:
        raise NotAPeak(f"{peak} has {len(nbrs)} neighbors, expected 2")
    (a1, a2), (b1, b2) = nbrs
    if a1 == b1 or a2 == b2:
        raise NotAPeak(f"{peak} is not a corner (collinear neighbors)")
    fourth = (a1 + b1 - i, a2 + b2 - j)
    if fourth not in present:
        raise NotAPeak(f"{peak} has no opposite four-cycle vertex")
    return [peak, nbrs[0], nbrs[1], fourth]


def _is_connected(present: set[tuple[int, int]]) -> bool:
    if not present:
        return False
    start = next(iter(present))
    seen = {start}
    stack = [start]
    while stack:
        i, j = stack.pop()
        for p in ((i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)):
            if p in present and p not in seen:
                seen.add(p)
                stack.append(p)
    return len(seen) == len(present)


def _stage_boundary(side: int, present: set[tuple[int, int]]) -> set[tuple[int, int]]:
    g = _square_graph(side, present)
    onb = g.infinite_face_vertices()
    return {(k // side, k % side) for k in onb}


def trimmed_square(n: int, removals=()) -> PlanarGraph:
    """A square grid of even side drawn with its diagonal horizontal, with
    four-cycle quadruples recursively removed at boundary peaks strictly above
    the diagonal and the removals mirrored below it."""
    if n < 1:
        raise ValueError("n must be positive")
    side = 2 * n
    present = {(i, j) for i in range(side) for j in range(side)}
    mirrored: list[tuple[int, int]] = []
    for peak in removals:
        i, j = peak
        if peak not in present:
            raise NotAPeak(f"{peak} is not a current vertex")
        if j <= i:
            raise BelowDiagonal(f"{peak} is not strictly above the diagonal")
        quad = _quadruple(present, peak)
        off = [p for p in quad if p[1] <= p[0]]
        if off:
            raise NotAPeak(f"four-cycle of {peak} touches the diagonal at {off}")
        if peak not in _stage_boundary(side, present):
            raise NotAPeak(f"{peak} is not on the current boundary")
        trial = present - set(quad)
        if not _is_connected(trial):
            raise NotAPeak(f"removing the four-cycle of {peak} disconnects the graph")
        present = trial
        mirrored.extend((q[1], q[0]) for q in quad)
    present -= set(mirrored)
    return _square_graph(side, present)


def list_peaks(n: int, removals=()) -> list[tuple[int, int]]:
    """Valid next removals for the trimmed-square generator after replaying
    the given removal sequence."""
    side = 2 * n
    present = {(i, j) for i in range(side) for j in range(side)}
    for peak in removals:
        present -= set(_quadruple(present, peak))
    boundary = _stage_boundary(side, present)
    peaks = []
    for p in sorted(present):
        i, j = p
        if j <= i or p not in boundary:
            continue
        try:
            quad = _quadruple(present, p)
        except NotAPeak:
            continue
        if any(q[1] <= q[0] for q in quad):
            continue
        if _is_connected(present - set(quad)):
            peaks.append(p)
    return peaks
