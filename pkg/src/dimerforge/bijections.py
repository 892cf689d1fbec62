"""Invertible transformations between matchings and between matchings and
trees: glide-path families and the plus/minus swap, the tree/matching
correspondence on dual refinements, run-transport between smashed hosts,
and the reflection swap on symmetric graphs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    ConditionViolated,
    ConstraintPathMismatch,
    DimerforgeError,
    NotOnAxis,
    PreconditionViolated,
    RootNotOnInfiniteFace,
)
from .gliding import DUAL, FRAME, glide, path_edgeset, shift_edges
from .matchings import Matching
from .planar import PlanarGraph, SymmetryCertificate, remove_vertices
from .refine import DualRefinement, PlusMinusInstance, SmashedGraph, smash_in
from .trees import RootedForest, make_forest

# ---------------------------------------------------------------------------
# Path families for the plus/minus bijection
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FamilyPath:
    vertices: tuple[int, ...]
    generation: int
    mode: str              # frame | dual
    start_index: int       # 1-based positions among the marked midpoints
    end_index: int


@dataclass(frozen=True)
class PathFamily:
    paths: tuple[FamilyPath, ...]

    def vertex_sets(self):
        return [set(p.vertices) for p in self.paths]


def build_path_family(instance: PlusMinusInstance, mu: Matching,
                      from_minus: bool = False) -> PathFamily:
    """The system of disjoint alternating paths that pairs up all marked
    midpoints, built generation by generation.

    Odd generations glide on the frame, even generations on the dual frame;
    starting from the minus side swaps the left-to-right sweep directions.
    """
    host = instance.minus if from_minus else instance.plus
    if mu.host != host.graph_id:
        raise PreconditionViolated("matching belongs to a different graph")
    cover = mu.cover_map(host)
    trimmed = instance.trimmed
    ref = instance.refinement
    mids = instance.mids
    index_of = {m: j for j, m in enumerate(mids, 1)}
    paths: list[FamilyPath] = []
    stack = [(1, len(mids), 1)]
    while stack:
        a, b, gen = stack.pop()
        mode = FRAME if gen % 2 == 1 else DUAL
        left_to_right = (gen % 2 == 1) != from_minus
        j = a if left_to_right else b
        while (a <= j <= b):
            gp = glide(trimmed, ref, cover, mids[j - 1], mode)
            end_mid = gp.vertices[-1]
            k = index_of.get(end_mid)
            if k is None:
                raise PreconditionViolated(
                    f"glide from midpoint {j} ended off the marked boundary")
            if left_to_right and not (j < k <= b):
                raise PreconditionViolated(
                    f"glide from midpoint {j} ended at {k}, outside ({j},{b}]")
            if not left_to_right and not (a <= k < j):
                raise PreconditionViolated(
                    f"glide from midpoint {j} ended at {k}, outside [{a},{j})")
            paths.append(FamilyPath(gp.vertices, gen, mode, j, k))
            lo, hi = (j + 1, k - 1) if left_to_right else (k + 1, j - 1)
            if lo <= hi:
                stack.append((lo, hi, gen + 1))
            j = k + 1 if left_to_right else k - 1
    family = PathFamily(tuple(paths))
    _check_family(instance, family)
    return family


def _check_family(instance: PlusMinusInstance, family: PathFamily):
    n = instance.boundary.n
    if len(family.paths) != n:
        raise PreconditionViolated(
            f"family has {len(family.paths)} paths, expected {n}")
    seen: set[int] = set()
    for p in family.paths:
        s = set(p.vertices)
        if seen & s:
            raise PreconditionViolated("family paths are not vertex-disjoint")
        seen |= s
    endpoints = sorted(i for p in family.paths for i in (p.start_index, p.end_index))
    if endpoints != list(range(1, 2 * n + 1)):
        raise PreconditionViolated("family endpoints do not pair all midpoints")


def shift_along(instance: PlusMinusInstance, mu: Matching,
                family: PathFamily) -> frozenset[int]:
    """Symmetric difference of the matching with the family's path edges."""
    return shift_edges(mu.edges, instance.trimmed,
                       [p.vertices for p in family.paths])


def phi(instance: PlusMinusInstance, mu: Matching) -> Matching:
    """Carry a matching of the plus graph to the minus graph by shifting
    along its path family."""
    family = build_path_family(instance, mu, from_minus=False)
    edges = shift_along(instance, mu, family)
    out = Matching(instance.minus.graph_id, edges)
    out.cover_map(instance.minus)
    return out


def psi(instance: PlusMinusInstance, mu: Matching) -> Matching:
    """Inverse direction of :func:`phi` (left and right swapped)."""
    family = build_path_family(instance, mu, from_minus=True)
    edges = shift_along(instance, mu, family)
    out = Matching(instance.plus.graph_id, edges)
    out.cover_map(instance.plus)
    return out


# ---------------------------------------------------------------------------
# Trees <-> matchings on the dual refinement
# ---------------------------------------------------------------------------


def refinement_host(ref: DualRefinement, removed) -> PlanarGraph:
    return remove_vertices(ref.graph, removed, name="host")


def temperley_tree_to_matching(ref: DualRefinement, tree: RootedForest) -> Matching:
    """Tail half-edges of the rooted tree plus tail half-edges of its dual
    tree rooted at the infinite face; a perfect matching of the refinement
    minus the root."""
    g = ref.source
    if tree.host != g.graph_id:
        raise PreconditionViolated("tree does not span the source graph")
    if len(tree.roots) != 1:
        raise PreconditionViolated("expected a single root")
    root = tree.roots[0]
    if root not in g.infinite_face_vertices():
        raise RootNotOnInfiniteFace(f"root {root} is not on the infinite face")
    host = refinement_host(ref, [root])
    chosen: set[int] = set()
    for v, eid, _p in tree.assignments:
        chosen.add(ref.graph.edge_between(v, ref.mid_of_edge[eid]).id)

    faces = g.trace_faces()
    inf = faces.infinite_index
    tree_edges = tree.edge_set
    # dual tree on bounded faces plus the infinite face, rooted at the latter
    adj: dict[int, list[tuple[int, int]]] = {inf: []}
    for f in faces.bounded:
        adj[f.index] = []
    for eid in sorted(g.edges):
        if eid in tree_edges:
            continue
        fa, fb = faces.sides_of_edge(g.edges[eid])
        if fa == fb:
            raise PreconditionViolated(f"non-tree edge {eid} is a bridge")
        adj[fa].append((eid, fb))
        adj[fb].append((eid, fa))
    seen = {inf}
    stack = [inf]
    while stack:
        f = stack.pop()
        for eid, other in sorted(adj[f]):
            if other not in seen:
                seen.add(other)
                stack.append(other)
                chosen.add(ref.graph.edge_between(ref.center_of_face[other],
                                                  ref.mid_of_edge[eid]).id)
    if seen != set(adj):
        raise PreconditionViolated("dual complement is not a spanning tree")
    mu = Matching(host.graph_id, frozenset(chosen))
    mu.cover_map(host)
    return mu


def temperley_matching_to_tree(ref: DualRefinement, mu: Matching,
                               root: int) -> RootedForest:
    """Each non-root vertex exits along the primal edge containing its
    matched half-edge; the result is the spanning tree matched to ``mu``."""
    g = ref.source
    if root not in g.infinite_face_vertices():
        raise RootNotOnInfiniteFace(f"root {root} is not on the infinite face")
    host = refinement_host(ref, [root])
    if mu.host != host.graph_id:
        raise PreconditionViolated("matching host does not agree with the root")
    cover = mu.cover_map(host)
    parent = {}
    for v in g.vertices:
        if v == root:
            continue
        mid = host.edges[cover[v]].other(v)
        primal = ref.primal_edge_of(mid)
        parent[v] = (primal, g.edges[primal].other(v))
    return make_forest(g, (root,), parent)


# ---------------------------------------------------------------------------
# Transport between smashed hosts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransportInstance:
    """A smashed refinement with two runs of marked boundary vertices; the
    two hosts delete the plain run and the primed run respectively."""

    smashed: SmashedGraph
    plain: tuple[int, ...]       # v_1..v_{2n+1}
    prime: tuple[int, ...]       # v'_1..v'_{2n+1}
    host_plain: PlanarGraph      # plain marks deleted
    host_prime: PlanarGraph      # primed marks deleted
    forest_graph: PlanarGraph    # source minus the smashed corners
    dual_weights: tuple[tuple[int, Fraction], ...] = ()  # per primal edge

    @property
    def n(self) -> int:
        return (len(self.plain) - 1) // 2

    @property
    def plain_odd(self) -> tuple[int, ...]:
        return self.plain[0::2]

    @property
    def prime_odd(self) -> tuple[int, ...]:
        return self.prime[0::2]

    @property
    def plain_even_faces(self) -> tuple[int, ...]:
        ref = self.smashed.refinement
        return tuple(ref.face_of(self.smashed.face_of[v]) for v in self.plain[1::2])

    @property
    def prime_even_faces(self) -> tuple[int, ...]:
        ref = self.smashed.refinement
        return tuple(ref.face_of(self.smashed.face_of[v]) for v in self.prime[1::2])

    def removal_sequence(self, primed: bool) -> tuple[int, ...]:
        """Alternating marks v_1, f_2, v_3, ..., v_{2n+1} as refinement ids."""
        marks = self.prime if primed else self.plain
        out = []
        for i, v in enumerate(marks, 1):
            out.append(self.smashed.face_of[v] if i % 2 == 0 else v)
        return tuple(out)


def _check_cyclic_order(g: PlanarGraph, sequence: list[int]):
    cyc = g.trace_faces().infinite_face.cycle
    verts = [v for v, _ in reversed(cyc)]  # counterclockwise
    for v in sequence:
        if verts.count(v) != 1:
            raise ConditionViolated("iii", f"vertex {v} not exactly once on the boundary")
    pos = [verts.index(v) for v in sequence]
    shift = pos.index(min(pos))
    rotated = pos[shift:] + pos[:shift]
    if rotated != sorted(rotated):
        raise ConditionViolated("iii", f"marks are not in counterclockwise order: {sequence}")


def _check_run(g: PlanarGraph, marks, which: str, require_path: bool):
    if len(marks) % 2 == 0:
        raise ConditionViolated(which, "a run must list an odd number of vertices")
    for v in marks:
        if v not in g.vertices:
            raise ConditionViolated(which, f"unknown vertex {v}")
    if len(set(marks)) != len(marks):
        raise ConditionViolated(which, "repeated mark")
    if require_path:
        for a, b in zip(marks, marks[1:]):
            if g.edge_between(a, b) is None:
                raise ConditionViolated(which, f"{a},{b} is not an edge")


def transport_instance(g: PlanarGraph, plain, prime, *,
                       require_plain_path: bool = True,
                       dual_weights: dict[int, Fraction] | None = None) -> TransportInstance:
    """Validate the marked runs (conditions on paths, cyclic order, degree-2
    corners in distinct faces), smash the even marks, and build both hosts."""
    plain = tuple(plain)
    prime = tuple(prime)
    if len(plain) != len(prime):
        raise ConditionViolated("iii", "runs have different lengths")
    if set(plain) & set(prime):
        raise ConditionViolated("iii", "the two runs share a vertex")
    _check_run(g, plain, "i", require_plain_path)
    _check_run(g, prime, "ii", True)
    _check_cyclic_order(g, list(plain) + list(reversed(prime)))
    from .refine import dual_refinement

    ref = dual_refinement(g, dual_weights)
    targets = plain[1::2] + prime[1::2]
    boundary = g.infinite_face_vertices()
    for v in targets:
        if v not in boundary or g.degree(v) != 2:
            raise ConditionViolated("iv", f"vertex {v} must have degree 2 on the infinite face")
    try:
        smashed = smash_in(ref, targets)
    except DimerforgeError as exc:
        raise ConditionViolated("iv", str(exc)) from exc
    inst_plain = []
    for i, v in enumerate(plain, 1):
        inst_plain.append(smashed.face_of[v] if i % 2 == 0 else v)
    inst_prime = []
    for i, v in enumerate(prime, 1):
        inst_prime.append(smashed.face_of[v] if i % 2 == 0 else v)
    host_plain = remove_vertices(smashed.graph, inst_plain, name="host-plain")
    host_prime = remove_vertices(smashed.graph, inst_prime, name="host-prime")
    forest_graph = remove_vertices(g, targets, name="forest-graph")
    return TransportInstance(smashed, plain, prime, host_plain, host_prime,
                             forest_graph,
                             tuple(sorted((dual_weights or {}).items())))


def site_path_to_refinement(ref: DualRefinement, sites) -> tuple[int, ...]:
    """Interleave a path of source vertices with the midpoints it crosses."""
    out = [sites[0]]
    for a, b in zip(sites, sites[1:]):
        e = ref.source.edge_between(a, b)
        if e is None:
            raise PreconditionViolated(f"{a},{b} is not an edge of the source")
        out.append(ref.mid_of_edge[e.id])
        out.append(b)
    return tuple(out)


def face_path_to_refinement(ref: DualRefinement, face_indices) -> tuple[int, ...]:
    """Interleave a path of bounded faces with the midpoints of the shared
    edges (which must be unique between consecutive faces)."""
    faces = ref.source.trace_faces()
    out = [ref.center_of_face[face_indices[0]]]
    for fa, fb in zip(face_indices, face_indices[1:]):
        shared = [e.id for e in ref.source.edges.values()
                  if set(faces.sides_of_edge(e)) == {fa, fb}]
        if len(shared) != 1:
            raise PreconditionViolated(
                f"faces {fa},{fb} share {len(shared)} edges; path is ambiguous")
        out.append(ref.mid_of_edge[shared[0]])
        out.append(ref.center_of_face[fb])
    return tuple(out)


def forced_path_matching(graph: PlanarGraph, h_path, drop_start: bool) -> frozenset[int]:
    """The unique perfect matching of the path minus one endpoint."""
    seq = h_path[1:] if drop_start else h_path[:-1]
    if len(seq) % 2 == 1:
        raise PreconditionViolated("path minus an endpoint must have even length")
    eids = path_edgeset(graph, seq)
    return frozenset(eids[0::2])


def tea_transport(instance: TransportInstance, mu: Matching,
                  chosen: frozenset[int] | set[int] = frozenset(),
                  constraint_paths: dict[int, tuple[int, ...]] | None = None) -> Matching:
    """Glide from every mark of the side opposite to the matching's host,
    verify the constrained glide paths, and shift.

    ``constraint_paths`` maps indices in ``chosen`` (1-based positions in the
    alternating mark sequence) to refinement vertex paths from the plain mark
    to the primed mark.
    """
    constraint_paths = constraint_paths or {}
    ref = instance.smashed.refinement
    hgraph = ref.graph
    chosen = frozenset(chosen)
    if chosen and not all(i in constraint_paths for i in chosen):
        raise ConstraintPathMismatch("missing constraint path")
    if mu.host == instance.host_prime.graph_id:
        source, target, primed_source = instance.host_prime, instance.host_plain, True
    elif mu.host == instance.host_plain.graph_id:
        source, target, primed_source = instance.host_plain, instance.host_prime, False
    else:
        raise PreconditionViolated("matching belongs to neither host")
    cover = mu.cover_map(source)
    # forced containment for the constrained indices
    for i in chosen:
        hp = constraint_paths[i]
        forced = forced_path_matching(hgraph, hp, drop_start=not primed_source)
        if not forced <= mu.edges:
            raise ConstraintPathMismatch(
                f"matching misses the forced edges of constraint path {i}")
    starts = instance.removal_sequence(primed=not primed_source)
    expected_ends = instance.removal_sequence(primed=primed_source)
    paths = []
    for i, (start, expect) in enumerate(zip(starts, expected_ends), 1):
        mode = FRAME if i % 2 == 1 else DUAL
        gp = glide(source, ref, cover, start, mode)
        if gp.blocked_at_infinite or gp.blocked_target != expect:
            raise PreconditionViolated(
                f"glide from mark {i} ended at {gp.blocked_target}, expected {expect}")
        full = gp.vertices + (expect,)
        if i in chosen:
            want = constraint_paths[i]
            if not primed_source:
                want = tuple(reversed(want))
            if full != want:
                raise ConstraintPathMismatch(
                    f"glide path {i} differs from the required constraint path")
        paths.append(full)
    used: set[int] = set()
    for p in paths:
        if used & set(p):
            raise PreconditionViolated("transport glide paths intersect")
        used |= set(p)
    edges = shift_edges(mu.edges, hgraph, paths)
    out = Matching(target.graph_id, edges)
    out.cover_map(target)
    return out


# ---------------------------------------------------------------------------
# Reflection swap
# ---------------------------------------------------------------------------


def reflect_swap(g: PlanarGraph, cert: SymmetryCertificate, mu: Matching,
                 axis_vertex: int) -> Matching:
    """Swap the matching with its mirror image along the component of their
    union through the given on-axis vertex; a weight-preserving involution.

    The union of a matching with its mirror decomposes into alternating
    cycles and doubled edges; the doubled-edge case leaves the matching
    unchanged.
    """
    if axis_vertex not in cert.axis_vertices:
        raise NotOnAxis(f"vertex {axis_vertex} is not on the axis")
    cover = mu.cover_map(g)
    mirror_cover = {cert.vertex_map[v]: cert.edge_map[e] for v, e in cover.items()}
    if cover[axis_vertex] == mirror_cover[axis_vertex]:
        return mu
    new_edges = set(mu.edges)
    v = axis_vertex
    use_mu = True
    while True:
        e = cover[v] if use_mu else mirror_cover[v]
        if use_mu:
            new_edges.discard(e)
        else:
            new_edges.add(e)
        v = g.edges[e].other(v)
        use_mu = not use_mu
        if v == axis_vertex and use_mu:
            break
    out = Matching(mu.host, frozenset(new_edges))
    out.cover_map(g)
    return out
