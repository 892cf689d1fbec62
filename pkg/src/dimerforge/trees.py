"""Spanning trees and forests: enumeration, exact counting, uniform sampling,
the banded-forest/matching correspondence, and symmetry class weights.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterator

import mpmath

from .errors import (
    BandPairingViolated,
    ChannelPairingViolated,
    ClassificationFailed,
    HypothesisViolated,
    NotBanded,
    PreconditionViolated,
)
from .matchings import Matching
from .planar import PlanarGraph, SymmetryCertificate

# ---------------------------------------------------------------------------
# Rooted forests
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RootedForest:
    """Per-vertex oriented parent assignment toward a designated root set.

    ``assignments`` holds (vertex, edge id, parent vertex) triples, sorted by
    vertex; spanning trees are the single-root case.
    """

    host: str
    roots: tuple[int, ...]
    assignments: tuple[tuple[int, int, int], ...]

    @property
    def parent(self) -> dict[int, tuple[int, int]]:
        return {v: (e, p) for v, e, p in self.assignments}

    @property
    def edge_set(self) -> frozenset[int]:
        return frozenset(e for _, e, _ in self.assignments)

    def parent_edge(self, v: int) -> int:
        for w, e, _ in self.assignments:
            if w == v:
                return e
        raise KeyError(f"{v} is a root or absent")

    def weight(self, g: PlanarGraph) -> Fraction:
        w = Fraction(1)
        for _, e, _ in self.assignments:
            w *= g.edges[e].weight
        return w


def make_forest(g: PlanarGraph, roots, parent: dict[int, tuple[int, int]]) -> RootedForest:
    """Validated constructor: checks the parent map is a forest oriented
    toward the roots and spans the graph."""
    roots = tuple(sorted(set(roots)))
    for r in roots:
        if r not in g.vertices:
            raise PreconditionViolated(f"root {r} not in graph")
        if r in parent:
            raise PreconditionViolated(f"root {r} has a parent edge")
    for v in g.vertices:
        if v not in parent and v not in roots:
            raise PreconditionViolated(f"vertex {v} has no parent and is not a root")
    for v, (e, p) in parent.items():
        edge = g.edges[e]
        if {edge.u, edge.v} != {v, p}:
            raise PreconditionViolated(f"edge {e} does not join {v} and {p}")
    # walk to a root from every vertex; any revisit inside the walk is a cycle
    state: dict[int, int] = {}  # 0 in progress, 1 done
    for v in g.vertices:
        chain = []
        w = v
        while w not in roots and state.get(w) != 1:
            if state.get(w) == 0:
                raise PreconditionViolated("parent assignment contains a cycle")
            state[w] = 0
            chain.append(w)
            w = parent[w][1]
        for u in chain:
            state[u] = 1
    return RootedForest(g.graph_id, roots,
                        tuple(sorted((v, e, p) for v, (e, p) in parent.items())))


def orient_edge_set(g: PlanarGraph, edges, roots) -> RootedForest:
    """Orient a forest given as an edge set toward the given roots."""
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in g.vertices}
    for eid in edges:
        e = g.edges[eid]
        adj[e.u].append((eid, e.v))
        adj[e.v].append((eid, e.u))
    parent: dict[int, tuple[int, int]] = {}
    seen = set()
    for r in roots:
        stack = [r]
        seen.add(r)
        while stack:
            v = stack.pop()
            for eid, w in sorted(adj[v]):
                if w not in seen:
                    seen.add(w)
                    parent[w] = (eid, v)
                    stack.append(w)
    if len(seen) != len(g.vertices):
        raise PreconditionViolated("edge set does not span the graph from the roots")
    return make_forest(g, roots, parent)


# ---------------------------------------------------------------------------
# Enumeration and exact counting
# ---------------------------------------------------------------------------


def enumerate_spanning_trees(g: PlanarGraph, root: int) -> Iterator[RootedForest]:
    """All spanning trees, oriented toward ``root``, in the deterministic
    order induced by include/exclude decisions on ascending edge ids."""
    n = len(g.vertices)
    if root not in g.vertices:
        raise PreconditionViolated(f"root {root} not in graph")
    if n == 1:
        yield make_forest(g, (root,), {})
        return
    edge_ids = sorted(g.edges)

    def connected_with(active_parent: dict[int, int], from_idx: int) -> bool:
        par = dict(active_parent)

        def find(x):
            while par[x] != x:
                par[x] = par[par[x]]
                x = par[x]
            return x

        comps = len({find(v) for v in g.vertices})
        for eid in edge_ids[from_idx:]:
            e = g.edges[eid]
            ru, rv = find(e.u), find(e.v)
            if ru != rv:
                par[ru] = rv
                comps -= 1
                if comps == 1:
                    return True
        return comps == 1

    def rec(idx: int, chosen: list[int], par: dict[int, int], remaining: int):
        if remaining == 0:
            yield orient_edge_set(g, chosen, (root,))
            return
        if idx == len(edge_ids):
            return

        def find(x):
            while par[x] != x:
                x = par[x]
            return x

        eid = edge_ids[idx]
        e = g.edges[eid]
        ru, rv = find(e.u), find(e.v)
        if ru != rv:
            child = dict(par)
            child[ru] = rv
            chosen.append(eid)
            yield from rec(idx + 1, chosen, child, remaining - 1)
            chosen.pop()
        if connected_with(par, idx + 1):
            yield from rec(idx + 1, chosen, par, remaining)

    yield from rec(0, [], {v: v for v in g.vertices}, n - 1)


def _bareiss_det(m: list[list[int]]) -> int:
    """Fraction-free determinant of an integer matrix."""
    n = len(m)
    if n == 0:
        return 1
    m = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def count_spanning_trees(g: PlanarGraph) -> Fraction:
    """Weighted spanning tree count from a reduced-Laplacian determinant,
    computed fraction-free over exact integers."""
    verts = sorted(g.vertices)
    n = len(verts)
    if n == 0:
        return Fraction(0)
    if n == 1:
        return Fraction(1)
    idx = {v: i for i, v in enumerate(verts)}
    scale = lcm(*[e.weight.denominator for e in g.edges.values()]) if g.edges else 1
    lap = [[0] * n for _ in range(n)]
    for e in g.edges.values():
        w = int(e.weight * scale)
        i, j = idx[e.u], idx[e.v]
        lap[i][i] += w
        lap[j][j] += w
        lap[i][j] -= w
        lap[j][i] -= w
    minor = [row[:-1] for row in lap[:-1]]
    det = _bareiss_det(minor)
    return Fraction(det, scale ** (n - 1))


# ---------------------------------------------------------------------------
# Uniform spanning tree sampling (loop-erased random walks)
# ---------------------------------------------------------------------------


def split_seed(seed: int, task: int) -> int:
    """Derive an independent child seed; documented, stable across runs."""
    digest = hashlib.sha256(f"{seed}:{task}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def ust_sample(g: PlanarGraph, root: int, seed: int) -> RootedForest:
    """One spanning tree drawn with probability proportional to its weight
    product, via loop-erased random walks.  Deterministic for a fixed seed;
    the generator is Python's Mersenne Twister seeded with ``seed`` and the
    walk steps draw integers below the per-vertex scaled weight totals."""
    rng = random.Random(seed)
    succ: dict[int, tuple[list[int], list[int], int]] = {}
    for v in sorted(g.vertices):
        nbrs, cums, total = [], [], 0
        denom = lcm(*[g.edges[e].weight.denominator for e in g.adj[v]]) if g.adj[v] else 1
        for eid in g.adj[v]:
            w = int(g.edges[eid].weight * denom)
            if w == 0:
                continue
            total += w
            nbrs.append(eid)
            cums.append(total)
        succ[v] = (nbrs, cums, total)
    in_tree = {root}
    parent: dict[int, tuple[int, int]] = {}
    for start in sorted(g.vertices):
        if start in in_tree:
            continue
        path = [start]
        pos = {start: 0}
        while path[-1] not in in_tree:
            v = path[-1]
            nbrs, cums, total = succ[v]
            r = rng.randrange(total)
            k = 0
            while cums[k] <= r:
                k += 1
            eid = nbrs[k]
            w = g.edges[eid].other(v)
            if w in pos:
                for dead in path[pos[w] + 1:]:
                    del pos[dead]
                del path[pos[w] + 1:]
            else:
                pos[w] = len(path)
                path.append(w)
        for a, b in zip(path, path[1:]):
            parent[a] = (g.edge_between(a, b).id, b)
            in_tree.add(a)
        in_tree.add(path[-1])
    return make_forest(g, (root,), parent)


def chi_square_sf(stat: float, dof: int) -> float:
    """Upper tail probability of the chi-square distribution."""
    return float(mpmath.gammainc(dof / 2, stat / 2, mpmath.inf, regularized=True))


# ---------------------------------------------------------------------------
# Dual forests, channels and bays
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DualForest:
    """Duals of the primal edges missing from a banded forest: an acyclic
    subgraph of the planar dual, spanning all bounded faces."""

    primal_edges: tuple[int, ...]
    components: tuple[frozenset[int], ...]  # face-index sets


def dual_forest(g: PlanarGraph, forest_edges) -> DualForest:
    faces = g.trace_faces()
    inf = faces.infinite_index
    forest_edges = set(forest_edges)
    par = {f.index: f.index for f in faces.bounded}

    def find(x):
        while par[x] != x:
            par[x] = par[par[x]]
            x = par[x]
        return x

    used = []
    for eid in sorted(g.edges):
        if eid in forest_edges:
            continue
        fa, fb = faces.sides_of_edge(g.edges[eid])
        if inf in (fa, fb) or fa == fb:
            continue
        ra, rb = find(fa), find(fb)
        if ra == rb:
            raise NotBanded(f"dual edges form a cycle at primal edge {eid}")
        par[ra] = rb
        used.append(eid)
    groups: dict[int, set[int]] = {}
    for f in faces.bounded:
        groups.setdefault(find(f.index), set()).add(f.index)
    comps = tuple(sorted((frozenset(s) for s in groups.values()), key=min))
    return DualForest(tuple(used), comps)


@dataclass(frozen=True)
class ComponentLabel:
    kind: str                       # "channel" | "bay"
    faces: tuple[int, ...]          # face indices adjacent to the infinite face
    contact_edges: tuple[int, ...]  # boundary primal edges realizing the contacts
    arcs: tuple[int, ...]           # boundary arc index of each contact edge
    members: frozenset[int]


@dataclass(frozen=True)
class BandedForestCertificate:
    bands: tuple[tuple[int, int], ...]           # distinguished pairs (u_i, u'_i)
    band_components: tuple[frozenset[int], ...]  # vertex sets, aligned with bands
    components: tuple[ComponentLabel, ...]


def _ccw_boundary(g: PlanarGraph) -> list[tuple[int, int]]:
    """(vertex, edge to the next vertex) pairs of the infinite face walk in
    counterclockwise order around the graph."""
    cyc = g.trace_faces().infinite_face.cycle  # clockwise darts (tail, edge)
    m = len(cyc)
    return [(cyc[(m - t) % m][0], cyc[(m - 1 - t) % m][1]) for t in range(m)]


def _boundary_arcs(g: PlanarGraph, marks: list[int]) -> dict[int, int]:
    """Map each boundary edge to the index of the arc between consecutive
    marks (arc i runs counterclockwise from marks[i] to marks[i+1]); the
    marks themselves must sit on the boundary in this cyclic order."""
    cycle = _ccw_boundary(g)
    verts = [v for v, _ in cycle]
    for m in marks:
        if verts.count(m) != 1:
            raise ClassificationFailed(
                f"boundary mark {m} does not appear exactly once on the infinite face")
    pos = {m: verts.index(m) for m in marks}
    seq = [pos[m] for m in marks]
    shift = seq.index(min(seq))
    if seq[shift:] + seq[:shift] != sorted(seq):
        raise NotBanded(
            f"distinguished points are not in counterclockwise order: {marks}")
    start = pos[marks[0]]
    rotated = cycle[start:] + cycle[:start]
    arc_of_edge = {}
    arc = 0
    for v, e in rotated:
        if v in pos:
            arc = marks.index(v)
        arc_of_edge[e] = arc
    return arc_of_edge


def classify_components(ambient: PlanarGraph, forest: RootedForest,
                        pairs: list[tuple[int, int]],
                        forest_graph: PlanarGraph | None = None) -> BandedForestCertificate:
    """Check bandedness against the distinguished pairs and label every dual
    forest component as a channel (two contacts with the infinite face,
    crossing the two opposite arcs between consecutive bands) or a bay (one
    contact).

    ``ambient`` supplies the faces and the boundary; the forest may span an
    induced subgraph of it (smashed corners stay out of the bands but their
    faces stay in the dual).
    """
    if forest_graph is None:
        forest_graph = ambient
    forest_edges = forest.edge_set
    dual = dual_forest(ambient, forest_edges)
    par = {v: v for v in forest_graph.vertices}

    def find(x):
        while par[x] != x:
            par[x] = par[par[x]]
            x = par[x]
        return x

    for eid in forest_edges:
        e = ambient.edges[eid]
        par[find(e.u)] = find(e.v)
    comp_of: dict[int, set[int]] = {}
    for v in forest_graph.vertices:
        comp_of.setdefault(find(v), set()).add(v)
    if len(comp_of) != len(pairs):
        raise NotBanded(
            f"forest has {len(comp_of)} components for {len(pairs)} pairs")
    band_components = []
    for u, up in pairs:
        if find(u) != find(up):
            raise BandPairingViolated(f"{u} and {up} lie in different components")
        band_components.append(frozenset(comp_of[find(u)]))
    if len({find(u) for u, _ in pairs}) != len(pairs):
        raise BandPairingViolated("two distinguished pairs share a component")
    # counterclockwise order u_1..u_k, u'_k..u'_1 along the infinite face
    marks = [u for u, _ in pairs] + [up for _, up in reversed(pairs)]
    arc_of_edge = _boundary_arcs(ambient, marks)
    k = len(pairs)

    faces = ambient.trace_faces()
    inf = faces.infinite_index
    contact: dict[int, list[int]] = {}
    for eid in sorted(ambient.edges):
        if eid in forest_edges:
            continue
        fa, fb = faces.sides_of_edge(ambient.edges[eid])
        if inf not in (fa, fb) or fa == fb:
            continue
        f = fb if fa == inf else fa
        contact.setdefault(f, []).append(eid)

    labels = []
    for members in dual.components:
        touch = sorted(f for f in members if f in contact)
        if not touch:
            raise ClassificationFailed(
                f"dual component {sorted(members)} has no contact with the infinite face")
        if len(touch) > 2:
            raise ClassificationFailed(
                f"dual component {sorted(members)} has {len(touch)} contact faces")
        edges_used = []
        arcs = []
        for f in touch:
            arcset = sorted({arc_of_edge[e] for e in contact[f]})
            if len(arcset) != 1:
                raise ClassificationFailed(
                    f"contact face {f} touches the infinite face on several arcs")
            arcs.append(arcset[0])
            edges_used.append(min(contact[f]))
        if len(touch) == 2:
            a, b = sorted(arcs)
            # the two crossings must sit on the opposite arcs of one band gap:
            # (u_i, u_{i+1}) pairs with (u'_{i+1}, u'_i), arc indices i-1 and 2k-1-i
            if a + b != 2 * k - 2 or a == k - 1:
                raise ClassificationFailed(
                    f"channel arcs {arcs} are not opposite arcs of a band gap")
            labels.append(ComponentLabel("channel", tuple(touch),
                                         tuple(edges_used), tuple(arcs), members))
        else:
            labels.append(ComponentLabel("bay", tuple(touch),
                                         tuple(edges_used), tuple(arcs), members))
    return BandedForestCertificate(tuple(pairs), tuple(band_components), tuple(labels))


# ---------------------------------------------------------------------------
# Banded forests <-> matchings of the smashed refinement
# ---------------------------------------------------------------------------


def banded_forest_weight(instance, forest: RootedForest) -> Fraction:
    """Weight of a banded forest: the product of its edge weights, times the
    product of the dual weights of the dual forest's edges (all 1 in the
    unweighted-dual case, recovering the plain forest weight)."""
    ref = instance.smashed.refinement
    w = forest.weight(instance.forest_graph)
    dual_w = dict(instance.dual_weights)
    if dual_w:
        for eid in dual_forest(ref.source, forest.edge_set).primal_edges:
            w *= dual_w.get(eid, Fraction(1))
    return w


def tec_matching_to_forest(instance, mu: Matching) -> RootedForest:
    """Read the banded spanning forest off a matching of the primed-deleted
    host: each non-root vertex exits along the primal edge containing its
    matched half-edge."""
    ref = instance.smashed.refinement
    host = instance.host_prime
    if mu.host != host.graph_id:
        raise PreconditionViolated("matching does not belong to the primed-deleted host")
    cover = mu.cover_map(host)
    g0 = instance.forest_graph
    roots = instance.prime_odd
    parent = {}
    for v in g0.vertices:
        if v in roots:
            continue
        eid = cover[v]
        mid = host.edges[eid].other(v)
        primal = ref.primal_edge_of(mid)
        parent[v] = (primal, ref.source.edges[primal].other(v))
    forest = make_forest(g0, roots, parent)
    classify_components(ref.source, forest,
                        list(zip(instance.plain_odd, instance.prime_odd)), g0)
    _check_channel_pairing(instance, forest)
    return forest


def _check_channel_pairing(instance, forest: RootedForest):
    ref = instance.smashed.refinement
    dual = dual_forest(ref.source, forest.edge_set)
    comp_of_face = {}
    for members in dual.components:
        for f in members:
            comp_of_face[f] = members
    for fa, fb in zip(instance.plain_even_faces, instance.prime_even_faces):
        if comp_of_face[fa] is not comp_of_face[fb]:
            raise ChannelPairingViolated(
                f"faces {fa} and {fb} lie in different dual components")


def tec_forest_to_matching(instance, forest: RootedForest) -> Matching:
    """Inverse construction: tail half-edges of the forest, of the channels
    rooted at the primed centers, and of the augmented bays."""
    ref = instance.smashed.refinement
    src = ref.source
    g0 = instance.forest_graph
    host = instance.host_prime
    if forest.host != g0.graph_id:
        raise PreconditionViolated("forest does not span the expected graph")
    if set(forest.roots) != set(instance.prime_odd):
        raise PreconditionViolated("forest roots differ from the primed marks")
    classify_components(src, forest,
                        list(zip(instance.plain_odd, instance.prime_odd)), g0)
    _check_channel_pairing(instance, forest)

    hgraph = ref.graph
    chosen: set[int] = set()
    for v, eid, _p in forest.assignments:
        mid = ref.mid_of_edge[eid]
        chosen.add(hgraph.edge_between(v, mid).id)

    forest_edges = forest.edge_set
    dual = dual_forest(src, forest_edges)
    faces = src.trace_faces()
    inf = faces.infinite_index
    dual_adj: dict[int, list[tuple[int, int]]] = {}
    for eid in dual.primal_edges:
        fa, fb = faces.sides_of_edge(src.edges[eid])
        dual_adj.setdefault(fa, []).append((eid, fb))
        dual_adj.setdefault(fb, []).append((eid, fa))
    face_root: dict[frozenset[int], int] = {}
    for members in dual.components:
        primes_here = [f for f in instance.prime_even_faces if f in members]
        if primes_here:
            if len(primes_here) > 1:
                raise ChannelPairingViolated(
                    f"dual component {sorted(members)} contains two primed centers")
            face_root[members] = primes_here[0]
        else:
            # bay: unique boundary exit among non-forest boundary edges whose
            # midpoints survived the smashing
            candidates = []
            for eid in sorted(src.edges):
                if eid in forest_edges:
                    continue
                fa, fb = faces.sides_of_edge(src.edges[eid])
                if (fa == inf) == (fb == inf):
                    continue
                f = fb if fa == inf else fa
                if f in members and ref.mid_of_edge[eid] in host.vertices:
                    candidates.append((f, eid))
            if len(candidates) != 1:
                raise ClassificationFailed(
                    f"bay {sorted(members)} has {len(candidates)} boundary exits")
            f, eid = candidates[0]
            face_root[members] = f
            chosen.add(hgraph.edge_between(ref.center_of_face[f],
                                           ref.mid_of_edge[eid]).id)
    # orient each dual component toward its root; tail half-edges go in
    for members in dual.components:
        root = face_root[members]
        seen = {root}
        stack = [root]
        while stack:
            f = stack.pop()
            for eid, other in sorted(dual_adj.get(f, ())):
                if other not in seen:
                    seen.add(other)
                    stack.append(other)
                    chosen.add(hgraph.edge_between(ref.center_of_face[other],
                                                   ref.mid_of_edge[eid]).id)
        if seen != set(members):
            raise ClassificationFailed("dual component is not connected")
    mu = Matching(host.graph_id, frozenset(chosen))
    mu.cover_map(host)
    return mu


# ---------------------------------------------------------------------------
# Symmetry class weights and independence reports
# ---------------------------------------------------------------------------


def class_weight(g: PlanarGraph, cert: SymmetryCertificate, root: int,
                 marked_edges: list[int], chosen: set[int] | frozenset[int]) -> Fraction:
    """Total weight of the spanning trees rooted at ``root`` in which the
    axis endpoint of each marked edge exits along the edge itself (index in
    ``chosen``) or along its mirror image (otherwise)."""
    axis = set(cert.axis_vertices)
    if root not in axis:
        raise HypothesisViolated(f"root {root} is not on the axis")
    if root not in g.infinite_face_vertices():
        raise HypothesisViolated(f"root {root} is not on the infinite face")
    anchors = []
    seen_vertices: set[int] = set()
    for eid in marked_edges:
        e = g.edges[eid]
        onax = [v for v in (e.u, e.v) if v in axis]
        if len(onax) != 1:
            raise HypothesisViolated(
                f"edge {eid} must touch the axis in exactly one endpoint")
        if root in (e.u, e.v):
            raise HypothesisViolated(f"root {root} is incident to marked edge {eid}")
        if e.u in seen_vertices or e.v in seen_vertices:
            raise HypothesisViolated("marked edges are not pairwise disjoint")
        seen_vertices.update((e.u, e.v))
        anchors.append((onax[0], eid))
    total = Fraction(0)
    for tree in enumerate_spanning_trees(g, root):
        parent = tree.parent
        ok = True
        for i, (a, eid) in enumerate(anchors, 1):
            want = eid if i in chosen else cert.edge_map[eid]
            if parent[a][0] != want:
                ok = False
                break
        if ok:
            total += tree.weight(g)
    return total


@dataclass(frozen=True)
class IndependenceReport:
    kind: str
    variables: tuple[int, ...]
    table: tuple[tuple[tuple[int, ...], Fraction], ...]
    passed: bool
    sampled: bool = False
    samples: int = 0
    chi_square: float | None = None
    p_value: float | None = None

    def render(self) -> str:
        lines = [f"variables: {' '.join(map(str, self.variables))}"]
        for bits, weight in self.table:
            lines.append(f"  {''.join(map(str, bits))}  {weight}")
        if self.sampled:
            lines.append(f"samples: {self.samples}")
            lines.append(f"chi-square: {self.chi_square:.6f}  p={self.p_value:.3e}")
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines)


def _exit_bit(g: PlanarGraph, cert: SymmetryCertificate, kind: str,
              v: int, parent_vertex: int) -> int:
    dy = g.vertices[parent_vertex].pos[1] - cert.axis_y
    if kind == "exit-side":
        if dy == 0:
            raise HypothesisViolated(f"vertex {v} exits along the axis")
        return 1 if dy > 0 else 0
    dx = g.vertices[parent_vertex].pos[0] - g.vertices[v].pos[0]
    dyv = g.vertices[parent_vertex].pos[1] - g.vertices[v].pos[1]
    if dx == 0 or dyv == 0:
        raise HypothesisViolated(f"edge at {v} is axis-parallel; not a diagonal grid")
    return 1 if (dx > 0) != (dyv > 0) else 0


def independence_variables(g: PlanarGraph, cert: SymmetryCertificate, root: int,
                           kind: str) -> tuple[int, ...]:
    axis = [v for v in cert.axis_vertices if v != root]
    if kind == "exit-side":
        out = []
        for v in axis:
            on_axis_edge = any(
                g.edges[e].other(v) in cert.axis_vertices
                and g.vertices[g.edges[e].other(v)].pos[1] == cert.axis_y
                for e in g.adj[v])
            if not on_axis_edge:
                out.append(v)
        return tuple(out)
    return tuple(axis)


def independence_report(g: PlanarGraph, cert: SymmetryCertificate, root: int,
                        kind: str = "exit-side", samples: int = 0,
                        seed: int = 0, significance: float = 1e-6) -> IndependenceReport:
    """Joint distribution of the per-axis-vertex exit indicators under the
    (weighted) uniform spanning tree rooted at ``root``.

    With ``samples = 0`` the distribution is computed exactly by enumeration
    and PASS means all cells carry equal weight; otherwise the tree is
    sampled and PASS means a chi-square test against the uniform law is not
    rejected at the given significance.
    """
    if root not in cert.axis_vertices:
        raise HypothesisViolated(f"root {root} is not on the axis")
    if root not in g.infinite_face_vertices():
        raise HypothesisViolated(f"root {root} is not on the infinite face")
    variables = independence_variables(g, cert, root, kind)
    n = len(variables)
    cells: dict[tuple[int, ...], Fraction] = {
        bits: Fraction(0) for bits in _all_bits(n)}
    if samples == 0:
        for tree in enumerate_spanning_trees(g, root):
            parent = tree.parent
            bits = tuple(_exit_bit(g, cert, kind, v, parent[v][1]) for v in variables)
            cells[bits] += tree.weight(g)
        values = list(cells.values())
        passed = all(v == values[0] for v in values)
        return IndependenceReport(kind, variables,
                                  tuple(sorted(cells.items())), passed)
    counts = {bits: 0 for bits in cells}
    for k in range(samples):
        tree = ust_sample(g, root, split_seed(seed, k))
        parent = tree.parent
        bits = tuple(_exit_bit(g, cert, kind, v, parent[v][1]) for v in variables)
        counts[bits] += 1
    expected = samples / 2 ** n
    stat = sum((c - expected) ** 2 / expected for c in counts.values())
    p = chi_square_sf(stat, 2 ** n - 1)
    return IndependenceReport(kind, variables,
                              tuple(sorted((b, Fraction(c)) for b, c in counts.items())),
                              p >= significance, sampled=True, samples=samples,
                              chi_square=stat, p_value=p)


def _all_bits(n: int):
    for k in range(2 ** n):
        yield tuple((k >> (n - 1 - i)) & 1 for i in range(n))
