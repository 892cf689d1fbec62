"""Standard graph builders and seeded random instance generators.

Every generator is deterministic in its seed and only emits instances that
pass the validators of the constructions they feed (retrying with derived
sub-seeds up to a fixed budget).
"""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import DimerforgeError, GenerationExhausted
from .planar import Edge, PlanarGraph, Vertex, check_reflection_symmetry
from .refine import list_peaks, section_instance, trimmed_square

WEIGHT_POOL = [Fraction(1), Fraction(1), Fraction(1), Fraction(2),
               Fraction(1, 2), Fraction(3), Fraction(1, 3)]


# ---------------------------------------------------------------------------
# Deterministic builders
# ---------------------------------------------------------------------------


def build_from_points(points, edges_by_points, weights=None, name=""):
    pts = sorted(points)
    vid = {p: i for i, p in enumerate(pts)}
    vertices = {i: Vertex(i, (Fraction(p[0]), Fraction(p[1]))) for p, i in vid.items()}
    edges = {}
    for eid, (a, b) in enumerate(sorted(edges_by_points)):
        w = Fraction(1) if weights is None else weights.get((a, b), Fraction(1))
        edges[eid] = Edge(eid, vid[a], vid[b], w)
    return PlanarGraph.build(vertices, edges, name=name), vid


def grid_graph(cols: int, rows: int, weights=None) -> PlanarGraph:
    """Grid graph on cols x rows lattice points with unit spacing."""
    points = [(x, y) for x in range(cols) for y in range(rows)]
    edges = []
    for x, y in points:
        if x + 1 < cols:
            edges.append(((x, y), (x + 1, y)))
        if y + 1 < rows:
            edges.append(((x, y), (x, y + 1)))
    g, _ = build_from_points(points, edges, weights, name=f"grid{cols}x{rows}")
    return g


def square_grid(k: int) -> PlanarGraph:
    return grid_graph(k, k)


def diamond_graph() -> PlanarGraph:
    """Four-cycle drawn as a diamond, symmetric about the horizontal axis."""
    pts = [(-1, 0), (1, 0), (0, 1), (0, -1)]
    edges = [((-1, 0), (0, 1)), ((0, 1), (1, 0)), ((-1, 0), (0, -1)), ((0, -1), (1, 0))]
    g, _ = build_from_points(pts, edges, name="diamond")
    return g


def diagonal_grid(k: int) -> PlanarGraph:
    """k x k grid rotated so its main diagonal is the horizontal axis (the
    lattice map (x,y) -> (x+y, y-x) keeps all coordinates integral)."""
    points = [(x + y, y - x) for x in range(k) for y in range(k)]
    edges = []
    for x in range(k):
        for y in range(k):
            if x + 1 < k:
                edges.append(tuple(sorted([(x + y, y - x), (x + 1 + y, y - x - 1)])))
            if y + 1 < k:
                edges.append(tuple(sorted([(x + y, y - x), (x + y + 1, y - x + 1)])))
    g, _ = build_from_points(points, set(edges), name=f"diag{k}")
    return g


def ladder_graph(length: int) -> PlanarGraph:
    return grid_graph(length, 2)


def hexagon_graph(m: int):
    """The lattice hexagon bounded by x=0, x=2m-1, y=x, y=x+2m+1, y=-x+4m
    and y=3m-1, with its two staircase runs of marked boundary vertices.

    Returns (graph, plain_run, prime_run) where the runs are the 2m-1 marked
    vertex ids on each side, ordered from the top.
    """
    if m < 1:
        raise ValueError("m must be positive")
    points = []
    for x in range(0, 2 * m):
        y_lo = x
        y_hi = min(3 * m - 1, x + 2 * m + 1, -x + 4 * m)
        for y in range(y_lo, y_hi + 1):
            points.append((x, y))
    pset = set(points)
    edges = []
    for (x, y) in points:
        for q in ((x + 1, y), (x, y + 1)):
            if q in pset:
                edges.append(((x, y), q))
    g, vid = build_from_points(points, edges, name=f"hexagon{m}")
    plain, prime = [], []
    for i in range(1, 2 * m):
        if i % 2 == 1:
            k = (i + 1) // 2
            plain.append(vid[(m - k, 3 * m - k)])
            prime.append(vid[(m - 1 + k, 3 * m - k)])
        else:
            k = i // 2
            plain.append(vid[(m - 1 - k, 3 * m - k)])
            prime.append(vid[(m + k, 3 * m - k)])
    return g, tuple(plain), tuple(prime)


def path_graph(k: int) -> PlanarGraph:
    pts = [(i, 0) for i in range(k)]
    edges = [((i, 0), (i + 1, 0)) for i in range(k - 1)]
    g, _ = build_from_points(pts, edges, name=f"path{k}")
    return g


def fan_square() -> PlanarGraph:
    """The four-cycle drawn in marked-path normal form: three vertices on a
    horizontal line and the fourth above, so the bottom path can be marked
    and the graph symmetrized."""
    pts = [(0, 0), (1, 0), (2, 0), (1, 1)]
    edges = [((0, 0), (1, 0)), ((1, 0), (2, 0)), ((2, 0), (1, 1)), ((0, 0), (1, 1))]
    g, _ = build_from_points(pts, edges, name="fan-square")
    return g


# ---------------------------------------------------------------------------
# Random instances
# ---------------------------------------------------------------------------


def _sub_seed(seed: int, k: int) -> int:
    from .trees import split_seed

    return split_seed(seed, k)


def _random_weights(rng: random.Random, pairs) -> dict:
    return {p: rng.choice(WEIGHT_POOL) for p in pairs}


def random_section2(seed: int, max_refinement_vertices: int = 30):
    """A random marked-boundary instance: a grid strip whose even-indexed
    bottom vertices have no upward edges, randomly peeled from above."""
    edge_budget = (max_refinement_vertices - 5) // 2
    for attempt in range(200):
        rng = random.Random(_sub_seed(seed, attempt))
        n = rng.choice([1, 2, 2, 3, 3])
        cols = 2 * n - 1
        h = rng.choice([1, 2, 2])
        points = {(x, y) for x in range(cols) for y in range(h + 1)}

        def present_edges():
            out = set()
            for (x, y) in points:
                for q in ((x + 1, y), (x, y + 1)):
                    if q in points:
                        if y == 0 and q == (x, 1) and x % 2 == 1:
                            continue  # even-indexed path vertices stay degree 2
                        out.add(((x, y), q))
            return out

        def connected(pts, eds):
            if not pts:
                return False
            adj = {p: [] for p in pts}
            for a, b in eds:
                adj[a].append(b)
                adj[b].append(a)
            seen = {next(iter(sorted(pts)))}
            stack = list(seen)
            while stack:
                p = stack.pop()
                for q in adj[p]:
                    if q not in seen:
                        seen.add(q)
                        stack.append(q)
            return len(seen) == len(pts)

        edges = present_edges()
        if not connected(points, edges):
            continue
        # random peeling, then keep peeling until the refinement fits the
        # vertex budget
        wanted = rng.randint(0, max(0, (len(points) - cols) // 2))
        while wanted > 0 or len(edges) > edge_budget:
            candidates = []
            for p in sorted(points):
                if p[1] == 0:
                    continue
                rest = points - {p}
                eds = {e for e in edges if p not in e}
                if rest and connected(rest, eds):
                    candidates.append(p)
            if not candidates:
                break
            p = rng.choice(candidates)
            points -= {p}
            edges = {e for e in edges if p not in e}
            wanted -= 1
        if len(edges) > edge_budget:
            continue
        try:
            g, vid = build_from_points(points, edges, name=f"section2-{seed}")
            path = [vid[(x, 0)] for x in range(cols)]
            inst = section_instance(g, path)
        except DimerforgeError:
            continue
        if len(inst.refinement.graph.vertices) <= max_refinement_vertices:
            return inst
    raise GenerationExhausted(f"no valid marked-boundary instance for seed {seed}")


def random_symmetric(seed: int, need_matchings: bool = False,
                     max_vertices: int = 12):
    """A random horizontally symmetric graph with exact rational weights
    constant on reflection orbits; retries until connected (and, optionally,
    until perfect matchings exist)."""
    from .matchings import count_matchings

    for attempt in range(300):
        rng = random.Random(_sub_seed(seed, attempt))
        w = 3
        h = 1
        points = {(x, y) for x in range(w + 1) for y in range(-h, h + 1)}
        for _ in range(rng.randint(0, 4)):
            candidates = []
            for p in sorted(points):
                if p[1] <= 0:
                    continue
                pm = (p[0], -p[1])
                rest = points - {p, pm}
                if rest and _points_connected(rest):
                    candidates.append(p)
            if not candidates:
                break
            p = rng.choice(candidates)
            points -= {p, (p[0], -p[1])}
        if len(points) > max_vertices or len(points) < 4:
            continue
        edge_pairs = set()
        for (x, y) in sorted(points):
            for q in ((x + 1, y), (x, y + 1)):
                if q in points:
                    edge_pairs.add(((x, y), q))
        weights = {}
        for a, b in sorted(edge_pairs):
            am, bm = (a[0], -a[1]), (b[0], -b[1])
            mirror = tuple(sorted((am, bm)))
            if mirror in weights:
                weights[(a, b)] = weights[mirror]
            else:
                weights[(a, b)] = rng.choice(WEIGHT_POOL)
        try:
            g, vid = build_from_points(points, edge_pairs, weights,
                                       name=f"symmetric-{seed}")
            cert = check_reflection_symmetry(g, Fraction(0))
        except DimerforgeError:
            continue
        if need_matchings and count_matchings(g) == 0:
            continue
        return g, cert
    raise GenerationExhausted(f"no valid symmetric instance for seed {seed}")


def random_plane_graph(seed: int, max_vertices: int = 12,
                       weighted: bool = False) -> PlanarGraph:
    """A random connected grid subgraph with at most ``max_vertices``
    vertices (and optional random rational weights)."""
    for attempt in range(200):
        rng = random.Random(_sub_seed(seed, attempt))
        cols = rng.choice([2, 3, 4])
        rows = rng.choice([2, 3])
        points = {(x, y) for x in range(cols) for y in range(rows)}
        for _ in range(rng.randint(0, len(points) // 2)):
            candidates = [p for p in sorted(points)
                          if len(points) > 3 and _points_connected(points - {p})]
            if not candidates:
                break
            points -= {rng.choice(candidates)}
        if len(points) > max_vertices or len(points) < 2:
            continue
        edge_pairs = set()
        for (x, y) in sorted(points):
            for q in ((x + 1, y), (x, y + 1)):
                if q in points:
                    edge_pairs.add(((x, y), q))
        weights = _random_weights(rng, sorted(edge_pairs)) if weighted else None
        try:
            g, _ = build_from_points(points, edge_pairs, weights,
                                     name=f"plane-{seed}")
        except DimerforgeError:
            continue
        return g
    raise GenerationExhausted(f"no valid plane graph for seed {seed}")


def _points_connected(points) -> bool:
    points = set(points)
    start = next(iter(sorted(points)))
    seen = {start}
    stack = [start]
    while stack:
        x, y = stack.pop()
        for q in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if q in points and q not in seen:
                seen.add(q)
                stack.append(q)
    return len(seen) == len(points)


def random_trimmed(seed: int, n: int | None = None, require_connected: bool = False):
    """A random trimmed-square instance: seeded peak removals, mirrored.

    Mirrored removals may disconnect the result (which is fine for counting
    but not for the graph-file format); ``require_connected`` skips peaks
    that would do so.
    """
    rng = random.Random(seed)
    if n is None:
        n = rng.choice([1, 2, 2, 3])
    removals: list[tuple[int, int]] = []
    for _ in range(rng.randint(0, 3 * n)):
        peaks = list_peaks(n, removals)
        rng.shuffle(peaks)
        chosen = None
        for peak in peaks:
            if require_connected and \
                    not trimmed_square(n, removals + [peak]).is_connected():
                continue
            chosen = peak
            break
        if chosen is None:
            break
        removals.append(chosen)
    return trimmed_square(n, removals), n, removals


def random_transport(seed: int, require_plain_path: bool = True):
    """A random marked-run transport instance from a seeded catalog of
    shapes (corner-marked grids, ladders, lattice hexagons) with random
    rational edge weights."""
    from .bijections import (
        face_path_to_refinement,
        site_path_to_refinement,
        transport_instance,
    )

    for attempt in range(100):
        rng = random.Random(_sub_seed(seed, attempt))
        shape = rng.choice(["grid0", "hex1", "ladder", "ladder", "hex2"])
        try:
            if shape == "grid0":
                cols, rows = rng.choice([(2, 2), (3, 2), (3, 3)])
                g = grid_graph(cols, rows, None)
                weights = {e.id: rng.choice(WEIGHT_POOL) for e in g.edges.values()}
                g = _reweight(g, weights)
                boundary = _ccw_vertices(g)
                i = rng.randrange(len(boundary))
                j = (i + rng.randrange(1, len(boundary))) % len(boundary)
                if boundary[i] == boundary[j]:
                    continue
                inst = transport_instance(g, [boundary[i]], [boundary[j]],
                                          require_plain_path=require_plain_path)
                paths = {}
            elif shape == "ladder":
                length = rng.choice([4, 5, 6])
                g = ladder_graph(length)
                weights = {e.id: rng.choice(WEIGHT_POOL) for e in g.edges.values()}
                g = _reweight(g, weights)
                vid = {(int(v.pos[0]), int(v.pos[1])): v.id for v in g.vertices.values()}
                plain = [vid[(1, 1)], vid[(0, 1)], vid[(0, 0)]]
                prime = [vid[(length - 1, 1)], vid[(length - 1, 0)], vid[(length - 2, 0)]]
                inst = transport_instance(g, plain, prime,
                                          require_plain_path=require_plain_path)
                ref = inst.smashed.refinement
                top = site_path_to_refinement(ref, [vid[(x, 1)] for x in range(1, length)])
                bottom = site_path_to_refinement(ref, [vid[(x, 0)] for x in range(0, length - 1)])
                cells = _cell_faces(g, [(x, 0) for x in range(length - 1)])
                middle = face_path_to_refinement(ref, cells)
                paths = {1: top, 2: middle, 3: bottom}
            else:
                m = 1 if shape == "hex1" else 2
                g, plain, prime = hexagon_graph(m)
                weights = {e.id: rng.choice(WEIGHT_POOL) for e in g.edges.values()}
                g = _reweight(g, weights)
                inst = transport_instance(g, plain, prime,
                                          require_plain_path=require_plain_path)
                paths = {}
                if m == 2:
                    ref = inst.smashed.refinement
                    vpos = {v.id: (int(v.pos[0]), int(v.pos[1]))
                            for v in g.vertices.values()}
                    vid = {p: i for i, p in vpos.items()}
                    paths = {
                        1: site_path_to_refinement(ref, [vid[(1, 5)], vid[(2, 5)]]),
                        2: face_path_to_refinement(
                            ref, _cell_faces(g, [(0, 4), (1, 4), (2, 4)])),
                        3: site_path_to_refinement(
                            ref, [vid[(0, 4)], vid[(1, 4)], vid[(2, 4)], vid[(3, 4)]]),
                    }
            return inst, paths
        except DimerforgeError:
            continue
    raise GenerationExhausted(f"no valid transport instance for seed {seed}")


def random_instance(kind: str, seed: int, **bounds):
    """Dispatch to the per-construction generators; every output passes the
    validators of the construction it feeds."""
    if kind == "section2":
        return random_section2(seed, **bounds)
    if kind == "symmetric":
        return random_symmetric(seed, **bounds)
    if kind == "tea":
        return random_transport(seed, require_plain_path=True)
    if kind == "tec":
        return random_transport(seed, require_plain_path=False)
    if kind == "trimmed":
        return random_trimmed(seed, **bounds)
    raise ValueError(f"unknown instance kind {kind!r}")


def _reweight(g: PlanarGraph, weights: dict[int, Fraction]) -> PlanarGraph:
    edges = {eid: Edge(eid, e.u, e.v, weights.get(eid, e.weight))
             for eid, e in g.edges.items()}
    return PlanarGraph.build(dict(g.vertices), edges, name=g.name)


def _ccw_vertices(g: PlanarGraph) -> list[int]:
    cyc = g.trace_faces().infinite_face.cycle
    seen = []
    for v, _e in reversed(cyc):
        if v not in seen:
            seen.append(v)
    return seen


def _cell_faces(g: PlanarGraph, lower_left_corners) -> list[int]:
    """Face indices of the unit cells with the given lower-left corners."""
    faces = g.trace_faces()
    out = []
    for (x, y) in lower_left_corners:
        want = {(Fraction(x), Fraction(y)), (Fraction(x + 1), Fraction(y)),
                (Fraction(x), Fraction(y + 1)), (Fraction(x + 1), Fraction(y + 1))}
        for f in faces.bounded:
            pts = {g.vertices[v].pos for v in f.vertex_seq}
            if pts == want:
                out.append(f.index)
                break
        else:
            raise DimerforgeError(f"no unit cell at {(x, y)}")
    return out
