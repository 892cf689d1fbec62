"""Triangular Aztec regions: generation, the closed-form tiling count, and
the run-transport bijection between the two justifications.

Both regions of order n are realized inside one smashed refinement of a
lattice hexagon: deleting the plain marked run gives the dual graph of the
right-justified region, deleting the primed run the left-justified one.
For odd n a staircase constraint path forces a strip of dominoes and the
regions are the parts strictly above it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .bijections import (
    TransportInstance,
    forced_path_matching,
    site_path_to_refinement,
    tea_transport,
    transport_instance,
)
from .errors import LiftFailed
from .generators import hexagon_graph
from .matchings import Matching, enumerate_matchings
from .planar import Edge, PlanarGraph, Vertex


def aztec_formula(n: int) -> int:
    """Closed-form number of domino tilings of the order-n triangular
    region, evaluated exactly."""
    if n < 1:
        raise ValueError("n must be positive")
    value = Fraction(2) ** (n * (n - 1) // 2)
    for i in range(n):
        value *= Fraction(factorial(4 * i + 2), factorial(n + 2 * i + 1))
    assert value.denominator == 1 and value > 0, "tiling count must be a positive integer"
    return int(value)


@dataclass(frozen=True)
class AztecInstance:
    """One variant of the order-n region together with its embedding into
    the smashed-refinement host that the transport bijection runs on."""

    n: int
    variant: str                     # "T" (right-justified) | "Tp" (left-justified)
    transport: TransportInstance
    host: PlanarGraph                # marked-run-deleted refinement graph
    graph: PlanarGraph               # dual graph of the region's unit cells
    cells: tuple[tuple[int, int], ...]
    region_to_host: dict[int, int]   # region vertex id -> refinement vertex id
    constraint_index: int | None     # odd order: position of the staircase path
    constraint_path: tuple[int, ...] | None
    fixed_edges: frozenset[int]      # host edges forced on this side (odd order)


def _scaled(pos) -> tuple[int, int]:
    x, y = 2 * pos[0], 2 * pos[1]
    assert x.denominator == 1 and y.denominator == 1
    return (int(x), int(y))


def _staircase_sites(m: int) -> list[tuple[int, int]]:
    sites = [(0, y) for y in range(2 * m, 0, -1)]
    for k in range(1, 2 * m):
        sites.append((k, k))
        sites.append((k, k + 1))
    return sites


def _below_staircase(cell: tuple[int, int]) -> bool:
    a, b = cell
    env = 2 if a == 0 else 2 * ((a + 1) // 2)
    return b < env


def _region_graph(cells, name: str) -> tuple[PlanarGraph, dict[tuple[int, int], int]]:
    order = sorted(cells)
    vid = {c: i for i, c in enumerate(order)}
    vertices = {i: Vertex(i, (Fraction(c[0]), Fraction(c[1]))) for c, i in vid.items()}
    edges = {}
    eid = 0
    for c in order:
        for d in ((c[0] + 1, c[1]), (c[0], c[1] + 1)):
            if d in vid:
                edges[eid] = Edge(eid, vid[c], vid[d])
                eid += 1
    return PlanarGraph.build(vertices, edges, name=name), vid


def _build_side(n: int, variant: str, inst: TransportInstance,
                constraint_sites) -> AztecInstance:
    ref = inst.smashed.refinement
    primed = variant == "Tp"
    host = inst.host_prime if primed else inst.host_plain
    if n % 2 == 0:
        keep = set(host.vertices)
        fixed: frozenset[int] = frozenset()
        cpath = None
        cindex = None
    else:
        cpath = site_path_to_refinement(ref, constraint_sites)
        cindex = len(inst.plain)
        fixed = set(forced_path_matching(ref.graph, cpath, drop_start=not primed))
        on_path = set(cpath)
        below = {v for v in host.vertices
                 if v not in on_path and _below_staircase(_scaled(host.vertices[v].pos))}
        below_graph = _induced(host, below)
        below_matchings = list(enumerate_matchings(below_graph))
        if len(below_matchings) != 1:
            raise LiftFailed(
                f"strip below the staircase has {len(below_matchings)} matchings")
        fixed |= set(below_matchings[0].edges)
        keep = {v for v in host.vertices if v not in on_path and v not in below}
        fixed = frozenset(fixed)
    cells = {}
    for v in keep:
        cells[_scaled(host.vertices[v].pos)] = v
    graph, vid = _region_graph(set(cells), f"aztec-{variant}{n}")
    region_to_host = {vid[c]: cells[c] for c in cells}
    # the region dual must be the induced host subgraph, cell by cell
    induced_edges = sum(1 for e in host.edges.values()
                        if e.u in keep and e.v in keep)
    if len(graph.edges) != induced_edges:
        raise LiftFailed("region adjacency does not match the refinement subgraph")
    return AztecInstance(n, variant, inst, host, graph, tuple(sorted(cells)),
                         region_to_host, cindex, cpath, fixed)


def _induced(g: PlanarGraph, keep) -> PlanarGraph:
    from .planar import remove_vertices

    return remove_vertices(g, set(g.vertices) - set(keep))


@lru_cache(maxsize=None)
def aztec_pair(n: int) -> tuple[AztecInstance, AztecInstance]:
    """Both variants of the order-n region over a shared transport
    instance."""
    if n < 1:
        raise ValueError("n must be positive")
    m = n // 2 if n % 2 == 0 else (n + 1) // 2
    g, plain, prime = hexagon_graph(m)
    inst = transport_instance(g, plain, prime)
    sites = None
    if n % 2 == 1:
        pos_id = {(int(v.pos[0]), int(v.pos[1])): v.id for v in g.vertices.values()}
        sites = [pos_id[p] for p in _staircase_sites(m)]
    return (_build_side(n, "T", inst, sites), _build_side(n, "Tp", inst, sites))


def aztec_graph(n: int, variant: str = "T") -> AztecInstance:
    if variant not in ("T", "Tp"):
        raise ValueError("variant must be 'T' or 'Tp'")
    t, tp = aztec_pair(n)
    return t if variant == "T" else tp


def lift_to_host(instance: AztecInstance, mu: Matching) -> Matching:
    """Embed a region matching into the refinement host, adding the forced
    staircase and strip edges for odd orders."""
    if mu.host != instance.graph.graph_id:
        raise LiftFailed("matching does not belong to this region")
    edges = set(instance.fixed_edges)
    for eid in mu.edges:
        e = instance.graph.edges[eid]
        hu = instance.region_to_host[e.u]
        hv = instance.region_to_host[e.v]
        h_edge = instance.host.edge_between(hu, hv)
        if h_edge is None:
            raise LiftFailed(f"region edge {eid} has no refinement image")
        edges.add(h_edge.id)
    out = Matching(instance.host.graph_id, frozenset(edges))
    out.cover_map(instance.host)
    return out


def project_from_host(instance: AztecInstance, mu: Matching) -> Matching:
    """Inverse of :func:`lift_to_host`: keep the edges inside the region."""
    host_to_region = {h: r for r, h in instance.region_to_host.items()}
    edges = set()
    leftovers = set(mu.edges)
    for eid in mu.edges:
        e = instance.host.edges[eid]
        if e.u in host_to_region and e.v in host_to_region:
            r = instance.graph.edge_between(host_to_region[e.u], host_to_region[e.v])
            edges.add(r.id)
            leftovers.discard(eid)
    if leftovers != set(instance.fixed_edges):
        raise LiftFailed("host matching does not respect the forced edges")
    out = Matching(instance.graph.graph_id, frozenset(edges))
    out.cover_map(instance.graph)
    return out


def aztec_bijection(n: int, mu: Matching) -> Matching:
    """Carry a tiling of one variant to the other via run transport (with
    the staircase path constrained for odd orders)."""
    t, tp = aztec_pair(n)
    if mu.host == t.graph.graph_id:
        src, dst = t, tp
    elif mu.host == tp.graph.graph_id:
        src, dst = tp, t
    else:
        raise LiftFailed("matching belongs to neither region variant")
    lifted = lift_to_host(src, mu)
    if n % 2 == 1:
        paths = {src.constraint_index: src.constraint_path}
        moved = tea_transport(src.transport, lifted, {src.constraint_index}, paths)
    else:
        moved = tea_transport(src.transport, lifted)
    return project_from_host(dst, moved)


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def tiling_svg(instance: AztecInstance, mu: Matching, scale: int = 20) -> str:
    """Dominoes of a tiling as an SVG drawing (purely cosmetic)."""
    if mu.host != instance.graph.graph_id:
        raise LiftFailed("matching does not belong to this region")
    xs = [c[0] for c in instance.cells]
    ys = [c[1] for c in instance.cells]
    x0, y1 = min(xs), max(ys)
    width = (max(xs) - x0 + 1) * scale
    height = (y1 - min(ys) + 1) * scale
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">']
    for eid in sorted(mu.edges):
        e = instance.graph.edges[eid]
        ax, ay = instance.graph.vertices[e.u].pos
        bx, by = instance.graph.vertices[e.v].pos
        x = (min(ax, bx) - x0) * scale
        y = (y1 - max(ay, by)) * scale
        w = (abs(bx - ax) + 1) * scale
        h = (abs(by - ay) + 1) * scale
        color = "#d8894f" if ax != bx else "#5f8dd3"
        parts.append(
            f'<rect x="{x}" y="{y}" width="{w}" height="{h}" fill="{color}" '
            f'stroke="black" stroke-width="1.5"/>')
    parts.append("</svg>")
    return "\n".join(parts)
