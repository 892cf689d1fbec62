"""Exact enumeration and counting of perfect matchings.

Two independent routes are kept deliberately separate: a lexicographic
enumerator (the oracle every bijection test leans on) and a frontier
dynamic program for counts that enumeration cannot reach.  The closed-form
grid evaluator runs in directed-rounding interval arithmetic and insists on
isolating a unique integer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import mpmath

from .errors import PrecisionExhausted
from .planar import PlanarGraph

WeightSum = Fraction


@dataclass(frozen=True)
class Matching:
    """A perfect matching, stored as the set of chosen edge ids."""

    host: str
    edges: frozenset[int]

    def sorted_edges(self) -> tuple[int, ...]:
        return tuple(sorted(self.edges))

    def cover_map(self, g: PlanarGraph) -> dict[int, int]:
        """vertex -> matched edge id; validates the matching on the way."""
        cover: dict[int, int] = {}
        for eid in self.edges:
            e = g.edges[eid]
            for w in (e.u, e.v):
                if w in cover:
                    raise ValueError(f"vertex {w} covered twice")
                cover[w] = eid
        if len(cover) != len(g.vertices):
            raise ValueError("matching does not cover every vertex")
        return cover

    def weight(self, g: PlanarGraph) -> Fraction:
        w = Fraction(1)
        for eid in self.edges:
            w *= g.edges[eid].weight
        return w


def is_perfect_matching(g: PlanarGraph, edge_ids) -> bool:
    seen: set[int] = set()
    for eid in edge_ids:
        e = g.edges[eid]
        if e.u in seen or e.v in seen:
            return False
        seen.update((e.u, e.v))
    return len(seen) == len(g.vertices)


# ---------------------------------------------------------------------------
# Enumeration (deterministic order: lexicographic by sorted edge ids)
# ---------------------------------------------------------------------------


def enumerate_matchings(g: PlanarGraph) -> Iterator[Matching]:
    """Yield every perfect matching exactly once, ordered lexicographically
    by the sorted tuple of edge ids.  This order is part of the contract."""
    if len(g.vertices) % 2 == 1:
        return
    host = g.graph_id
    edge_order = sorted(g.edges)

    def rec(uncovered: set[int], min_eid: int, chosen: list[int]):
        if not uncovered:
            yield Matching(host, frozenset(chosen))
            return
        # the matching's smallest remaining edge id cannot exceed the
        # smallest "last available edge" over uncovered vertices
        cap = None
        for v in uncovered:
            best = -1
            for eid in g.adj[v]:
                if eid >= min_eid and g.edges[eid].other(v) in uncovered:
                    best = max(best, eid)
            if best < 0:
                return  # some vertex can never be covered
            cap = best if cap is None else min(cap, best)
        for eid in edge_order:
            if eid < min_eid:
                continue
            if eid > cap:
                break
            e = g.edges[eid]
            if e.u in uncovered and e.v in uncovered:
                uncovered.difference_update((e.u, e.v))
                chosen.append(eid)
                yield from rec(uncovered, eid + 1, chosen)
                chosen.pop()
                uncovered.update((e.u, e.v))

    yield from rec(set(g.vertices), 0, [])


# ---------------------------------------------------------------------------
# Counting (frontier dynamic program)
# ---------------------------------------------------------------------------


def _elimination_order(g: PlanarGraph) -> list[int]:
    """BFS order from a minimum-degree vertex; keeps the frontier narrow on
    the grid-like graphs this engine works with."""
    order: list[int] = []
    seen: set[int] = set()
    remaining = set(g.vertices)
    while remaining:
        start = min(remaining, key=lambda v: (g.degree(v), v))
        queue = [start]
        seen.add(start)
        while queue:
            v = queue.pop(0)
            order.append(v)
            remaining.discard(v)
            for w in sorted(g.neighbors(v)):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return order


def count_matchings(g: PlanarGraph) -> WeightSum:
    """Exact matching generating function: sum over perfect matchings of the
    product of edge weights (the count when all weights are 1)."""
    n = len(g.vertices)
    if n == 0:
        return Fraction(1)
    if n % 2 == 1:
        return Fraction(0)
    order = _elimination_order(g)
    pos = {v: i for i, v in enumerate(order)}
    last_use = {v: max((pos[w] for w in g.neighbors(v)), default=-1) for v in g.vertices}
    weight_between: dict[int, dict[int, Fraction]] = {v: {} for v in g.vertices}
    for e in g.edges.values():
        weight_between[e.u][e.v] = e.weight
        weight_between[e.v][e.u] = e.weight
    states: dict[frozenset[int], Fraction] = {frozenset(): Fraction(1)}
    for i, v in enumerate(order):
        nxt: dict[frozenset[int], Fraction] = {}
        nbrs = weight_between[v]
        for pending, acc in states.items():
            # pending vertices that can only be matched to v must take v now
            must = [u for u in pending if last_use[u] <= i]
            if len(must) > 1:
                continue
            if must:
                u = must[0]
                if u not in nbrs:
                    continue
                key = pending - {u}
                w = acc * nbrs[u]
                nxt[key] = nxt.get(key, Fraction(0)) + w
                continue
            if last_use[v] > i:
                key = pending | {v}
                nxt[key] = nxt.get(key, Fraction(0)) + acc
            for u in pending:
                if u in nbrs:
                    key = pending - {u}
                    w = acc * nbrs[u]
                    nxt[key] = nxt.get(key, Fraction(0)) + w
        states = nxt
        if not states:
            return Fraction(0)
    return states.get(frozenset(), Fraction(0))


# ---------------------------------------------------------------------------
# Closed-form grid count
# ---------------------------------------------------------------------------


def kasteleyn_grid_count(m: int, n: int, max_precision: int = 1 << 13) -> int:
    """Number of perfect matchings of the 2m x 2n grid graph, evaluated from
    the cosine double product with adaptive-precision interval arithmetic.

    The interval must contain exactly one integer; the precision is doubled
    until it does.
    """
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    prec = 64
    while prec <= max_precision:
        iv = mpmath.iv
        old = iv.prec
        try:
            iv.prec = prec
            total = iv.mpf(1)
            pi = iv.pi
            for j in range(1, m + 1):
                cj = iv.cos(pi * j / (2 * m + 1)) ** 2
                for k in range(1, n + 1):
                    ck = iv.cos(pi * k / (2 * n + 1)) ** 2
                    total *= cj + ck
            total *= iv.mpf(2) ** (2 * m * n)
            lo = mpmath.mpf(total.a)
            hi = mpmath.mpf(total.b)
            lo_int = int(mpmath.ceil(lo))
            hi_int = int(mpmath.floor(hi))
        finally:
            iv.prec = old
        if lo_int == hi_int:
            return lo_int
        prec *= 2
    raise PrecisionExhausted(
        f"no unique integer for grid ({2*m}x{2*n}) below {max_precision} bits")


# ---------------------------------------------------------------------------
# Squarishness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SquarishVerdict:
    kind: str  # "square" | "twice-square" | "no"
    root: int | None = None

    def __bool__(self) -> bool:
        return self.kind != "no"

    def __str__(self):
        if self.kind == "square":
            return f"{self.root}^2"
        if self.kind == "twice-square":
            return f"2*{self.root}^2"
        return "not squarish"


def squarish(value: int) -> SquarishVerdict:
    """Classify an integer as a perfect square, twice a perfect square, or
    neither, with the square root as witness."""
    if value < 0:
        return SquarishVerdict("no")
    s = math.isqrt(value)
    if s * s == value:
        return SquarishVerdict("square", s)
    if value % 2 == 0:
        s = math.isqrt(value // 2)
        if 2 * s * s == value:
            return SquarishVerdict("twice-square", s)
    return SquarishVerdict("no")
