"""Triangular Aztec regions and the justification-swapping bijection."""

import pytest

from dimerforge.aztec import (
    aztec_bijection,
    aztec_formula,
    aztec_graph,
    aztec_pair,
    lift_to_host,
    project_from_host,
    tiling_svg,
)
from dimerforge.errors import LiftFailed
from dimerforge.matchings import Matching, count_matchings, enumerate_matchings


def test_formula_values():
    assert [aztec_formula(n) for n in range(1, 6)] == [1, 4, 60, 3328, 678912]


def test_formula_rejects_bad_order():
    with pytest.raises(ValueError):
        aztec_formula(0)


def test_order_one_is_a_domino():
    inst = aztec_graph(1, "T")
    assert len(inst.cells) == 2
    assert count_matchings(inst.graph) == 1


def test_counts_match_formula_both_variants():
    for n in range(1, 5):
        t, tp = aztec_pair(n)
        assert count_matchings(t.graph) == aztec_formula(n)
        assert count_matchings(tp.graph) == aztec_formula(n)


def test_enumeration_matches_formula():
    for n in (2, 3):
        inst = aztec_graph(n, "Tp")
        assert sum(1 for _ in enumerate_matchings(inst.graph)) == aztec_formula(n)


def test_region_is_isomorphic_to_refinement_subgraph():
    for n in (2, 3, 4):
        inst = aztec_graph(n, "T")
        # vertex-by-vertex position map onto the host, edge sets must agree
        assert len(inst.region_to_host) == len(inst.graph.vertices)
        host_pairs = set()
        keep = set(inst.region_to_host.values())
        for e in inst.host.edges.values():
            if e.u in keep and e.v in keep:
                host_pairs.add(frozenset((e.u, e.v)))
        region_pairs = {
            frozenset((inst.region_to_host[e.u], inst.region_to_host[e.v]))
            for e in inst.graph.edges.values()}
        assert region_pairs == host_pairs


def test_lift_project_inverse():
    inst = aztec_graph(3, "T")
    for mu in list(enumerate_matchings(inst.graph))[:10]:
        assert project_from_host(inst, lift_to_host(inst, mu)).edges == mu.edges


def test_bijection_roundtrip():
    for n in (1, 2, 3):
        t, tp = aztec_pair(n)
        mus = list(enumerate_matchings(t.graph))
        images = [aztec_bijection(n, mu) for mu in mus]
        assert len({m.edges for m in images}) == len(images)
        assert all(m.host == tp.graph.graph_id for m in images)
        for mu, img in zip(mus, images):
            assert aztec_bijection(n, img).edges == mu.edges


def test_bijection_rejects_foreign_matching():
    with pytest.raises(LiftFailed):
        aztec_bijection(2, Matching("elsewhere", frozenset()))


def test_odd_order_forced_strip():
    inst = aztec_graph(3, "T")
    assert inst.constraint_index is not None
    assert inst.fixed_edges
    # forced edges never touch the region cells
    region_hosts = set(inst.region_to_host.values())
    for eid in inst.fixed_edges:
        e = inst.host.edges[eid]
        assert e.u not in region_hosts and e.v not in region_hosts


def test_svg_output():
    inst = aztec_graph(2, "T")
    mu = next(enumerate_matchings(inst.graph))
    text = tiling_svg(inst, mu)
    assert text.startswith("<svg") and text.count("<rect") == len(mu.edges)
