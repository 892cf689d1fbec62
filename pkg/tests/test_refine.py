"""Dual refinement, leaf augmentation, plus/minus, symmetrize, smash,
trimmed squares."""

from fractions import Fraction

import pytest

from dimerforge import errors
from dimerforge.generators import grid_graph, path_graph, random_plane_graph
from dimerforge.matchings import count_matchings, enumerate_matchings, squarish
from dimerforge.planar import PlanarGraph, Vertex, check_reflection_symmetry
from dimerforge.refine import (
    dual_refinement,
    augment_with_leaves,
    build_plus_minus,
    list_peaks,
    section_instance,
    smash_in,
    symmetrize,
    trimmed_square,
)


def single_vertex():
    return PlanarGraph.build({0: Vertex(0, (Fraction(0), Fraction(0)))}, {})


def test_refinement_of_path():
    ref = dual_refinement(path_graph(3))
    assert len(ref.graph.vertices) == 5
    assert len(ref.graph.edges) == 4


def test_refinement_of_square():
    ref = dual_refinement(grid_graph(2, 2))
    assert len(ref.graph.vertices) == 9
    assert len(ref.graph.edges) == 12
    # midpoints join their endpoints and the single bounded face center
    center = ref.center_of_face[[f.index for f in ref.source.trace_faces().bounded][0]]
    assert ref.graph.degree(center) == 4


def test_refinement_vertex_count_is_odd():
    for seed in range(10):
        g = random_plane_graph(seed)
        assert len(dual_refinement(g).graph.vertices) % 2 == 1


def test_refinement_rejects_pendant_in_bounded_face():
    # a square with a pendant vertex hanging inside the bounded face
    text_points = {(0, 0), (3, 0), (3, 3), (0, 3), (1, 1)}
    vertices = {i: Vertex(i, (Fraction(x), Fraction(y)))
                for i, (x, y) in enumerate(sorted(text_points))}
    by_pos = {tuple(v.pos): i for i, v in vertices.items()}
    from dimerforge.planar import Edge

    cyc = [(0, 0), (3, 0), (3, 3), (0, 3)]
    edges = {}
    for k in range(4):
        edges[k] = Edge(k, by_pos[cyc[k]], by_pos[cyc[(k + 1) % 4]])
    edges[4] = Edge(4, by_pos[(0, 0)], by_pos[(1, 1)])
    g = PlanarGraph.build(vertices, edges)
    with pytest.raises(errors.PreconditionViolated):
        dual_refinement(g)


def test_augment_square():
    g, mb = augment_with_leaves(grid_graph(2, 2), [0, 1, 3])
    assert len(g.vertices) == 6
    assert mb.leaves is not None
    assert len(mb.boundary_edges) == 4
    assert g.degree(mb.leaves[0]) == 1
    assert mb.leaves[0] in g.infinite_face_vertices()


def test_augment_single_vertex():
    g, mb = augment_with_leaves(single_vertex(), [0])
    assert len(g.vertices) == 3
    assert len(g.edges) == 2


def test_augment_degree_violation():
    g = grid_graph(3, 3)
    bottom = sorted(g.vertices, key=lambda v: (g.vertices[v].pos[1], g.vertices[v].pos[0]))[:3]
    with pytest.raises(errors.BadDegree):
        augment_with_leaves(g, bottom)


def test_plus_minus_minimal_path():
    inst = section_instance(single_vertex(), [0])
    assert len(inst.plus.vertices) == 2
    assert len(inst.plus.edges) == 1
    assert count_matchings(inst.plus) == 1
    assert count_matchings(inst.minus) == 1


def test_plus_minus_square_instance():
    inst = section_instance(grid_graph(2, 2), [0, 1, 3])
    assert len(inst.refinement.graph.vertices) == 13
    assert len(inst.plus.vertices) == 8
    assert len(inst.minus.vertices) == 8
    assert count_matchings(inst.plus) == 3
    assert count_matchings(inst.minus) == 3
    plus, minus = build_plus_minus(inst.refinement, inst.boundary)
    assert plus.graph_id == inst.plus.graph_id
    assert minus.graph_id == inst.minus.graph_id


def test_plus_minus_even_vertex_counts():
    for seed in range(8):
        from dimerforge.generators import random_section2

        inst = random_section2(seed)
        assert len(inst.plus.vertices) % 2 == 0
        assert len(inst.minus.vertices) % 2 == 0


def test_symmetrize_minimal_is_four_cycle():
    inst = section_instance(single_vertex(), [0])
    bar = symmetrize(inst.refinement, inst.boundary)
    assert len(bar.vertices) == 4
    assert len(bar.edges) == 4
    assert count_matchings(bar) == 2


def test_symmetrize_square_instance():
    from dimerforge.generators import fan_square

    inst = section_instance(fan_square(), [0, 1, 3])
    assert count_matchings(inst.plus) == 3
    bar = symmetrize(inst.refinement, inst.boundary)
    assert count_matchings(bar) == 36
    assert squarish(36)
    cert = check_reflection_symmetry(bar, Fraction(0))
    assert len(cert.axis_vertices) == 2 * inst.boundary.n


def test_symmetrize_requires_normal_form():
    # the same abstract instance with an L-shaped marked path cannot be
    # mirrored without redrawing; the caller must normalize first
    inst = section_instance(grid_graph(2, 2), [0, 1, 3])
    with pytest.raises(errors.ReembeddingFailed):
        symmetrize(inst.refinement, inst.boundary)


def test_symmetrize_is_bipartite_and_balanced():
    from dimerforge.generators import fan_square

    inst = section_instance(fan_square(), [0, 1, 3])
    bar = symmetrize(inst.refinement, inst.boundary)
    color = {}
    stack = [(next(iter(bar.vertices)), 0)]
    while stack:
        v, c = stack.pop()
        if v in color:
            assert color[v] == c
            continue
        color[v] = c
        for w in bar.neighbors(v):
            stack.append((w, 1 - c))
    counts = [sum(1 for c in color.values() if c == k) for k in (0, 1)]
    assert counts[0] == counts[1]


def test_smash_square_corner():
    ref = dual_refinement(grid_graph(2, 2))
    smashed = smash_in(ref, [0])
    assert len(smashed.graph.vertices) == 6
    assert smashed.face_of[0] in ref.graph.vertices


def test_smash_empty_is_identity():
    ref = dual_refinement(grid_graph(2, 2))
    smashed = smash_in(ref, [])
    assert len(smashed.graph.vertices) == 9


def test_smash_shared_face_rejected():
    ref = dual_refinement(grid_graph(2, 2))
    with pytest.raises(errors.SharedFace):
        smash_in(ref, [0, 3])


def test_smash_rejects_bad_targets():
    ref = dual_refinement(grid_graph(3, 3))
    middle = 4  # degree-4 interior vertex
    with pytest.raises(errors.NotDegreeTwo):
        smash_in(ref, [middle])


def test_trimmed_square_no_removals():
    assert count_matchings(trimmed_square(1)) == 2
    assert count_matchings(trimmed_square(2)) == 36


def test_trimmed_square_topmost_removal():
    g = trimmed_square(2, [(0, 3)])
    assert len(g.vertices) == 8
    verdict = squarish(int(count_matchings(g)))
    assert verdict


def test_trimmed_square_is_symmetric():
    g = trimmed_square(2, [(0, 3)])
    # mirror across the diagonal is the map (x,y) -> (x,-y) after rotation
    cert = check_reflection_symmetry(g, Fraction(0))
    assert cert.vertex_map


def test_trimmed_square_errors():
    with pytest.raises(errors.BelowDiagonal):
        trimmed_square(2, [(3, 0)])
    with pytest.raises(errors.NotAPeak):
        trimmed_square(2, [(0, 2)])  # degree three, not a corner
    with pytest.raises(errors.NotAPeak):
        trimmed_square(1, [(0, 1)])  # four-cycle touches the diagonal


def test_list_peaks_initial():
    assert list_peaks(2) == [(0, 3)]
    assert list_peaks(1) == []
