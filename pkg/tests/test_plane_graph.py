import itertools
import random

import networkx as nx
import pytest

from z5color.families import BrokenWheel, Wheel, build, built_family
from z5color.plane_graph import (
    PlaneGraphError,
    PlaneNearTriangulation,
    blocks,
    chords,
    enclosed_region,
    faces_of,
    separating_cycles,
    split_along,
    validate,
)
from z5color.propcheck import random_triangulation


def nx_face_count(graph):
    """Independent face-count oracle via networkx's planar embedding."""
    g = nx.Graph(list(graph.edges()))
    emb = nx.PlanarEmbedding()
    emb.set_data({v: list(reversed(graph.rotation[v])) for v in range(graph.vertex_count)})
    seen = set()
    count = 0
    for u in range(graph.vertex_count):
        for v in graph.rotation[u]:
            if (u, v) not in seen:
                emb.traverse_face(u, v, mark_half_edges=seen)
                count += 1
    assert g.number_of_edges() == graph.edge_count()
    return count


def octahedron():
    g = nx.Graph()
    for a, b in itertools.combinations(range(6), 2):
        if (a, b) not in [(0, 3), (1, 4), (2, 5)]:
            g.add_edge(a, b)
    ok, emb = nx.check_planarity(g)
    assert ok
    rot = [list(emb.neighbors_cw_order(v)) for v in range(6)]
    from z5color.plane_graph import trace_faces

    outer = [d[0] for d in trace_faces(rot)[0]]
    return PlaneNearTriangulation.from_lists(rot, outer)


def stacked_k4():
    # K4 plus a vertex stacked into the inner face on outer edge 0-1.
    g, _ = build(Wheel(3))
    rot = [list(r) for r in g.rotation] + [[1, 3, 0]]

    def wedge(x, p, q, w):
        i = rot[x].index(p)
        assert rot[x][(i + 1) % len(rot[x])] == q
        rot[x].insert(i + 1, w)

    wedge(1, 3, 0, 4)
    wedge(0, 1, 3, 4)
    wedge(3, 0, 1, 4)
    return PlaneNearTriangulation.from_lists(rot, [0, 1, 2])


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------


def test_validate_triangle(k3):
    assert validate(k3[0]).ok


def test_validate_square_without_chord_reports_big_face():
    square = PlaneNearTriangulation.from_lists(
        [[1, 3], [2, 0], [3, 1], [0, 2]], [0, 1, 2, 3]
    )
    report = validate(square)
    assert not report.ok
    assert any("inner face of length 4" in v for v in report.violations)


def test_validate_k4_with_triangle_outer_face_count_oracle():
    g, _ = build(Wheel(3))
    assert validate(g).ok
    assert len(faces_of(g)) == nx_face_count(g) == 4


def test_validate_rejects_degenerate_and_malformed():
    assert not validate(PlaneNearTriangulation.from_lists([[1], [0]], [0, 1])).ok
    loop = PlaneNearTriangulation.from_lists([[0, 1], [0, 2], [1, 0]], [0, 1, 2])
    assert any("loop" in v for v in validate(loop).violations)
    dup = PlaneNearTriangulation.from_lists([[1, 1, 2], [0, 2], [0, 1]], [0, 1, 2])
    assert any("parallel" in v for v in validate(dup).violations)
    asym = PlaneNearTriangulation.from_lists([[1, 2], [0], [0, 1]], [0, 1, 2])
    assert any("asymmetric" in v for v in validate(asym).violations)
    disc = PlaneNearTriangulation.from_lists(
        [[1, 2], [2, 0], [0, 1], [4], [3]], [0, 1, 2]
    )
    assert any("disconnected" in v for v in validate(disc).violations)


def test_validate_rejects_bad_outer_cycle(w5):
    g, _ = w5
    not_cycle = PlaneNearTriangulation(g.vertex_count, g.rotation, (0, 2, 4))
    assert any("not an edge" in v for v in validate(not_cycle).violations)
    # A cycle that does not bound the traced outer face: wrong orientation.
    reversed_outer = PlaneNearTriangulation(
        g.vertex_count, g.rotation, tuple(reversed(g.outer_cycle))
    )
    assert any("does not bound" in v for v in validate(reversed_outer).violations)


def test_validate_family_members_and_random_triangulations():
    for d, g, _ in built_family(9):
        assert validate(g).ok, d
    for seed in range(20):
        g = random_triangulation(10, seed)
        assert validate(g).ok
        assert len(faces_of(g)) == g.edge_count() - g.vertex_count + 2


# ---------------------------------------------------------------------------
# chords / separating cycles
# ---------------------------------------------------------------------------


def test_chords_examples(bw4):
    assert chords(build(Wheel(3))[0]) == []
    assert chords(bw4[0]) == [(0, 2)]
    assert chords(build(Wheel(5))[0]) == []


def test_separating_cycles_wheels_empty():
    for k in (3, 4, 5, 6):
        g, _ = build(Wheel(k))
        assert separating_cycles(g, 3) == []
        assert separating_cycles(g, 4) == []


def test_separating_cycles_octahedron():
    g = octahedron()
    assert validate(g).ok
    assert separating_cycles(g, 3) == []
    # Each equatorial 4-cycle leaves one pole inside and one outside; with one
    # face drawn outer there are exactly three of them.
    quads = separating_cycles(g, 4)
    assert len(quads) == 3
    antipodal = [{0, 3}, {1, 4}, {2, 5}]
    for quad in quads:
        others = set(range(6)) - set(quad)
        assert others in antipodal
        # removal-disconnection oracle
        h = nx.Graph(list(g.edges()))
        h.remove_nodes_from(quad)
        assert not nx.is_connected(h)


def test_separating_cycles_stacked_k4():
    g = stacked_k4()
    assert validate(g).ok
    assert separating_cycles(g, 3) == [(0, 1, 3)]


def test_nonseparating_triangles_are_facial():
    # Wherever no separating triangle exists, every triangle bounds a face.
    for g in (build(Wheel(5))[0], build(Wheel(3))[0], octahedron(), build(BrokenWheel(6))[0]):
        assert separating_cycles(g, 3) == []
        facial = {
            tuple(sorted(d[0] for d in f)) for f in faces_of(g) if len(f) == 3
        }
        facial |= {tuple(sorted(g.outer_cycle))} if len(g.outer_cycle) == 3 else set()
        for tri in itertools.combinations(range(g.vertex_count), 3):
            if all(g.has_edge(a, b) for a, b in itertools.combinations(tri, 2)):
                assert tri in facial


# ---------------------------------------------------------------------------
# split_along / enclosed_region
# ---------------------------------------------------------------------------


def test_split_broken_wheel_chord_into_triangles(bw4):
    g, _ = bw4
    res = split_along(g, [0, 2])
    assert res.part_one.vertex_count == res.part_two.vertex_count == 3
    assert validate(res.part_one).ok and validate(res.part_two).ok
    assert res.shared_boundary == (0, 2)
    # old -> new maps cover exactly each part's vertices
    assert {old for old, _ in res.map_one} | {old for old, _ in res.map_two} == {0, 1, 2, 3}


def test_split_wheel_along_hub_path_face_counts(w5):
    g, _ = w5
    res = split_along(g, [1, 5, 4])
    for part in (res.part_one, res.part_two):
        assert validate(part).ok
    inner = lambda x: len(faces_of(x)) - 1
    assert inner(res.part_one) + inner(res.part_two) == inner(g)


def test_split_family_chords_preserve_face_counts():
    for d, g, _ in built_family(9):
        for u, v in chords(g):
            res = split_along(g, [u, v])
            assert validate(res.part_one).ok and validate(res.part_two).ok
            inner = lambda x: len(faces_of(x)) - 1
            assert inner(res.part_one) + inner(res.part_two) == inner(g)


def test_split_rejects_bad_paths(w5):
    g, _ = w5
    with pytest.raises(PlaneGraphError):
        split_along(g, [0, 1])  # consecutive outer vertices: not a chord
    with pytest.raises(PlaneGraphError):
        split_along(g, [5, 0, 2])  # endpoint in the interior
    with pytest.raises(PlaneGraphError):
        split_along(g, [0, 3])  # not an edge
    with pytest.raises(PlaneGraphError):
        split_along(g, [0, 0])


def test_enclosed_region_whole_graph_is_identity(w5):
    g, _ = w5
    sub, relabel = enclosed_region(g, list(g.outer_cycle))
    assert sub.vertex_count == g.vertex_count
    assert validate(sub).ok
    assert sub.outer_cycle == g.outer_cycle
    assert relabel == {v: v for v in range(g.vertex_count)}


def test_enclosed_region_of_facial_triangle_is_bare(w5):
    g, _ = w5
    sub, _ = enclosed_region(g, [0, 1, 5])
    assert sub.vertex_count == 3
    assert validate(sub).ok


# ---------------------------------------------------------------------------
# blocks
# ---------------------------------------------------------------------------


def test_blocks_path_two_edge_blocks():
    out = blocks([[1], [0, 2], [1]])
    assert sorted(b.vertices for b in out) == [(0, 1), (1, 2)]


def test_blocks_two_connected_graph_is_one_block(bw4):
    g, _ = bw4
    out = blocks(g)
    assert len(out) == 1
    assert out[0].vertices == (0, 1, 2, 3)
    assert len(out[0].edges) == g.edge_count()


def test_blocks_two_triangles_sharing_a_vertex():
    adj = [[1, 2], [0, 2], [0, 1, 3, 4], [2, 4], [2, 3]]
    out = blocks(adj)
    assert sorted(b.vertices for b in out) == [(0, 1, 2), (2, 3, 4)]


def test_blocks_isolated_vertex_and_random_agree_with_networkx(rng):
    out = blocks([[], [2], [1]])
    assert sorted(b.vertices for b in out) == [(0,), (1, 2)]
    for _ in range(50):
        n = rng.randint(2, 9)
        g = nx.gnp_random_graph(n, 0.35, seed=rng.randrange(10**6))
        adj = [sorted(g.neighbors(v)) for v in range(n)]
        mine = sorted(
            b.vertices for b in blocks(adj) if len(b.vertices) > 1
        )
        theirs = sorted(
            tuple(sorted(c)) for c in nx.biconnected_components(g)
        )
        assert mine == theirs
