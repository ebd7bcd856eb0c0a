import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from core.exceptions import DegenerateArrangement, IncompatibleArrangements, OnLoop
from geometry.arrangement import (
    LabeledVertexSet, LoopArrangement, OrientedLoop, are_adjacent, bipartition_from_signs, cell_complex,
    class_string, combinatorial_signature, lune_labels, loop_class, loop_side, parse_label, signs_from_bipartition,
    validate,
)
from schemas.reports import IssueKind
from tests.conftest import N4_ENTRIES, N5_ENTRIES

V = [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [1.0, -1.0, 1.0], [-1.0, -1.0, 1.0]]


@pytest.mark.parametrize("name", N4_ENTRIES + N5_ENTRIES)
def test_catalog_entries_are_valid(catalog, name):
    report = validate(catalog.arrangement(name))
    assert report.ok, report.issues


@pytest.mark.parametrize("name", N4_ENTRIES + N5_ENTRIES)
def test_cell_complex_counts(catalog, name):
    arr = catalog.arrangement(name)
    cx = cell_complex(arr)
    k = arr.k
    assert cx.n_vertices == k * (k - 1)
    assert cx.n_faces == k * k - k + 2
    assert cx.n_edges == 2 * k * (k - 1)
    assert cx.euler_characteristic == 2


def test_antipodal_maps_are_involutions(a1):
    cx = cell_complex(a1)
    for f in range(cx.n_faces):
        g = cx.face_antipode(f)
        assert g != f
        assert cx.face_antipode(g) == f
        assert np.allclose(cx.faces[g].center, -cx.faces[f].center)
    for a in range(cx.n_edges):
        assert cx.arc_antipode(cx.arc_antipode(a)) == a
    for p in range(cx.n_vertices):
        assert np.allclose(cx.points[cx.point_antipode(p)], -cx.points[p])


def test_labeled_faces_hold_their_vertex(a1):
    cx = cell_complex(a1)
    for label, f in cx.label_faces.items():
        assert label in cx.faces[f].labels
        assert cx.face_of(a1.vertices.point(label)) == f


def test_face_corners_are_counter_clockwise(a1):
    cx = cell_complex(a1)
    for face in cx.faces:
        turning = 0.0
        corners = cx.points[list(face.corners)]
        for t in range(len(corners)):
            u, w = corners[t], corners[(t + 1) % len(corners)]
            turning += float(np.dot(np.cross(u, w), face.center))
        assert turning > 0


def test_too_few_loops(a1):
    arr = LoopArrangement.create(a1.vertices, a1.loops[:2])
    with pytest.raises(DegenerateArrangement):
        cell_complex(arr)


def test_validate_reports_each_issue():
    loops = [("a", [1.0, 0.91, -1.13]), ("b", [0.12, -0.08, 1.0]), ("c", [1.0, 0.1, -0.07])]
    arr = LoopArrangement.create(V, loops, [1.0, 1.0, 1.0, 1.0])
    assert IssueKind.DEFICIT_SUM in validate(arr).kinds()

    on_vertex = LoopArrangement.create(V, loops + [("d", [1.0, -1.0, 0.0])])
    assert IssueKind.VERTEX_ON_LOOP in validate(on_vertex).kinds()

    twin = LoopArrangement.create(V, loops + [("d", [1.02, 0.9, -1.1])])
    assert IssueKind.HOMOTOPIC_PAIR in validate(twin).kinds()

    # a + b lies in the span of a and b, so a, b, d meet in one antipodal pair
    concurrent = LoopArrangement.create(V, loops + [("d", [1.12, 0.83, -0.13])])
    assert IssueKind.CONCURRENT_LOOPS in validate(concurrent).kinds()

    coincident = LoopArrangement.create(V[:3] + [[-1.0, -1.0, -1.0]], loops)
    assert IssueKind.COINCIDENT_VERTICES in validate(coincident).kinds()

    nonpositive = LoopArrangement.create(V, loops, [2 * math.pi, 0.0, 0.0, 0.0])
    assert IssueKind.NON_POSITIVE_DEFICIT in validate(nonpositive).kinds()


def test_loop_side_on_loop_raises():
    loop = OrientedLoop.create("a", [0.0, 0.0, 1.0])
    assert loop_side(loop, [0.0, 0.0, 1.0]) == 1
    assert loop_side(loop, [0.0, 0.0, -1.0]) == -1
    with pytest.raises(OnLoop):
        loop_side(loop, [1.0, 0.0, 0.0])


@settings(max_examples=60)
@given(st.lists(st.floats(min_value=-1.0, max_value=1.0), min_size=3, max_size=3))
def test_class_is_orientation_free(normal):
    vs = LabeledVertexSet.from_points(V)
    assume(np.linalg.norm(normal) > 1e-3 and np.min(np.abs(vs.positions @ np.array(normal))) > 1e-6)
    loop = OrientedLoop.create("a", normal)
    assert loop_class(loop, vs) == loop_class(loop.flipped(), vs)
    assert loop_class(loop, vs)[0] == 1


def test_bipartition_round_trip():
    signs = (1, -1, -1, 1)
    part = bipartition_from_signs(signs)
    assert frozenset({"1+", "2-", "3-", "4+"}) in part
    assert signs_from_bipartition(part, 4) == signs
    assert signs_from_bipartition(bipartition_from_signs((-1, 1, 1, -1)), 4) == signs


def test_lune_partition(a1):
    labels = set(a1.vertices.labels)
    for i in range(a1.k):
        for j in range(i + 1, a1.k):
            parts = [lune_labels(a1, i, j, si, sj) for si in (1, -1) for sj in (1, -1)]
            assert set().union(*parts) == labels
            assert sum(len(p) for p in parts) == len(labels)


def test_catalog_classes(catalog):
    arr = catalog.arrangement("N4-A1")
    assert [class_string(loop_class(loop, arr.vertices)) for loop in arr.loops] == [
        "++--", "+-++", "+++-", "+--+", "++++", "+---"]


def test_adjacency(catalog, a1, a2):
    assert are_adjacent(a1, a2) == "a"
    assert are_adjacent(a1, a1) is None
    assert are_adjacent(a2, catalog.arrangement("N4-A2-d")) is None
    with pytest.raises(IncompatibleArrangements):
        are_adjacent(a1, catalog.arrangement("N4-A1-rho"))


def test_combinatorial_signature_separates_types(catalog):
    t1 = combinatorial_signature(catalog.arrangement("N5-T1"))
    t2 = combinatorial_signature(catalog.arrangement("N5-T2"))
    assert t1 != t2
    assert combinatorial_signature(catalog.arrangement("N5-T3-b")) == t1


def test_combinatorial_signature_ignores_vertex_set(catalog):
    assert combinatorial_signature(catalog.arrangement("N4-A1")) == combinatorial_signature(
        catalog.arrangement("N4-A1-rho"))


@pytest.mark.parametrize("first, second", [
    ("N4-A1", "N4-A2"),
    ("N5-T3-a", "N5-T3"),
    ("N5-T3-d", "N5-T4"),
])
def test_moved_charts_keep_their_combinatorics(catalog, first, second):
    assert combinatorial_signature(catalog.arrangement(first)) == combinatorial_signature(
        catalog.arrangement(second))


def test_parse_label():
    assert parse_label("3-") == (2, -1)
    assert parse_label("12+") == (11, 1)
    with pytest.raises(ValueError):
        parse_label("a+")
