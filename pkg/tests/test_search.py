import numpy as np
import pytest

from core.exceptions import Unrealizable
from geometry.arrangement import LabeledVertexSet, class_string, loop_class, validate
from geometry.search import as_class, search_arrangement

V = [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [1.0, -1.0, 1.0], [-1.0, -1.0, 1.0]]
A1_CLASSES = ["++--", "+-++", "+++-", "+--+", "++++", "+---"]


@pytest.fixture(scope="module")
def vs():
    return LabeledVertexSet.from_points(V)


def test_search_realizes_every_class(vs):
    arr = search_arrangement(A1_CLASSES, vs, seed=7)
    assert validate(arr).ok
    assert [class_string(loop_class(loop, vs)) for loop in arr.loops] == A1_CLASSES
    assert arr.labels == ["a", "b", "c", "d", "e", "f"]


def test_search_is_reproducible(vs):
    first = search_arrangement(A1_CLASSES, vs, seed=11)
    second = search_arrangement(A1_CLASSES, vs, seed=11)
    assert np.array_equal(first.normals, second.normals)


def test_classes_are_taken_up_to_sign(vs):
    flipped = ["--++", "-+--", "---+", "-++-", "----", "-+++"]
    arr = search_arrangement(flipped, vs, seed=3)
    assert [class_string(loop_class(loop, vs)) for loop in arr.loops] == A1_CLASSES


def test_duplicate_classes_are_rejected(vs):
    with pytest.raises(Unrealizable):
        search_arrangement(["++--", "--++", "+++-"], vs, seed=1)


def test_class_against_the_vertex_dependency(vs):
    # v1 + v2 - v3 + v4 = 0, so no plane puts 1+, 2+, 4+ on one side and 3+ on the other
    with pytest.raises(Unrealizable):
        search_arrangement(["++-+", "++--", "+++-"], vs, seed=1, attempts=200)


def test_as_class_checks_length():
    assert as_class("-+-+", 4) == (1, -1, 1, -1)
    assert as_class([1, 1, -1, -1], 4) == (1, 1, -1, -1)
    with pytest.raises(ValueError):
        as_class("++-", 4)
    with pytest.raises(ValueError):
        as_class([1, 0, 1, 1], 4)
