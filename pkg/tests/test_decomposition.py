import math

import numpy as np
import pytest

from core.exceptions import NotIncident
from geometry.decomposition import (
    area_form, build_complex, corner_angle, lengths_vector, signature, supplement_residual, total_area,
    triangle_identities, verify_cone_deficits,
)
from tests.conftest import N4_ENTRIES, N5_ENTRIES, random_deficits


def test_quad_counts(catalog, a1_complex, t1):
    assert a1_complex.n_quads == 30
    assert a1_complex.n_cone_points == 32
    assert a1_complex.euler_characteristic == 2
    t1_complex = build_complex(t1)
    assert t1_complex.n_quads == 56
    assert t1_complex.euler_characteristic == 2


def test_gluing_is_an_involution(a1_complex):
    for (q, k), (r, m) in a1_complex.gluing.items():
        assert a1_complex.neighbor(r, m) == (q, k)
        assert a1_complex.quads[q].edge_loops[k] == a1_complex.quads[r].edge_loops[m]


def test_uniform_audit_passes(a1_complex):
    audit = verify_cone_deficits(a1_complex)
    assert audit.passed
    assert abs(audit.total_deficit - 4 * math.pi) < 1e-9
    labeled = [row for row in audit.rows if row.labels]
    assert len(labeled) == 8
    assert all(abs(row.measured - math.pi / 2) < 1e-10 for row in labeled)
    assert all(abs(row.measured) < 1e-10 for row in audit.rows if not row.labels)


def test_audit_holds_for_random_deficits_and_lengths(a1, rng):
    for _ in range(10):
        arr = a1.with_deficits(random_deficits(rng, 4))
        complex_ = build_complex(arr)
        for _ in range(100):
            audit = verify_cone_deficits(complex_.with_lengths(rng.uniform(0.1, 3.0, size=6)))
            assert audit.passed, [row for row in audit.rows if not row.passed]


def test_degenerate_quads_keep_their_corner_angles(a1_complex):
    # a zero length flattens quads to segments; only quads with both sides zero vanish
    audit = verify_cone_deficits(a1_complex.with_lengths([0.0, 1.0, 1.0, 1.0, 1.0, 1.0]))
    assert audit.passed
    assert a1_complex.with_lengths([0.0, 1.0, 1.0, 1.0, 1.0, 1.0]).degenerate_quads


def test_audit_against_wrong_deficits_fails(a1_complex):
    audit = verify_cone_deficits(a1_complex, deficits=[1.0, 2.0, 1.5, 2 * math.pi - 4.5])
    assert not audit.passed


@pytest.mark.parametrize("name", N4_ENTRIES + N5_ENTRIES)
def test_angle_identities(catalog, name):
    arr = catalog.arrangement(name)
    complex_ = build_complex(arr)
    assert supplement_residual(complex_) < 1e-10
    angles, lunes = triangle_identities(arr, complex_)
    assert angles < 1e-10
    assert lunes < 1e-10


def test_parallelogram_angles_are_supplementary_at_random_deficits(a1, rng):
    for _ in range(5):
        complex_ = build_complex(a1.with_deficits(random_deficits(rng, 4)))
        assert supplement_residual(complex_) < 1e-10


def test_area_form_matches_the_summed_area(a1_complex, rng):
    form = area_form(a1_complex.arrangement)
    for _ in range(20):
        l = rng.uniform(0.0, 2.0, size=6)
        assert form.value(l) == pytest.approx(total_area(a1_complex.with_lengths(l)), rel=1e-12)


def test_area_form_has_zero_diagonal(a1):
    form = area_form(a1)
    assert np.all(np.diag(form.matrix) == 0.0)
    assert np.allclose(form.matrix, form.matrix.T)
    assert np.all(form.matrix[~np.eye(6, dtype=bool)] > 0)


@pytest.mark.parametrize("name", N4_ENTRIES)
def test_four_pair_signature(catalog, name):
    assert signature(area_form(catalog.arrangement(name))).as_tuple() == (1, 5, 0)


@pytest.mark.parametrize("name", N5_ENTRIES)
def test_five_pair_signature(catalog, name):
    arr = catalog.arrangement(name)
    assert signature(area_form(arr)).as_tuple() == (1, arr.k - 1, 0)


def test_signature_of_non_symmetric_matrix():
    with pytest.raises(ValueError):
        signature(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_corner_angle_rejects_a_far_face(a1):
    complex_ = build_complex(a1)
    cells = complex_.cells
    incident = set(cells.point_faces[0].values()) | set(cells.point_faces[1].values())
    far = next(f for f in range(cells.n_faces) if f not in incident)
    with pytest.raises(NotIncident):
        corner_angle(a1, 0, 1, far, cells)


def test_lengths_vector_checks(a1):
    assert lengths_vector(a1, {"a": 1, "b": 2, "c": 3, "d": 4, "e": 5, "f": 6}).tolist() == [1, 2, 3, 4, 5, 6]
    with pytest.raises(ValueError):
        lengths_vector(a1, {"a": 1.0})
    with pytest.raises(ValueError):
        lengths_vector(a1, [1.0] * 5)
    with pytest.raises(ValueError):
        lengths_vector(a1, [1.0, -1.0, 1.0, 1.0, 1.0, 1.0])
