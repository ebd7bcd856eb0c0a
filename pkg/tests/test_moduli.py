import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from core.exceptions import IncompatibleForms, NonPositiveArea, WrongChart, WrongSignature
from geometry.decomposition import AreaForm, area_form
from geometry.moduli import (
    ELEMENTS, ORDER, D6Element, canonical_rep, d6_apply, distance, distance_report, element_of, ideal_simplex_check,
    is_isometry, normalize, orbit, orbit_report,
)

positive_six = st.lists(st.floats(min_value=0.01, max_value=10.0), min_size=6, max_size=6)


@pytest.fixture(scope="module")
def form(a1):
    return area_form(a1)


def test_normalize_gives_unit_area(form, rng):
    for _ in range(20):
        point = normalize(rng.uniform(0.1, 3.0, size=6), form)
        assert point.area == pytest.approx(1.0, abs=1e-12)
    named = normalize({"a": 1, "b": 1, "c": 1, "d": 1, "e": 1, "f": 1}, form)
    assert set(named.as_dict()) == set("abcdef")


def test_axis_has_no_area(form):
    with pytest.raises(NonPositiveArea):
        normalize([0.0, 0.0, 1.0, 0.0, 0.0, 0.0], form)
    with pytest.raises(ValueError):
        normalize([1.0] * 5, form)


def test_distance_is_a_metric(form, rng):
    for _ in range(1000):
        x, y, z = (normalize(rng.uniform(0.05, 3.0, size=6), form) for _ in range(3))
        dxy = distance(x, y)
        assert dxy >= 0
        assert distance(x, x) < 1e-9
        assert dxy == pytest.approx(distance(y, x), abs=1e-9)
        assert distance(x, z) <= dxy + distance(y, z) + 1e-9


def test_distance_ignores_rescaling(form, rng):
    for _ in range(1000):
        l = rng.uniform(0.05, 3.0, size=6)
        assert distance(normalize(l, form), normalize(7.3 * l, form)) < 1e-9


def test_distance_report(form):
    x = normalize([1.0, 2.0, 1.0, 1.0, 1.0, 1.0], form)
    y = normalize([1.0, 1.0, 1.0, 2.0, 1.0, 1.0], form)
    report = distance_report(x, y)
    assert report.distance == pytest.approx(math.acosh(report.lorentz_product))
    assert report.x["b"] > report.x["a"]


def test_distance_needs_one_form(form, catalog):
    other = area_form(catalog.arrangement("N4-A2"))
    with pytest.raises(IncompatibleForms):
        distance(normalize([1.0] * 6, form), normalize([1.0] * 6, other))


def test_ideal_simplex_at_uniform_deficits(form):
    report = ideal_simplex_check(form)
    assert report.n_vertices == 6
    assert report.n_facets == 6
    assert report.vertices_per_facet == 5
    assert report.facets_per_vertex == 5
    assert set(report.facet_signatures.values()) == {(1, 4, 0)}
    assert all(v == 0.0 for v in report.null_residuals.values())
    assert report.gram_spread == pytest.approx(math.sqrt(2), rel=1e-9)


def test_uniform_gram_entries_admit_no_equalizing_rescaling(form):
    q = form.matrix
    a, b, c, d = (form.labels.index(label) for label in "abcd")
    # vertex rescalings cancel in this ratio, so equal Gram entries would force it to 1
    cross_ratio = q[a, d] * q[b, c] / (q[a, b] * q[c, d])
    assert cross_ratio == pytest.approx(2.0, rel=1e-9)
    assert ideal_simplex_check(form).regularity_residual > 1e-2


def test_ideal_simplex_needs_a_lorentzian_form():
    euclidean = AreaForm(np.eye(3), ("a", "b", "c"), (1.0, 1.0, 1.0))
    with pytest.raises(WrongSignature):
        ideal_simplex_check(euclidean)


def test_group_relations():
    r, s = D6Element(1, 0), D6Element(0, 1)
    identity = D6Element()
    assert len(set(ELEMENTS)) == ORDER
    power = identity
    for _ in range(6):
        power = r.compose(power)
    assert power == identity
    assert s.compose(s) == identity
    assert s.compose(r).compose(s) == r.inverse()
    sr = s.compose(r)
    assert sr.compose(sr) == identity
    for g in ELEMENTS:
        assert g.compose(g.inverse()) == identity
        assert element_of(g.index_map) == g


def test_generator_action():
    l = np.arange(1.0, 7.0)
    assert d6_apply(D6Element.from_word("r"), l).tolist() == [3.0, 4.0, 5.0, 6.0, 2.0, 1.0]
    assert d6_apply(D6Element.from_word("s"), l).tolist() == [6.0, 5.0, 4.0, 3.0, 2.0, 1.0]
    sr = D6Element.from_word("sr")
    assert np.array_equal(d6_apply(sr, l), d6_apply(D6Element.from_word("s"), d6_apply(D6Element.from_word("r"), l)))
    assert np.array_equal(sr.matrix @ l, d6_apply(sr, l))
    with pytest.raises(ValueError):
        D6Element.from_word("rt")


def test_orbit_sizes():
    assert len(orbit([1.0, 2.0, 3.0, 4.0, 5.0, 6.0])) == 12
    assert len(orbit([1.0] * 6)) == 1
    report = orbit_report([2.0, 1.0, 1.0, 1.0, 1.0, 1.0])
    assert report.orbit_size == 6
    assert report.canonical == [1.0, 1.0, 1.0, 1.0, 1.0, 2.0]


@settings(max_examples=100)
@given(positive_six, st.integers(min_value=0, max_value=ORDER - 1))
def test_canonical_rep_is_orbit_invariant(l, index):
    image = d6_apply(ELEMENTS[index], l)
    assert np.array_equal(canonical_rep(image), canonical_rep(l))


def test_dihedral_action_needs_six_coordinates(t1):
    with pytest.raises(WrongChart):
        orbit([1.0] * 8)
    with pytest.raises(WrongChart):
        d6_apply(D6Element(), {"a": 1.0})
    with pytest.raises(WrongChart):
        is_isometry(area_form(t1), D6Element(1, 0))


def test_symmetries_preserve_the_uniform_form(form):
    assert all(is_isometry(form, g) for g in ELEMENTS)


def test_symmetries_preserve_distance(form, rng):
    for g in ELEMENTS:
        l, m = rng.uniform(0.1, 2.0, size=6), rng.uniform(0.1, 2.0, size=6)
        before = distance(normalize(l, form), normalize(m, form))
        after = distance(normalize(d6_apply(g, l), form), normalize(d6_apply(g, m), form))
        assert after == pytest.approx(before, abs=1e-9)
