import numpy as np
import pytest

from core.exceptions import BrokenPath
from geometry.arrangement import unit
from geometry.decomposition import build_complex
from geometry.frames import CurveTracer, FrameEdge, QuadLocator, check_path, great_circle_curve, resolve_frame
from schemas.surface import FrameEdgeSchema
from tests.conftest import N4_ENTRIES, N5_ENTRIES


def test_locator_finds_the_quad_at_each_corner(a1_complex):
    locator = QuadLocator(a1_complex)
    cells = a1_complex.cells
    for face in cells.faces:
        for p in face.corners:
            x = unit(0.95 * cells.points[p] + 0.05 * face.center)
            assert locator.locate(x) == p


def test_curve_endpoints_and_norm():
    u, w = np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])
    curve, total = great_circle_curve([u, unit([1.0, 1.0, 1.0]), w])
    assert np.allclose(curve(0.0), u)
    assert np.allclose(curve(1.0), w)
    for t in np.linspace(0.0, 1.0, 11):
        assert np.linalg.norm(curve(float(t))) == pytest.approx(1.0)
    assert total > np.pi / 2


def test_curve_rejects_antipodal_and_empty_steps():
    u = np.array([0.0, 0.0, 1.0])
    with pytest.raises(BrokenPath):
        great_circle_curve([u, -u])
    with pytest.raises(BrokenPath):
        great_circle_curve([u, u])


@pytest.mark.parametrize("name", N4_ENTRIES + N5_ENTRIES)
def test_catalog_frames_trace_to_glued_paths(catalog, name):
    complex_ = build_complex(catalog.arrangement(name))
    spec = resolve_frame(complex_, catalog.frame(name), name)
    assert len(spec) == complex_.arrangement.k // 2
    for edge, raw in zip(spec.edges, catalog.frame(name)):
        check_path(complex_, edge)
        assert edge.source == complex_.cells.label_faces[raw.source]
        assert edge.target == complex_.cells.label_faces[raw.target]


def test_trace_to_the_same_label_is_empty(a1_complex):
    edge = CurveTracer(a1_complex).trace("2+", "2+")
    assert edge.path == ()
    check_path(a1_complex, edge)


def test_trace_via_a_waypoint(a1_complex):
    tracer = CurveTracer(a1_complex)
    direct = tracer.trace("2+", "3+")
    detour = tracer.trace("2+", "3+", via=[[0.0, 0.0, 1.0]])
    check_path(a1_complex, detour)
    assert detour.source == direct.source and detour.target == direct.target


def test_trace_unknown_label(a1_complex):
    tracer = CurveTracer(a1_complex)
    with pytest.raises(BrokenPath, match="out of range"):
        tracer.trace("2+", "9-")
    with pytest.raises(BrokenPath, match="Invalid vertex label"):
        tracer.trace("x+", "2+")


def test_resolved_edges_pass_through(a1_complex):
    traced = CurveTracer(a1_complex).trace("3+", "4+")
    schema = traced.to_schema()
    spec = resolve_frame(a1_complex, [schema, {"from": schema.source, "to": schema.target, "path": schema.path}])
    assert spec.edges[0] == spec.edges[1] == traced


def test_check_path_errors(a1_complex):
    quad = a1_complex.quads[0]
    source = quad.corners[0]
    with pytest.raises(BrokenPath):
        check_path(a1_complex, FrameEdge(source, quad.corners[2], ()))
    with pytest.raises(BrokenPath):
        check_path(a1_complex, FrameEdge(source, source, (a1_complex.n_quads,)))
    far = next(f for f in range(a1_complex.n_cone_points) if f not in quad.corners)
    with pytest.raises(BrokenPath):
        check_path(a1_complex, FrameEdge(far, source, (0,)))
    stranger = next(q for q in range(1, a1_complex.n_quads) if a1_complex.shared_edge(0, q) is None)
    target = a1_complex.quads[stranger].corners[0]
    with pytest.raises(BrokenPath):
        check_path(a1_complex, FrameEdge(source, target, (0, stranger)))


def test_frame_schema_forms():
    assert FrameEdgeSchema.model_validate({"from": "1+", "to": "2-"}).via is None
    with pytest.raises(ValueError):
        FrameEdgeSchema.model_validate({"from": 3, "to": "2-"})
    with pytest.raises(ValueError):
        FrameEdgeSchema.model_validate({"from": 3, "to": 4})
