import xml.etree.ElementTree as ET

import numpy as np
import pytest

from geometry.decomposition import total_area
from geometry.developing import DevelopedComplex, unfold
from utils.exporters import SvgOptions, export_obj, export_svg

SVG = "{http://www.w3.org/2000/svg}"


@pytest.fixture(scope="module")
def developed(a1_complex):
    return unfold(a1_complex.with_lengths([1.0, 1.5, 0.5, 2.0, 1.0, 1.2]))


def test_svg_has_one_polygon_per_quad(developed):
    root = ET.fromstring(export_svg(developed))
    polygons = root.findall(f".//{SVG}polygon")
    assert len(polygons) == developed.n_quads == 30
    assert len(root.findall(f".//{SVG}line")) == 4 * 30
    # eight labeled cone points
    labeled = {text.text for text in root.findall(f".//{SVG}g[@id='cone-points']/{SVG}text")}
    assert len(labeled) == 8


def test_svg_is_deterministic(a1_complex):
    complex_ = a1_complex.with_lengths([1.0, 1.5, 0.5, 2.0, 1.0, 1.2])
    assert export_svg(unfold(complex_)) == export_svg(unfold(complex_))


def test_svg_options(developed):
    root = ET.fromstring(export_svg(developed, SvgOptions(width=400, legend=False, label_cone_points=False)))
    assert root.get("width") == "400"
    assert root.find(f".//{SVG}g[@id='legend']") is None
    assert root.find(f".//{SVG}g[@id='cone-points']") is None


def test_empty_net_is_valid_svg():
    empty = DevelopedComplex(None, 0, "bfs", {}, (), np.zeros((0, 4, 2)))
    root = ET.fromstring(export_svg(empty))
    assert root.findall(f".//{SVG}polygon") == []
    assert export_obj(empty).startswith("# planar net: 0 vertices, 0 faces")


def test_obj_faces_cover_the_area(developed):
    text = export_obj(developed)
    vertices = [line.split()[1:] for line in text.splitlines() if line.startswith("v ")]
    faces = [[int(i) for i in line.split()[1:]] for line in text.splitlines() if line.startswith("f ")]
    assert len(faces) == 30
    assert all(z == "0.0" for _, _, z in vertices)
    # shared tree edges merge their corners
    assert len(vertices) < 4 * 30
    xy = np.array([[float(x), float(y)] for x, y, _ in vertices])
    area = 0.0
    for face in faces:
        pts = xy[[i - 1 for i in face]]
        area += 0.5 * float(np.dot(pts[:, 0], np.roll(pts[:, 1], -1)) - np.dot(pts[:, 1], np.roll(pts[:, 0], -1)))
    assert area == pytest.approx(total_area(developed.complex), rel=1e-9)
