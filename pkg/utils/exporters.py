# =============================================================================
# PLANAR NET EXPORT: SVG AND OBJ
# =============================================================================

import logging
from typing import Dict, List, Tuple

import numpy as np
from pydantic import BaseModel, Field

from core.config import TOLERANCES
from geometry.developing import DevelopedComplex

logger = logging.getLogger(__name__)

PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
)


class SvgOptions(BaseModel):
    """Drawing options for export_svg"""
    width: int = Field(800, gt=0, description="Width of the rendered image in pixels")
    margin: float = Field(0.05, ge=0, description="Margin around the content, as a fraction of its size")
    stroke_width: float = Field(0.004, gt=0, description="Edge stroke as a fraction of the content size")
    label_cone_points: bool = Field(True, description="Mark and label every corner at a labeled cone point")
    legend: bool = Field(True, description="Draw the loop-color legend")


def _fmt(x: float) -> str:
    text = f"{x:.6f}"
    return "0.000000" if text == "-0.000000" else text


def _loop_colors(dev: DevelopedComplex) -> Dict[int, str]:
    if dev.n_quads == 0:
        return {}
    return {j: PALETTE[j % len(PALETTE)] for j in range(dev.complex.arrangement.k)}


def export_svg(dev: DevelopedComplex, options: SvgOptions = SvgOptions()) -> str:
    """One polygon per developed quad, edges colored by the loop they cross"""
    # plane y grows upwards, SVG y grows downwards
    points = dev.positions.reshape(-1, 2) * np.array([1.0, -1.0])
    if len(points):
        low, high = points.min(axis=0), points.max(axis=0)
    else:
        low, high = np.zeros(2), np.ones(2)
    size = float(max(high[0] - low[0], high[1] - low[1], 1e-9))
    pad = options.margin * size
    x0, y0 = low[0] - pad, low[1] - pad
    w, h = high[0] - low[0] + 2 * pad, high[1] - low[1] + 2 * pad
    stroke = options.stroke_width * size
    height = max(1, int(round(options.width * h / w)))

    out: List[str] = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{options.width}" height="{height}" '
        f'viewBox="{_fmt(x0)} {_fmt(y0)} {_fmt(w)} {_fmt(h)}">\n'
    ]
    colors = _loop_colors(dev)

    out.append('\t<g id="quads">\n')
    for q in range(dev.n_quads):
        corners = dev.positions[q] * np.array([1.0, -1.0])
        text = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in corners)
        out.append(f'\t\t<polygon id="q{q}" points="{text}" style="fill: rgb(220, 220, 220); '
                   f'stroke: black; stroke-width: {_fmt(stroke)}" />\n')
    out.append('\t</g>\n')

    out.append('\t<g id="edges">\n')
    for q in range(dev.n_quads):
        corners = dev.positions[q] * np.array([1.0, -1.0])
        for k, loop in enumerate(dev.complex.quads[q].edge_loops):
            (ax, ay), (bx, by) = corners[k], corners[(k + 1) % 4]
            out.append(f'\t\t<line x1="{_fmt(ax)}" y1="{_fmt(ay)}" x2="{_fmt(bx)}" y2="{_fmt(by)}" '
                       f'stroke="{colors[loop]}" stroke-width="{_fmt(2 * stroke)}" />\n')
    out.append('\t</g>\n')

    if options.label_cone_points and dev.n_quads:
        out.append('\t<g id="cone-points">\n')
        for face in dev.complex.cells.faces:
            if not face.labels:
                continue
            name = "/".join(face.labels)
            for q in face.corners:
                x, y = dev.corner(q, face.index) * np.array([1.0, -1.0])
                out.append(f'\t\t<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(3 * stroke)}" fill="black" />\n')
                out.append(f'\t\t<text x="{_fmt(x + 4 * stroke)}" y="{_fmt(y - 4 * stroke)}" '
                           f'font-size="{_fmt(12 * stroke)}">{name}</text>\n')
        out.append('\t</g>\n')

    if options.legend and colors:
        out.append('\t<g id="legend">\n')
        labels = dev.complex.arrangement.labels
        for j, color in colors.items():
            y = y0 + (j + 1) * 14 * stroke
            out.append(f'\t\t<rect x="{_fmt(x0 + pad * 0.2)}" y="{_fmt(y - 8 * stroke)}" width="{_fmt(8 * stroke)}" '
                       f'height="{_fmt(8 * stroke)}" fill="{color}" />\n')
            out.append(f'\t\t<text x="{_fmt(x0 + pad * 0.2 + 12 * stroke)}" y="{_fmt(y)}" '
                       f'font-size="{_fmt(10 * stroke)}">{labels[j]}</text>\n')
        out.append('\t</g>\n')

    out.append("</svg>\n")
    logger.debug(f"SVG with {dev.n_quads} polygons")
    return "".join(out)


def export_obj(dev: DevelopedComplex, merge: float = TOLERANCES.merge) -> str:
    """Planar net at z = 0; corners closer than `merge` share a vertex"""
    index: Dict[Tuple[int, int], int] = {}
    vertices: List[Tuple[float, float]] = []
    faces: List[List[int]] = []
    for q in range(dev.n_quads):
        face = []
        for x, y in dev.positions[q]:
            key = (int(round(x / merge)), int(round(y / merge)))
            if key not in index:
                index[key] = len(vertices) + 1
                vertices.append((float(x), float(y)))
            face.append(index[key])
        faces.append(face)

    out = [f"# planar net: {len(vertices)} vertices, {len(faces)} faces\n"]
    out.extend(f"v {x!r} {y!r} 0.0\n" for x, y in vertices)
    out.extend("f " + " ".join(str(i) for i in face) + "\n" for face in faces)
    return "".join(out)
