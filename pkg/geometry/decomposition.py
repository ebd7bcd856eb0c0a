# =============================================================================
# PARALLELOGRAM DECOMPOSITION OF THE CONE SPHERE
# =============================================================================

import itertools
import logging
import math
from dataclasses import dataclass, replace
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from core.config import TOLERANCES, Tolerances
from core.exceptions import DegenerateArrangement, NotIncident
from geometry.arrangement import (
    TWO_PI, CellComplex, LoopArrangement, LoopRef, cell_complex, corner_face_check, lune_deficit,
    lune_vertices, triangle_cells, triangle_labels,
)
from schemas.reports import DeficitAudit, DeficitAuditRow, SignatureReport

logger = logging.getLogger(__name__)

Lengths = Union[Mapping[str, float], Sequence[float], np.ndarray]


def lengths_vector(arr: LoopArrangement, lengths: Lengths) -> np.ndarray:
    """Edge lengths in loop order from a label mapping or a sequence"""
    if isinstance(lengths, Mapping):
        missing = [label for label in arr.labels if label not in lengths]
        if missing:
            raise ValueError(f"missing lengths for loops {missing}")
        extra = sorted(set(lengths) - set(arr.labels))
        if extra:
            raise ValueError(f"lengths given for unknown loops {extra}")
        vector = np.array([float(lengths[label]) for label in arr.labels])
    else:
        vector = np.array(lengths, dtype=float).reshape(-1)
    if vector.shape != (arr.k,):
        raise ValueError(f"expected {arr.k} lengths, got {vector.shape[0]}")
    if not np.all(np.isfinite(vector)) or np.any(vector < 0):
        raise ValueError(f"lengths must be finite and nonnegative, got {vector.tolist()}")
    return vector


# -------------------------------
# Corner angles
# -------------------------------
def _pair_point(arr: LoopArrangement, i: int, j: int) -> int:
    """Id of the + intersection point of loops i and j"""
    if i == j:
        raise ValueError("a corner needs two distinct loops")
    a, b = min(i, j), max(i, j)
    pair_index = a * arr.k - a * (a + 1) // 2 + (b - a - 1)
    return 2 * pair_index


def corner_angle(arr: LoopArrangement, loop_i: LoopRef, loop_j: LoopRef, corner_cell: int,
                 cells: Optional[CellComplex] = None) -> float:
    """θ = π − ½ Σ δ over the labels in the lune of (l_i, l_j) holding corner_cell"""
    cells = cells or cell_complex(arr)
    i, j = arr.index(loop_i), arr.index(loop_j)
    base = _pair_point(arr, i, j)
    if not 0 <= corner_cell < cells.n_faces:
        raise NotIncident(f"no face {corner_cell}", face=corner_cell)
    if corner_cell not in cells.point_faces[base].values() and corner_cell not in cells.point_faces[base + 1].values():
        raise NotIncident(f"face {corner_cell} is not a corner of loops {arr.labels[i]} and {arr.labels[j]}",
                          face=corner_cell)
    witness = cells.faces[corner_cell].center
    return math.pi - 0.5 * lune_deficit(arr, lune_vertices(arr, i, j, witness, tol=0.0))


# -------------------------------
# Complex
# -------------------------------
@dataclass(frozen=True)
class Quad:
    """Parallelogram dual to an intersection point; corners are faces in counter-clockwise order.

    Edge k runs from corner k to corner k + 1, crosses arc edge_arcs[k] and has heading headings[k]
    in the quad's own frame (corner 0 at the origin, edge 0 along +x).
    """
    index: int
    loops: Tuple[int, int]
    corners: Tuple[int, int, int, int]
    angles: Tuple[float, float, float, float]
    edge_arcs: Tuple[int, int, int, int]
    edge_loops: Tuple[int, int, int, int]
    headings: Tuple[float, float, float, float]

    def corner_index(self, face: int) -> int:
        try:
            return self.corners.index(face)
        except ValueError:
            raise NotIncident(f"face {face} is not a corner of quad {self.index}", quad=self.index, face=face) from None


@dataclass(frozen=True, eq=False)
class ParallelogramComplex:
    cells: CellComplex
    quads: Tuple[Quad, ...]
    lengths: np.ndarray
    gluing: Dict[Tuple[int, int], Tuple[int, int]]
    cone_rings: Tuple[Tuple[Tuple[int, int], ...], ...]

    @property
    def arrangement(self) -> LoopArrangement:
        return self.cells.arrangement

    @property
    def n_quads(self) -> int:
        return len(self.quads)

    @property
    def n_cone_points(self) -> int:
        return len(self.cone_rings)

    @property
    def euler_characteristic(self) -> int:
        # cone points - dual edges + parallelograms
        return self.n_cone_points - self.cells.n_edges + self.n_quads

    def with_lengths(self, lengths: Lengths) -> "ParallelogramComplex":
        vector = lengths_vector(self.arrangement, lengths)
        vector.setflags(write=False)
        return replace(self, lengths=vector)

    def edge_length(self, q: int, k: int) -> float:
        return float(self.lengths[self.quads[q].edge_loops[k]])

    def side_lengths(self, q: int) -> Tuple[float, float]:
        i, j = self.quads[q].loops
        return float(self.lengths[i]), float(self.lengths[j])

    def is_degenerate(self, q: int) -> bool:
        return min(self.side_lengths(q)) == 0.0

    def is_collapsed(self, q: int) -> bool:
        return max(self.side_lengths(q)) == 0.0

    @property
    def degenerate_quads(self) -> List[int]:
        return [q for q in range(self.n_quads) if self.is_degenerate(q)]

    @staticmethod
    def antipode(q: int) -> int:
        return q ^ 1

    def neighbor(self, q: int, k: int) -> Tuple[int, int]:
        return self.gluing[(q, k)]

    def shared_edge(self, q: int, other: int) -> Optional[Tuple[int, int]]:
        """(k, m): edge k of q is glued to edge m of other"""
        for k in range(4):
            target, m = self.gluing[(q, k)]
            if target == other:
                return k, m
        return None

    def local_corners(self, q: int, lengths: Optional[np.ndarray] = None) -> np.ndarray:
        """Corner positions in the quad's own frame, shape (4, 2)"""
        quad = self.quads[q]
        lengths = self.lengths if lengths is None else lengths
        out = np.zeros((4, 2))
        for k in range(3):
            step = lengths[quad.edge_loops[k]]
            out[k + 1] = out[k] + step * np.array([math.cos(quad.headings[k]), math.sin(quad.headings[k])])
        return out


def build_complex(arr: LoopArrangement, lengths: Optional[Lengths] = None,
                  tolerances: Tolerances = TOLERANCES) -> ParallelogramComplex:
    """Glue one parallelogram per loop intersection point; unit lengths when none are given"""
    cells = cell_complex(arr, tolerances)
    vector = np.ones(arr.k) if lengths is None else lengths_vector(arr, lengths)
    vector.setflags(write=False)
    normals = arr.normals

    point_arcs: Dict[int, List[int]] = {}
    for arc in cells.arcs:
        point_arcs.setdefault(arc.start, []).append(arc.index)
        point_arcs.setdefault(arc.end, []).append(arc.index)

    quads: List[Quad] = []
    for p, (i, j) in enumerate(cells.point_loops):
        position = cells.points[p]
        e1 = normals[i]
        e2 = np.cross(position, e1)
        quadrants = list(cells.point_faces[p].items())
        quadrants.sort(key=lambda item: math.atan2(
            float((item[0][0] * normals[i] + item[0][1] * normals[j]) @ e2),
            float((item[0][0] * normals[i] + item[0][1] * normals[j]) @ e1)))
        corners = tuple(face for _, face in quadrants)
        angles = tuple(corner_angle(arr, i, j, face, cells) for face in corners)

        edge_arcs, edge_loops = [], []
        for k in range(4):
            (si, sj), (ti, tj) = quadrants[k][0], quadrants[(k + 1) % 4][0]
            loop = i if si != ti else j
            pair = {corners[k], corners[(k + 1) % 4]}
            match = [a for a in point_arcs[p] if cells.arcs[a].loop == loop and set(cells.arcs[a].faces) == pair]
            if len(match) != 1:
                raise DegenerateArrangement(f"cannot find the arc crossed by edge {k} of quad {p}")
            edge_arcs.append(match[0])
            edge_loops.append(loop)

        headings = [0.0]
        for k in range(3):
            headings.append(headings[-1] + math.pi - angles[k + 1])
        quads.append(Quad(index=p, loops=(i, j), corners=corners, angles=angles,
                          edge_arcs=tuple(edge_arcs), edge_loops=tuple(edge_loops), headings=tuple(headings)))

    arc_edges: Dict[int, List[Tuple[int, int]]] = {}
    for quad in quads:
        for k, a in enumerate(quad.edge_arcs):
            arc_edges.setdefault(a, []).append((quad.index, k))
    gluing: Dict[Tuple[int, int], Tuple[int, int]] = {}
    for a, ends in arc_edges.items():
        if len(ends) != 2:
            raise DegenerateArrangement(f"arc {a} is crossed by {len(ends)} quad edges")
        (q, k), (r, m) = ends
        qc, rc = quads[q].corners, quads[r].corners
        if (qc[k], qc[(k + 1) % 4]) != (rc[(m + 1) % 4], rc[m]):
            raise DegenerateArrangement(f"quads {q} and {r} are glued against orientation")
        gluing[(q, k)] = (r, m)
        gluing[(r, m)] = (q, k)

    rings = []
    for face in cells.faces:
        rings.append(tuple((p, quads[p].corner_index(face.index)) for p in face.corners))

    complex_ = ParallelogramComplex(cells=cells, quads=tuple(quads), lengths=vector,
                                    gluing=gluing, cone_rings=tuple(rings))
    if complex_.euler_characteristic != 2:
        raise DegenerateArrangement(f"glued complex has Euler characteristic {complex_.euler_characteristic}")
    degenerate = complex_.degenerate_quads
    if degenerate:
        logger.info(f"{len(degenerate)} of {complex_.n_quads} quads have a zero side")
    return complex_


# -------------------------------
# Cone points
# -------------------------------
def cone_angle_at(complex_: ParallelogramComplex, cone_point: int) -> float:
    """Sum of corner angles at a cone point; fully collapsed quads do not contribute"""
    total = 0.0
    for q, corner in complex_.cone_rings[cone_point]:
        if complex_.is_collapsed(q):
            continue
        total += complex_.quads[q].angles[corner]
    return total


def verify_cone_deficits(complex_: ParallelogramComplex, deficits: Optional[Sequence[float]] = None,
                         tolerances: Tolerances = TOLERANCES) -> DeficitAudit:
    arr = complex_.arrangement
    expected_deficits = arr.deficits if deficits is None else np.asarray(deficits, dtype=float)
    rows = []
    for face in complex_.cells.faces:
        theta = cone_angle_at(complex_, face.index)
        measured = TWO_PI - theta
        expected = float(sum(expected_deficits[int(label[:-1]) - 1] for label in face.labels))
        error = abs(measured - expected)
        rows.append(DeficitAuditRow(cone_point=face.index, labels=list(face.labels), cone_angle=theta,
                                    measured=measured, expected=expected, error=error,
                                    passed=error <= tolerances.audit))
    total = float(sum(row.measured for row in rows))

    flat = [(quad.index, c) for quad in complex_.quads for c, angle in enumerate(quad.angles)
            if angle >= math.pi - tolerances.flat_angle]
    if flat:
        logger.warning(f"{len(flat)} corner(s) have angles within {tolerances.flat_angle} of π")

    passed = all(row.passed for row in rows) and abs(total - 2 * TWO_PI) <= tolerances.total_deficit
    audit = DeficitAudit(rows=rows, total_deficit=total, tolerance=tolerances.audit, passed=passed, flat_corners=flat)
    logger.info(f"Deficit audit of {arr.name or '<unnamed>'}: {'pass' if passed else 'FAIL'} (total {total:.12f})")
    return audit


def supplement_residual(complex_: ParallelogramComplex) -> float:
    """Largest |θ + θ' − π| over adjacent corners of every quad"""
    return max(abs(q.angles[c] + q.angles[(c + 1) % 4] - math.pi) for q in complex_.quads for c in range(4))


def triangle_identities(arr: LoopArrangement, complex_: Optional[ParallelogramComplex] = None) -> Tuple[float, float]:
    """Largest residuals of the triangle angle sum and of the lune sum, over all loop triples"""
    complex_ = complex_ or build_complex(arr)
    cells = complex_.cells
    worst_angles, worst_lunes = 0.0, 0.0
    for cell in triangle_cells(arr):
        inside = lune_deficit(arr, triangle_labels(arr, cell))
        lune_sum = 0.0
        angle_sum = 0.0
        for t in range(3):
            a, b = [cell.loops[s] for s in range(3) if s != t]
            lune_sum += lune_deficit(arr, lune_vertices(arr, a, b, cell.witness, tol=0.0))
            base = _pair_point(arr, a, b)
            p = base if float(cells.points[base] @ cell.corners[t]) > 0 else base + 1
            sa, sb = cell.signs[cell.loops.index(a)], cell.signs[cell.loops.index(b)]
            face = cells.point_faces[p][(sa, sb)]
            corner_face_check(cells, p, face)
            quad = complex_.quads[p]
            angle_sum += quad.angles[quad.corner_index(face)]
        worst_lunes = max(worst_lunes, abs(lune_sum - 2 * inside - TWO_PI))
        worst_angles = max(worst_angles, abs(angle_sum - (TWO_PI - inside)))
    return worst_angles, worst_lunes


# -------------------------------
# Area
# -------------------------------
def total_area(complex_: ParallelogramComplex) -> float:
    area = 0.0
    for quad in complex_.quads:
        li, lj = complex_.side_lengths(quad.index)
        area += li * lj * math.sin(quad.angles[0])
    return area


@dataclass(frozen=True, eq=False)
class AreaForm:
    """area(l) = lᵀ Q l over the loop labels"""
    matrix: np.ndarray
    labels: Tuple[str, ...]
    deficits: Tuple[float, ...]

    @property
    def k(self) -> int:
        return len(self.labels)

    def value(self, l: Sequence[float]) -> float:
        v = np.asarray(l, dtype=float)
        return float(v @ self.matrix @ v)

    def bilinear(self, l: Sequence[float], m: Sequence[float]) -> float:
        return float(np.asarray(l, dtype=float) @ self.matrix @ np.asarray(m, dtype=float))

    def restrict(self, label: str) -> "AreaForm":
        """Form on the coordinate hyperplane l_label = 0"""
        keep = [i for i, name in enumerate(self.labels) if name != label]
        if len(keep) == self.k:
            raise KeyError(f"no coordinate {label!r}")
        return AreaForm(self.matrix[np.ix_(keep, keep)], tuple(self.labels[i] for i in keep), self.deficits)

    def same_as(self, other: "AreaForm", tol: float = 1e-12) -> bool:
        return self.labels == other.labels and self.matrix.shape == other.matrix.shape and bool(
            np.allclose(self.matrix, other.matrix, rtol=0.0, atol=tol))


def area_form(arr: LoopArrangement, deficits: Optional[Sequence[float]] = None) -> AreaForm:
    if deficits is not None:
        arr = arr.with_deficits(deficits)
    cells = cell_complex(arr)
    q = np.zeros((arr.k, arr.k))
    for i, j in itertools.combinations(range(arr.k), 2):
        p = _pair_point(arr, i, j)
        theta = corner_angle(arr, i, j, cells.point_faces[p][(1, 1)], cells)
        q[i, j] = q[j, i] = math.sin(theta)
    q.setflags(write=False)
    return AreaForm(q, tuple(arr.labels), tuple(float(d) for d in arr.deficits))


def signature(form: Union[AreaForm, np.ndarray], tolerances: Tolerances = TOLERANCES) -> SignatureReport:
    """Counts of eigenvalues above, below and within ±eigen_relative·‖Q‖ of zero"""
    matrix = form.matrix if isinstance(form, AreaForm) else np.asarray(form, dtype=float)
    if matrix.size == 0:
        return SignatureReport(positives=0, negatives=0, zeros=0, eigenvalues=[])
    if not np.allclose(matrix, matrix.T, rtol=0.0, atol=1e-12):
        raise ValueError("signature needs a symmetric matrix")
    eigenvalues = np.linalg.eigvalsh(matrix)
    eps = tolerances.eigen_relative * float(np.max(np.abs(eigenvalues)))
    positives = int(np.sum(eigenvalues > eps))
    negatives = int(np.sum(eigenvalues < -eps))
    return SignatureReport(positives=positives, negatives=negatives, zeros=len(eigenvalues) - positives - negatives,
                           eigenvalues=[float(e) for e in eigenvalues])
