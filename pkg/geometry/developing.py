# =============================================================================
# DEVELOPING MAP, LOCAL FRAMES AND SIDE-OF-FACE TESTS
# =============================================================================

import logging
import math
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from core.config import TOLERANCES, Tolerances
from core.exceptions import DegenerateBase, FrameMismatch, NotAdjacent, NotAFrame, SingularFrame
from geometry.arrangement import LoopArrangement, are_adjacent
from geometry.decomposition import ParallelogramComplex, build_complex
from geometry.frames import FrameInput, check_path, resolve_frame
from schemas.reports import SideComparison, SideVerdict

logger = logging.getLogger(__name__)

TREE_POLICIES = ("bfs", "dfs")


def rotation(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def wrap_angle(angle: float) -> float:
    """Into (-π, π]"""
    wrapped = math.remainder(angle, 2 * math.pi)
    return math.pi if wrapped == -math.pi else wrapped


@dataclass(frozen=True)
class Placement:
    """Rigid motion x ↦ R(angle)·x + offset taking a quad's own frame to the plane"""
    angle: float
    offset: np.ndarray

    def apply(self, points: np.ndarray) -> np.ndarray:
        return points @ rotation(self.angle).T + self.offset


IDENTITY = Placement(0.0, np.zeros(2))


def glue(complex_: ParallelogramComplex, placement: Placement, q: int, k: int) -> Tuple[int, Placement]:
    """Placement of the quad glued to edge k of q, given q's placement"""
    r, m = complex_.gluing[(q, k)]
    quad, other = complex_.quads[q], complex_.quads[r]
    angle = placement.angle + quad.headings[k] - other.headings[m] + math.pi
    anchor = placement.apply(complex_.local_corners(q)[(k + 1) % 4])
    offset = anchor - rotation(angle) @ complex_.local_corners(r)[m]
    return r, Placement(wrap_angle(angle), offset)


# -------------------------------
# Unfolding
# -------------------------------
@dataclass(frozen=True, eq=False)
class DevelopedComplex:
    complex: ParallelogramComplex
    base: int
    policy: str
    parents: Dict[int, Optional[Tuple[int, int]]]
    placements: Tuple[Placement, ...]
    positions: np.ndarray

    @property
    def n_quads(self) -> int:
        return len(self.placements)

    def corner(self, q: int, face: int) -> np.ndarray:
        return self.positions[q, self.complex.quads[q].corner_index(face)]

    def polygon_area(self, q: int) -> float:
        x, y = self.positions[q, :, 0], self.positions[q, :, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))

    def total_area(self) -> float:
        return sum(self.polygon_area(q) for q in range(self.n_quads))


def unfold(complex_: ParallelogramComplex, base_quad: int = 0, tree_policy: str = "bfs",
           check_base: bool = True) -> DevelopedComplex:
    """Lay every quad out in the plane along a spanning tree of the gluing graph"""
    if tree_policy not in TREE_POLICIES:
        raise ValueError(f"unknown tree policy {tree_policy!r}, expected one of {TREE_POLICIES}")
    if not 0 <= base_quad < complex_.n_quads:
        raise ValueError(f"base quad {base_quad} out of range")
    if check_base and complex_.is_degenerate(base_quad):
        raise DegenerateBase(f"base quad {base_quad} has a zero side", quad=base_quad)

    placements: Dict[int, Placement] = {base_quad: IDENTITY}
    parents: Dict[int, Optional[Tuple[int, int]]] = {base_quad: None}
    frontier = deque([base_quad])
    while frontier:
        q = frontier.popleft() if tree_policy == "bfs" else frontier.pop()
        for k in range(4):
            r, _ = complex_.gluing[(q, k)]
            if r in placements:
                continue
            _, placements[r] = glue(complex_, placements[q], q, k)
            parents[r] = (q, k)
            frontier.append(r)

    if len(placements) != complex_.n_quads:
        raise ValueError("gluing graph is not connected")
    ordered = tuple(placements[q] for q in range(complex_.n_quads))
    positions = np.stack([ordered[q].apply(complex_.local_corners(q)) for q in range(complex_.n_quads)])
    return DevelopedComplex(complex_, base_quad, tree_policy, parents, ordered, positions)


def holonomy(complex_: ParallelogramComplex, cone_point: int) -> float:
    """Rotation of the closing map after developing once around a cone point, in (-π, π]"""
    face = complex_.cells.faces[cone_point]
    ring = list(face.corners)
    placement = IDENTITY
    q = ring[0]
    for t in range(len(ring)):
        arc = face.arcs[(t + 1) % len(ring)]
        k = complex_.quads[q].edge_arcs.index(arc)
        q, placement = glue(complex_, placement, q, k)
    if q != ring[0]:
        raise ValueError(f"ring around cone point {cone_point} does not close")
    return wrap_angle(placement.angle)


# -------------------------------
# Frames
# -------------------------------
@dataclass(frozen=True, eq=False)
class FrameMatrix:
    """Z = M·l with rows (x_1, y_1, x_2, y_2, ...) and one column per loop"""
    matrix: np.ndarray
    labels: Tuple[str, ...]
    arrangement: str = ""
    frame: str = ""

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.matrix))

    def evaluate(self, lengths: Sequence[float]) -> np.ndarray:
        return self.matrix @ np.asarray(lengths, dtype=float)

    def is_singular(self, tolerances: Tolerances = TOLERANCES) -> bool:
        n = self.matrix.shape[0]
        norm = float(np.linalg.norm(self.matrix, 2))
        return abs(self.determinant) <= tolerances.det_relative * norm ** n


def _develop_path(complex_: ParallelogramComplex, dev: DevelopedComplex, path: Sequence[int]) -> List[Placement]:
    placement = dev.placements[path[0]]
    out = [placement]
    for q, r in zip(path, path[1:]):
        k, _ = complex_.shared_edge(q, r)
        _, placement = glue(complex_, placement, q, k)
        out.append(placement)
    return out


def frame_vectors(complex_: ParallelogramComplex, dev: DevelopedComplex, spec: FrameInput) -> np.ndarray:
    """Developed displacement of every frame edge, shape (n, 2)"""
    spec = resolve_frame(complex_, spec)
    out = np.zeros((len(spec), 2))
    for row, edge in enumerate(spec.edges):
        check_path(complex_, edge)
        if not edge.path:
            continue
        placements = _develop_path(complex_, dev, edge.path)
        first, last = complex_.quads[edge.path[0]], complex_.quads[edge.path[-1]]
        start = placements[0].apply(complex_.local_corners(first.index)[first.corner_index(edge.source)])
        end = placements[-1].apply(complex_.local_corners(last.index)[last.corner_index(edge.target)])
        out[row] = end - start
    return out


def frame_matrix(arr: LoopArrangement, deficits: Optional[Sequence[float]], spec: FrameInput,
                 tree_policy: str = "bfs", complex_: Optional[ParallelogramComplex] = None) -> FrameMatrix:
    """Column j holds the frame vectors at unit length on loop j and zero elsewhere"""
    if complex_ is None:
        arr = arr.with_deficits(deficits) if deficits is not None else arr
        complex_ = build_complex(arr)
    arr = complex_.arrangement
    spec = resolve_frame(complex_, spec)
    if 2 * len(spec) != arr.k:
        raise NotAFrame(f"{len(spec)} frame vectors cannot coordinatize {arr.k} edge lengths")

    matrix = np.zeros((2 * len(spec), arr.k))
    for j in range(arr.k):
        basis = np.zeros(arr.k)
        basis[j] = 1.0
        at_basis = complex_.with_lengths(basis)
        dev = unfold(at_basis, tree_policy=tree_policy, check_base=False)
        matrix[:, j] = frame_vectors(at_basis, dev, spec).reshape(-1)

    zero = [arr.labels[j] for j in range(arr.k) if np.linalg.norm(matrix[:, j]) <= 1e-12]
    if zero:
        raise NotAFrame(f"no frame edge crosses loop(s) {zero}", columns=zero)
    matrix.setflags(write=False)
    logger.debug(f"Frame matrix of {arr.name or '<unnamed>'}: det {np.linalg.det(matrix):.6g}")
    return FrameMatrix(matrix, tuple(arr.labels), arr.name, spec.name)


def coordinates_from_frame(m: FrameMatrix, z: Union[np.ndarray, Sequence[float]],
                           tolerances: Tolerances = TOLERANCES) -> Dict[str, float]:
    """Solve M·l = Z for the edge lengths"""
    if m.is_singular(tolerances):
        raise SingularFrame(f"frame matrix is singular (det {m.determinant:.3e})", determinant=m.determinant)
    rhs = np.asarray(z, dtype=float).reshape(-1)
    if rhs.shape != (m.matrix.shape[0],):
        raise ValueError(f"expected {m.matrix.shape[0]} frame coordinates, got {rhs.shape[0]}")
    solution = np.linalg.solve(m.matrix, rhs)
    return {label: float(value) for label, value in zip(m.labels, solution)}


def _align_block(a: np.ndarray, b: np.ndarray) -> Tuple[float, np.ndarray]:
    """Plane rotation R minimizing ‖a − R b‖ and the aligned b"""
    s = a @ b.T
    angle = math.atan2(s[1, 0] - s[0, 1], s[0, 0] + s[1, 1])
    return angle, rotation(angle) @ b


def compare_face_sides(arr_a: LoopArrangement, arr_b: LoopArrangement,
                       shared_frame: Union[FrameInput, Tuple[FrameInput, FrameInput]], loop_label: str,
                       tolerances: Tolerances = TOLERANCES, tree_policy: str = "bfs") -> SideComparison:
    """Whether two adjacent charts sit on the same side of the face where loop_label collapses"""
    label = are_adjacent(arr_a, arr_b)
    if label is None or label != loop_label:
        raise NotAdjacent(f"arrangements are not adjacent across loop {loop_label!r} (differing loop: {label})",
                          loop=loop_label)
    if isinstance(shared_frame, tuple) and len(shared_frame) == 2:
        frame_a, frame_b = shared_frame
    else:
        frame_a = frame_b = shared_frame

    m_a = frame_matrix(arr_a, None, frame_a, tree_policy)
    m_b = frame_matrix(arr_b, None, frame_b, tree_policy)
    for name, m in (("first", m_a), ("second", m_b)):
        if m.is_singular(tolerances):
            raise SingularFrame(f"frame is singular on the {name} arrangement (det {m.determinant:.3e})")

    shared = [j for j, name in enumerate(arr_a.labels) if name != loop_label]
    residual = 0.0
    for row in range(0, m_a.matrix.shape[0], 2):
        block_a = m_a.matrix[row:row + 2, shared]
        _, aligned = _align_block(block_a, m_b.matrix[row:row + 2, shared])
        residual = max(residual, float(np.max(np.abs(block_a - aligned))))
    if residual > tolerances.column_match:
        raise FrameMismatch(f"frames disagree on the shared columns by {residual:.3e}", residual=residual)

    det_a, det_b = m_a.determinant, m_b.determinant
    verdict = SideVerdict.DIFFERENT if det_a * det_b < 0 else SideVerdict.SAME
    logger.info(f"Side test across {loop_label}: det {det_a:.6g} vs {det_b:.6g} -> {verdict.value}")
    return SideComparison(verdict=verdict, loop=loop_label, det_a=det_a, det_b=det_b, residual=residual)
