# =============================================================================
# LOOP ARRANGEMENTS ON THE LABELED SPHERE
# =============================================================================

import itertools
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from core.config import TOLERANCES, Tolerances
from core.exceptions import DegenerateArrangement, IncompatibleArrangements, NotIncident, OnLoop
from schemas.reports import IssueKind, ValidationIssue, ValidationReport

logger = logging.getLogger(__name__)

Label = str
SignVector = Tuple[int, ...]
Bipartition = FrozenSet[FrozenSet[Label]]
LoopRef = Union[int, str]

TWO_PI = 2.0 * math.pi


def vertex_label(index: int, sign: int) -> Label:
    return f"{index + 1}{'+' if sign > 0 else '-'}"


def parse_label(label: Label) -> Tuple[int, int]:
    """'3-' -> (2, -1)"""
    if len(label) < 2 or label[-1] not in "+-" or not label[:-1].isdigit():
        raise ValueError(f"not a vertex label: {label!r}")
    return int(label[:-1]) - 1, (1 if label[-1] == "+" else -1)


def unit(vector, tol: float = TOLERANCES.unit_norm) -> np.ndarray:
    """Normalize; vectors already unit within tol are returned unchanged"""
    v = np.asarray(vector, dtype=float)
    norm = float(np.linalg.norm(v))
    if norm == 0.0 or not math.isfinite(norm):
        raise ValueError(f"cannot normalize {v.tolist()}")
    if abs(norm - 1.0) <= tol:
        return v.copy()
    return v / norm


def uniform_deficits(n_pairs: int) -> np.ndarray:
    return np.full(n_pairs, TWO_PI / n_pairs)


def tangent_basis(axis: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Right-handed (e1, e2) spanning the plane orthogonal to a unit axis"""
    helper = np.zeros(3)
    helper[int(np.argmin(np.abs(axis)))] = 1.0
    e1 = np.cross(axis, helper)
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(axis, e1)


# -------------------------------
# Value types
# -------------------------------
@dataclass(frozen=True, eq=False)
class LabeledVertexSet:
    positions: np.ndarray

    @classmethod
    def from_points(cls, points: Sequence[Sequence[float]]) -> "LabeledVertexSet":
        positions = np.array([unit(p) for p in points], dtype=float).reshape(-1, 3)
        positions.setflags(write=False)
        return cls(positions)

    @property
    def n_pairs(self) -> int:
        return len(self.positions)

    @property
    def labels(self) -> List[Label]:
        return [vertex_label(i, s) for i in range(self.n_pairs) for s in (1, -1)]

    def point(self, label: Label) -> np.ndarray:
        index, sign = parse_label(label)
        if index >= self.n_pairs:
            raise ValueError(f"label {label} out of range for {self.n_pairs} pairs")
        return sign * self.positions[index]

    def labeled_points(self) -> Iterator[Tuple[Label, int, int, np.ndarray]]:
        for i in range(self.n_pairs):
            for s in (1, -1):
                yield vertex_label(i, s), i, s, s * self.positions[i]

    def same_as(self, other: "LabeledVertexSet", tol: float = 1e-12) -> bool:
        return self.positions.shape == other.positions.shape and bool(
            np.allclose(self.positions, other.positions, rtol=0.0, atol=tol))


@dataclass(frozen=True, eq=False)
class OrientedLoop:
    label: str
    normal: np.ndarray

    @classmethod
    def create(cls, label: str, normal: Sequence[float]) -> "OrientedLoop":
        n = unit(normal)
        n.setflags(write=False)
        return cls(label, n)

    def flipped(self) -> "OrientedLoop":
        return OrientedLoop.create(self.label, -self.normal)


@dataclass(frozen=True, eq=False)
class LoopArrangement:
    vertices: LabeledVertexSet
    loops: Tuple[OrientedLoop, ...]
    deficits: np.ndarray
    name: str = ""

    @classmethod
    def create(
        cls,
        vertices: Union[LabeledVertexSet, Sequence[Sequence[float]]],
        loops: Sequence[Union[OrientedLoop, Tuple[str, Sequence[float]]]],
        deficits: Optional[Sequence[float]] = None,
        name: str = "",
    ) -> "LoopArrangement":
        if not isinstance(vertices, LabeledVertexSet):
            vertices = LabeledVertexSet.from_points(vertices)
        built = tuple(
            loop if isinstance(loop, OrientedLoop) else OrientedLoop.create(loop[0], loop[1])
            for loop in loops
        )
        labels = [loop.label for loop in built]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate loop labels: {labels}")
        if deficits is None:
            deficits = uniform_deficits(vertices.n_pairs)
        deficit_array = np.array(deficits, dtype=float)
        if deficit_array.shape != (vertices.n_pairs,):
            raise ValueError(f"expected {vertices.n_pairs} deficits, got {deficit_array.shape}")
        deficit_array.setflags(write=False)
        return cls(vertices, built, deficit_array, name)

    @property
    def n_pairs(self) -> int:
        return self.vertices.n_pairs

    @property
    def k(self) -> int:
        return len(self.loops)

    @property
    def labels(self) -> List[str]:
        return [loop.label for loop in self.loops]

    @cached_property
    def normals(self) -> np.ndarray:
        normals = np.array([loop.normal for loop in self.loops], dtype=float).reshape(-1, 3)
        normals.setflags(write=False)
        return normals

    def index(self, ref: LoopRef) -> int:
        if isinstance(ref, (int, np.integer)):
            if not 0 <= ref < self.k:
                raise IndexError(f"loop index {ref} out of range")
            return int(ref)
        try:
            return self.labels.index(ref)
        except ValueError:
            raise KeyError(f"no loop labeled {ref!r} in {self.labels}") from None

    def loop(self, ref: LoopRef) -> OrientedLoop:
        return self.loops[self.index(ref)]

    def deficit_of(self, label: Label) -> float:
        return float(self.deficits[parse_label(label)[0]])

    def replace_loop(self, ref: LoopRef, normal: Sequence[float], name: str = "") -> "LoopArrangement":
        i = self.index(ref)
        loops = list(self.loops)
        loops[i] = OrientedLoop.create(loops[i].label, normal)
        return LoopArrangement(self.vertices, tuple(loops), self.deficits, name)

    def with_deficits(self, deficits: Sequence[float]) -> "LoopArrangement":
        return LoopArrangement.create(self.vertices, self.loops, deficits, self.name)


# -------------------------------
# Sides and bipartitions
# -------------------------------
def loop_side(loop: OrientedLoop, p: Sequence[float], tol: float = TOLERANCES.vertex) -> int:
    """+1 when p is outside the loop (normal side), -1 inside"""
    d = float(np.dot(loop.normal, p))
    if abs(d) <= tol:
        raise OnLoop(f"point lies on loop {loop.label} (|n·p| = {abs(d):.3e})", loop=loop.label)
    return 1 if d > 0 else -1


def sign_vector(loop: OrientedLoop, vs: LabeledVertexSet, tol: float = TOLERANCES.vertex) -> SignVector:
    """Side of 1+, 2+, ..., N+ with respect to the loop"""
    return tuple(loop_side(loop, v, tol) for v in vs.positions)


def normalize_class(signs: Sequence[int]) -> SignVector:
    signs = tuple(int(s) for s in signs)
    return signs if signs[0] > 0 else tuple(-s for s in signs)


def loop_class(loop: OrientedLoop, vs: LabeledVertexSet, tol: float = TOLERANCES.vertex) -> SignVector:
    """Homotopy class rel. vertices as a sign vector with the first entry +1"""
    return normalize_class(sign_vector(loop, vs, tol))


def class_string(signs: Sequence[int]) -> str:
    return "".join("+" if s > 0 else "-" for s in signs)


def parse_class(text: str) -> SignVector:
    if not text or set(text) - {"+", "-"}:
        raise ValueError(f"class must be a string of '+' and '-', got {text!r}")
    return tuple(1 if c == "+" else -1 for c in text)


def bipartition_from_signs(signs: Sequence[int]) -> Bipartition:
    outside = frozenset(vertex_label(i, s) for i, s in enumerate(signs))
    inside = frozenset(vertex_label(i, -s) for i, s in enumerate(signs))
    return frozenset({outside, inside})


def signs_from_bipartition(part: Bipartition, n_pairs: int) -> SignVector:
    """Inverse of bipartition_from_signs; rejects bipartitions that are not antipodally symmetric"""
    sides = list(part)
    if len(sides) != 2:
        raise ValueError("a bipartition has exactly two sides")
    side = sides[0]
    signs = []
    for i in range(n_pairs):
        plus, minus = vertex_label(i, 1) in side, vertex_label(i, -1) in side
        if plus == minus:
            raise ValueError(f"bipartition is not antipodally symmetric at pair {i + 1}")
        signs.append(1 if plus else -1)
    if sides[1] != frozenset(vertex_label(i, -s) for i, s in enumerate(signs)):
        raise ValueError("bipartition sides are not antipodal images of each other")
    return normalize_class(signs)


def vertex_partition(loop: OrientedLoop, vs: LabeledVertexSet, tol: float = TOLERANCES.vertex) -> Bipartition:
    return bipartition_from_signs(sign_vector(loop, vs, tol))


# -------------------------------
# Validation
# -------------------------------
def validate(arr: LoopArrangement, tolerances: Tolerances = TOLERANCES) -> ValidationReport:
    issues: List[ValidationIssue] = []
    deficits = arr.deficits

    bad = [i for i, d in enumerate(deficits) if not d > 0]
    if bad:
        issues.append(ValidationIssue(kind=IssueKind.NON_POSITIVE_DEFICIT, indices=bad,
                                      message=f"deficits must be positive, got {[float(deficits[i]) for i in bad]}"))
    total = float(np.sum(deficits))
    if abs(total - TWO_PI) > tolerances.deficit_sum:
        issues.append(ValidationIssue(kind=IssueKind.DEFICIT_SUM, indices=[],
                                      message=f"deficits sum to {total!r}, expected 2π = {TWO_PI!r}"))

    for i, v in enumerate(arr.vertices.positions):
        if abs(float(np.linalg.norm(v)) - 1.0) > tolerances.unit_norm:
            issues.append(ValidationIssue(kind=IssueKind.NON_UNIT_VECTOR, indices=[i],
                                          message=f"vertex {i + 1}+ is not a unit vector"))
    for i, loop in enumerate(arr.loops):
        if abs(float(np.linalg.norm(loop.normal)) - 1.0) > tolerances.unit_norm:
            issues.append(ValidationIssue(kind=IssueKind.NON_UNIT_VECTOR, indices=[i],
                                          message=f"normal of loop {loop.label} is not a unit vector"))

    positions = arr.vertices.positions
    for i, j in itertools.combinations(range(arr.n_pairs), 2):
        if np.linalg.norm(np.cross(positions[i], positions[j])) <= tolerances.vertex:
            issues.append(ValidationIssue(kind=IssueKind.COINCIDENT_VERTICES, indices=[i, j],
                                          message=f"pairs {i + 1} and {j + 1} coincide up to antipode"))

    on_loop = set()
    for li, loop in enumerate(arr.loops):
        for vi, v in enumerate(positions):
            if abs(float(np.dot(loop.normal, v))) <= tolerances.vertex:
                on_loop.add(li)
                issues.append(ValidationIssue(kind=IssueKind.VERTEX_ON_LOOP, indices=[li, vi],
                                              message=f"loop {loop.label} passes through vertex {vi + 1}±"))

    normals = arr.normals
    for i, j in itertools.combinations(range(arr.k), 2):
        if np.linalg.norm(np.cross(normals[i], normals[j])) <= tolerances.concurrency:
            issues.append(ValidationIssue(kind=IssueKind.CONCURRENT_LOOPS, indices=[i, j],
                                          message=f"loops {arr.labels[i]} and {arr.labels[j]} coincide"))
    for i, j, m in itertools.combinations(range(arr.k), 3):
        det = float(np.linalg.det(np.stack([normals[i], normals[j], normals[m]])))
        if abs(det) <= tolerances.concurrency:
            issues.append(ValidationIssue(kind=IssueKind.CONCURRENT_LOOPS, indices=[i, j, m],
                                          message=f"loops {arr.labels[i]}, {arr.labels[j]}, {arr.labels[m]} are concurrent (det {det:.3e})"))

    classes = {i: loop_class(loop, arr.vertices, 0.0) for i, loop in enumerate(arr.loops) if i not in on_loop}
    for i, j in itertools.combinations(sorted(classes), 2):
        if classes[i] == classes[j]:
            issues.append(ValidationIssue(kind=IssueKind.HOMOTOPIC_PAIR, indices=[i, j],
                                          message=f"loops {arr.labels[i]} and {arr.labels[j]} induce the same bipartition"))

    if issues:
        logger.debug(f"Arrangement {arr.name or '<unnamed>'} has {len(issues)} issue(s)")
    return ValidationReport(issues=issues)


# -------------------------------
# Cell complex
# -------------------------------
@dataclass(frozen=True)
class Arc:
    index: int
    loop: int
    start: int
    end: int
    midpoint: np.ndarray
    plus_face: int
    minus_face: int

    @property
    def faces(self) -> Tuple[int, int]:
        return self.plus_face, self.minus_face

    @property
    def endpoints(self) -> Tuple[int, int]:
        return self.start, self.end


@dataclass(frozen=True)
class Face:
    index: int
    signs: SignVector
    arcs: Tuple[int, ...]
    corners: Tuple[int, ...]
    labels: Tuple[Label, ...]
    center: np.ndarray


@dataclass(frozen=True, eq=False)
class CellComplex:
    """Vertices are loop intersection points; arcs and faces are ordered counter-clockwise seen from outside.

    corners[t] of a face sits between arcs[t] and arcs[t + 1].
    """
    arrangement: LoopArrangement
    points: np.ndarray
    point_loops: Tuple[Tuple[int, int], ...]
    loop_points: Tuple[Tuple[int, ...], ...]
    arcs: Tuple[Arc, ...]
    faces: Tuple[Face, ...]
    point_faces: Tuple[Dict[Tuple[int, int], int], ...]
    face_by_signs: Dict[SignVector, int]
    label_faces: Dict[Label, int]

    @property
    def n_vertices(self) -> int:
        return len(self.points)

    @property
    def n_edges(self) -> int:
        return len(self.arcs)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_faces

    @staticmethod
    def point_antipode(p: int) -> int:
        return p ^ 1

    def face_antipode(self, f: int) -> int:
        return self.face_by_signs[tuple(-s for s in self.faces[f].signs)]

    @cached_property
    def _arc_lookup(self) -> Dict[Tuple[int, int], int]:
        return {(arc.loop, arc.start): arc.index for arc in self.arcs}

    def arc_antipode(self, a: int) -> int:
        arc = self.arcs[a]
        return self._arc_lookup[(arc.loop, arc.start ^ 1)]

    def signs_of(self, x: Sequence[float]) -> SignVector:
        return tuple(1 if d >= 0 else -1 for d in self.arrangement.normals @ np.asarray(x, dtype=float))

    def face_of(self, x: Sequence[float]) -> int:
        return self.face_by_signs[self.signs_of(x)]

    def corner_faces(self, p: int) -> Dict[Tuple[int, int], int]:
        return self.point_faces[p]


def _loop_angles(normal: np.ndarray, pts: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    u, w = tangent_basis(normal)
    return np.mod(np.arctan2(pts @ w, pts @ u), TWO_PI), u, w


def cell_complex(arr: LoopArrangement, tolerances: Tolerances = TOLERANCES) -> CellComplex:
    report = validate(arr, tolerances)
    if not report.ok:
        raise DegenerateArrangement(f"arrangement is not valid: {report.issues[0].message}",
                                    issues=[issue.model_dump(mode="json") for issue in report.issues])
    if arr.k < 3:
        raise DegenerateArrangement(f"need at least three loops, got {arr.k}")

    normals = arr.normals
    k = arr.k
    points: List[np.ndarray] = []
    point_loops: List[Tuple[int, int]] = []
    for i, j in itertools.combinations(range(k), 2):
        p = unit(np.cross(normals[i], normals[j]))
        points.extend([p, -p])
        point_loops.extend([(i, j), (i, j)])
    point_array = np.array(points)

    on_loop: List[List[int]] = [[] for _ in range(k)]
    for pid, (i, j) in enumerate(point_loops):
        on_loop[i].append(pid)
        on_loop[j].append(pid)

    def signs_at(x: np.ndarray, skip: Sequence[int]) -> List[int]:
        out = []
        for m, d in enumerate(normals @ x):
            if m in skip:
                out.append(0)
                continue
            if d == 0.0:
                raise DegenerateArrangement(f"point {x.tolist()} lies on loop {arr.labels[m]}")
            out.append(1 if d > 0 else -1)
        return out

    loop_points: List[Tuple[int, ...]] = []
    raw_arcs: List[Tuple[int, int, int, np.ndarray, SignVector, SignVector]] = []
    for i in range(k):
        ids = on_loop[i]
        angles, u, w = _loop_angles(normals[i], point_array[ids])
        order = np.argsort(angles, kind="stable")
        ordered = [ids[t] for t in order]
        ordered_angles = angles[order]
        loop_points.append(tuple(ordered))
        m = len(ordered)
        for t in range(m):
            a0 = ordered_angles[t]
            span = (ordered_angles[(t + 1) % m] - a0) % TWO_PI
            mid_angle = a0 + 0.5 * span
            mid = math.cos(mid_angle) * u + math.sin(mid_angle) * w
            signs = signs_at(mid, (i,))
            plus = list(signs)
            plus[i] = 1
            minus = list(signs)
            minus[i] = -1
            raw_arcs.append((i, ordered[t], ordered[(t + 1) % m], mid, tuple(plus), tuple(minus)))

    sign_set = sorted({arc[4] for arc in raw_arcs} | {arc[5] for arc in raw_arcs})
    face_by_signs = {signs: idx for idx, signs in enumerate(sign_set)}
    arcs = tuple(
        Arc(index=a, loop=i, start=s, end=e, midpoint=mid,
            plus_face=face_by_signs[plus], minus_face=face_by_signs[minus])
        for a, (i, s, e, mid, plus, minus) in enumerate(raw_arcs)
    )

    point_faces: List[Dict[Tuple[int, int], int]] = []
    for pid, (i, j) in enumerate(point_loops):
        base = signs_at(point_array[pid], (i, j))
        quadrants = {}
        for si, sj in itertools.product((1, -1), repeat=2):
            signs = list(base)
            signs[i], signs[j] = si, sj
            face = face_by_signs.get(tuple(signs))
            if face is None:
                raise DegenerateArrangement(f"quadrant {(si, sj)} at point {pid} is not a face")
            quadrants[(si, sj)] = face
        point_faces.append(quadrants)

    label_faces: Dict[Label, int] = {}
    face_labels: Dict[int, List[Label]] = {}
    for label, _, _, position in arr.vertices.labeled_points():
        f = face_by_signs[tuple(signs_at(position, ()))]
        label_faces[label] = f
        face_labels.setdefault(f, []).append(label)

    face_arcs: Dict[int, List[int]] = {}
    for arc in arcs:
        face_arcs.setdefault(arc.plus_face, []).append(arc.index)
        face_arcs.setdefault(arc.minus_face, []).append(arc.index)

    faces: List[Face] = []
    for f, signs in enumerate(sign_set):
        incident = face_arcs[f]
        interior = unit(np.sum([arcs[a].midpoint for a in incident], axis=0))
        e1, e2 = tangent_basis(interior)
        azimuth = [math.atan2(float(arcs[a].midpoint @ e2), float(arcs[a].midpoint @ e1)) for a in incident]
        ordered = [incident[t] for t in np.argsort(azimuth, kind="stable")]
        corners = []
        for t, a in enumerate(ordered):
            nxt = ordered[(t + 1) % len(ordered)]
            shared = set(arcs[a].endpoints) & set(arcs[nxt].endpoints)
            if len(shared) != 1:
                raise DegenerateArrangement(f"face {f} boundary is not a simple polygon")
            corners.append(shared.pop())
        labels = tuple(face_labels.get(f, ()))
        center = arr.vertices.point(labels[0]) if len(labels) == 1 else unit(np.sum(point_array[corners], axis=0))
        faces.append(Face(index=f, signs=signs, arcs=tuple(ordered), corners=tuple(corners),
                          labels=labels, center=center))

    cx = CellComplex(
        arrangement=arr,
        points=point_array,
        point_loops=tuple(point_loops),
        loop_points=tuple(loop_points),
        arcs=arcs,
        faces=tuple(faces),
        point_faces=tuple(point_faces),
        face_by_signs=face_by_signs,
        label_faces=label_faces,
    )
    if cx.euler_characteristic != 2:
        raise DegenerateArrangement(f"Euler characteristic {cx.euler_characteristic}, expected 2")
    logger.debug(f"Cell complex of {arr.name or '<unnamed>'}: V={cx.n_vertices} E={cx.n_edges} F={cx.n_faces}")
    return cx


# -------------------------------
# Lunes, adjacency, triangles
# -------------------------------
def lune_labels(arr: LoopArrangement, i: int, j: int, si: int, sj: int) -> FrozenSet[Label]:
    """Labels strictly inside {si n_i·x > 0, sj n_j·x > 0}"""
    ni, nj = arr.normals[i], arr.normals[j]
    return frozenset(
        label for label, _, _, v in arr.vertices.labeled_points()
        if si * float(ni @ v) > 0 and sj * float(nj @ v) > 0
    )


def lune_vertices(arr: LoopArrangement, loop_i: LoopRef, loop_j: LoopRef, witness: Sequence[float],
                  tol: float = TOLERANCES.vertex) -> FrozenSet[Label]:
    i, j = arr.index(loop_i), arr.index(loop_j)
    if i == j:
        raise ValueError("a lune needs two distinct loops")
    si = loop_side(arr.loops[i], witness, tol)
    sj = loop_side(arr.loops[j], witness, tol)
    return lune_labels(arr, i, j, si, sj)


def lune_deficit(arr: LoopArrangement, labels: FrozenSet[Label]) -> float:
    return float(sum(arr.deficit_of(label) for label in labels))


def are_adjacent(arr_a: LoopArrangement, arr_b: LoopArrangement) -> Optional[str]:
    """Label of the only loop whose bipartition differs, or None"""
    if not arr_a.vertices.same_as(arr_b.vertices):
        raise IncompatibleArrangements("arrangements live on different vertex sets")
    if arr_a.labels != arr_b.labels:
        raise IncompatibleArrangements(f"loop labels differ: {arr_a.labels} vs {arr_b.labels}")
    if not np.allclose(arr_a.deficits, arr_b.deficits, rtol=0.0, atol=1e-12):
        raise IncompatibleArrangements("arrangements carry different deficits")
    differing = [
        loop_a.label for loop_a, loop_b in zip(arr_a.loops, arr_b.loops)
        if loop_class(loop_a, arr_a.vertices) != loop_class(loop_b, arr_b.vertices)
    ]
    return differing[0] if len(differing) == 1 else None


@dataclass(frozen=True)
class TriangleCell:
    loops: Tuple[int, int, int]
    signs: Tuple[int, int, int]
    corners: Tuple[np.ndarray, np.ndarray, np.ndarray]

    @property
    def witness(self) -> np.ndarray:
        return unit(np.sum(self.corners, axis=0))


def triangle_cells(arr: LoopArrangement) -> Iterator[TriangleCell]:
    """The 8 triangles cut by every loop triple; corners[t] is opposite the side on loops[t]"""
    normals = arr.normals
    for tri in itertools.combinations(range(arr.k), 3):
        for signs in itertools.product((1, -1), repeat=3):
            corners = []
            for t in range(3):
                a, b = [tri[s] for s in range(3) if s != t]
                p = unit(np.cross(normals[a], normals[b]))
                if signs[t] * float(normals[tri[t]] @ p) < 0:
                    p = -p
                corners.append(p)
            yield TriangleCell(loops=tri, signs=signs, corners=tuple(corners))


def triangle_labels(arr: LoopArrangement, cell: TriangleCell) -> FrozenSet[Label]:
    normals = arr.normals
    return frozenset(
        label for label, _, _, v in arr.vertices.labeled_points()
        if all(s * float(normals[m] @ v) > 0 for m, s in zip(cell.loops, cell.signs))
    )


# -------------------------------
# Combinatorial signature
# -------------------------------
def class_matrix(arr: LoopArrangement) -> np.ndarray:
    return np.array([loop_class(loop, arr.vertices) for loop in arr.loops], dtype=int).reshape(arr.k, arr.n_pairs)


def combinatorial_signature(arr: LoopArrangement) -> Tuple[int, int, Tuple[Tuple[int, ...], ...]]:
    """Lexicographically least class matrix over vertex relabelings and i+/i- swaps"""
    rows = class_matrix(arr)
    n = arr.n_pairs
    best: Optional[Tuple[Tuple[int, ...], ...]] = None
    for perm in itertools.permutations(range(n)):
        permuted = rows[:, perm]
        for flips in itertools.product((1, -1), repeat=n):
            m = permuted * np.array(flips)
            m = m * m[:, :1]
            candidate = tuple(sorted(tuple(int(x) for x in row) for row in m))
            if best is None or candidate < best:
                best = candidate
    return n, arr.k, best or ()


def corner_face_check(cx: CellComplex, p: int, face: int) -> Tuple[int, int]:
    """Quadrant (si, sj) of face at point p"""
    for quadrant, f in cx.point_faces[p].items():
        if f == face:
            return quadrant
    raise NotIncident(f"face {face} is not a corner of intersection point {p}", point=p, face=face)
