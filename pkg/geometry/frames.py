# =============================================================================
# FRAME EDGES: QUAD PATHS AND TRACED CURVES
# =============================================================================

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from core.exceptions import BrokenPath
from geometry.arrangement import tangent_basis, unit
from geometry.decomposition import ParallelogramComplex
from schemas.surface import FrameEdgeSchema
from utils.validators import validate_vertex_label

logger = logging.getLogger(__name__)

SAMPLE_STEP = 0.004
END_OFFSET = 1e-7
CENTER_HIT = 1e-6
MIN_INTERVAL = 1e-13


@dataclass(frozen=True)
class FrameEdge:
    """Quad path from a corner of `source` (a cone point) to a corner of `target`"""
    source: int
    target: int
    path: Tuple[int, ...]

    def to_schema(self) -> FrameEdgeSchema:
        return FrameEdgeSchema(source=self.source, target=self.target, path=list(self.path))


@dataclass(frozen=True)
class FrameSpec:
    edges: Tuple[FrameEdge, ...]
    name: str = ""

    def __len__(self) -> int:
        return len(self.edges)

    def to_schema(self) -> List[FrameEdgeSchema]:
        return [edge.to_schema() for edge in self.edges]


FrameInput = Union[FrameSpec, Sequence[Union[FrameEdge, FrameEdgeSchema, Mapping]]]


# -------------------------------
# Kite decomposition
# -------------------------------
class QuadLocator:
    """Finds the quad whose region on the sphere holds a point.

    Each face is cut by rays from its center to its arc midpoints; the piece around corner p
    belongs to the quad of p.
    """

    def __init__(self, complex_: ParallelogramComplex):
        self.complex = complex_
        self.cells = complex_.cells
        self._frames: Dict[int, Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]] = {}
        for face in self.cells.faces:
            e1, e2 = tangent_basis(face.center)
            mids = np.array([self.cells.arcs[a].midpoint for a in face.arcs])
            azimuths = np.arctan2(mids @ e2, mids @ e1)
            relative = np.mod(azimuths - azimuths[0], 2 * math.pi)
            self._frames[face.index] = (e1, e2, azimuths, relative)

    def locate(self, x: np.ndarray) -> int:
        face_id = self.cells.face_of(x)
        face = self.cells.faces[face_id]
        e1, e2, azimuths, relative = self._frames[face_id]
        az = math.atan2(float(x @ e2), float(x @ e1))
        r = (az - azimuths[0]) % (2 * math.pi)
        t = int(np.searchsorted(relative, r, side="right")) - 1
        return face.corners[max(t, 0)]

    @cached_property
    def _adjacent(self) -> Dict[int, set]:
        return {q: {self.complex.gluing[(q, k)][0] for k in range(4)} for q in range(self.complex.n_quads)}

    def adjacent(self, q: int, r: int) -> bool:
        return r in self._adjacent[q]


# -------------------------------
# Curves on the sphere
# -------------------------------
def great_circle_curve(points: Sequence[np.ndarray]) -> Tuple[Callable[[float], np.ndarray], float]:
    """Piecewise great-circle curve through points, parametrized on [0, 1] by arc length"""
    segments = []
    for u, w in zip(points, points[1:]):
        omega = math.acos(max(-1.0, min(1.0, float(u @ w))))
        if math.pi - omega < 1e-9:
            raise BrokenPath("consecutive curve points are antipodal; add a waypoint")
        segments.append((u, w, omega))
    total = sum(seg[2] for seg in segments)
    if total == 0.0:
        raise BrokenPath("curve has zero length")

    def at(t: float) -> np.ndarray:
        s = min(max(t, 0.0), 1.0) * total
        last = len(segments) - 1
        for idx, (u, w, omega) in enumerate(segments):
            if s <= omega or idx == last:
                if omega == 0.0:
                    return u
                f = min(s / omega, 1.0)
                return (math.sin((1 - f) * omega) * u + math.sin(f * omega) * w) / math.sin(omega)
            s -= omega
        return segments[-1][1]

    return at, total


def _cancel_backtracks(path: List[int]) -> List[int]:
    out: List[int] = []
    for q in path:
        if out and out[-1] == q:
            continue
        if len(out) >= 2 and out[-2] == q:
            out.pop()
            continue
        out.append(q)
    return out


class CurveTracer:
    def __init__(self, complex_: ParallelogramComplex):
        self.complex = complex_
        self.cells = complex_.cells
        self.locator = QuadLocator(complex_)

    def _walk_around(self, face_id: int, qa: int, qb: int) -> List[int]:
        ring = list(self.cells.faces[face_id].corners)
        ia, ib = ring.index(qa), ring.index(qb)
        m = len(ring)
        forward = (ib - ia) % m
        if forward <= m - forward:
            return [ring[(ia + s) % m] for s in range(1, forward)]
        return [ring[(ia - s) % m] for s in range(1, m - forward)]

    def _bridge(self, x: np.ndarray, qa: int, qb: int) -> List[int]:
        common = set(self.complex.quads[qa].corners) & set(self.complex.quads[qb].corners)
        for face_id in sorted(common):
            face = self.cells.faces[face_id]
            if np.linalg.norm(np.cross(x, face.center)) <= CENTER_HIT and float(x @ face.center) > 0:
                if face.labels:
                    raise BrokenPath(f"curve runs through labeled vertex {face.labels[0]}", face=face_id)
                logger.debug(f"Curve crosses the center of unlabeled face {face_id}; walking around it")
                return self._walk_around(face_id, qa, qb)
        raise BrokenPath(f"cannot connect quads {qa} and {qb} along the curve")

    def _refine(self, curve, ta: float, qa: int, tb: float, qb: int) -> List[int]:
        if qa == qb or self.locator.adjacent(qa, qb):
            return []
        if tb - ta < MIN_INTERVAL:
            return self._bridge(curve(0.5 * (ta + tb)), qa, qb)
        tm = 0.5 * (ta + tb)
        qm = self.locator.locate(curve(tm))
        return self._refine(curve, ta, qa, tm, qm) + [qm] + self._refine(curve, tm, qm, tb, qb)

    def trace(self, source: str, target: str, via: Sequence[Sequence[float]] = ()) -> FrameEdge:
        vs = self.cells.arrangement.vertices
        for label in (source, target):
            result = validate_vertex_label(label, vs.n_pairs)
            if not result["valid"]:
                raise BrokenPath(result["message"], label=label)
        try:
            src_face, tgt_face = self.cells.label_faces[source], self.cells.label_faces[target]
        except KeyError as e:
            raise BrokenPath(f"unknown vertex label {e.args[0]!r}") from e
        if source == target and not via:
            return FrameEdge(src_face, tgt_face, ())
        points = [vs.point(source), *(unit(p) for p in via), vs.point(target)]
        curve, total = great_circle_curve(points)

        count = max(64, int(math.ceil(total / SAMPLE_STEP)))
        offset = END_OFFSET / total
        ts = np.linspace(offset, 1.0 - offset, count + 1)
        located = [self.locator.locate(curve(float(t))) for t in ts]

        path = [located[0]]
        for t0, t1, q0, q1 in zip(ts, ts[1:], located, located[1:]):
            path.extend(self._refine(curve, float(t0), q0, float(t1), q1))
            path.append(q1)
        path = _cancel_backtracks(path)

        quads = self.complex.quads
        if src_face not in quads[path[0]].corners or tgt_face not in quads[path[-1]].corners:
            raise BrokenPath(f"traced path {source}->{target} does not start and end at the cone points")
        logger.debug(f"Traced {source}->{target} through {len(path)} quads")
        return FrameEdge(src_face, tgt_face, tuple(path))


# -------------------------------
# Resolution of frame inputs
# -------------------------------
def resolve_frame(complex_: ParallelogramComplex, frame: FrameInput, name: str = "") -> FrameSpec:
    """Turn quad paths and traced curves into a FrameSpec on this complex"""
    if isinstance(frame, FrameSpec):
        return frame
    tracer: Optional[CurveTracer] = None
    edges: List[FrameEdge] = []
    for entry in frame:
        if isinstance(entry, FrameEdge):
            edges.append(entry)
            continue
        schema = entry if isinstance(entry, FrameEdgeSchema) else FrameEdgeSchema.model_validate(entry)
        if isinstance(schema.source, int):
            edges.append(FrameEdge(schema.source, int(schema.target), tuple(schema.path or ())))
            continue
        tracer = tracer or CurveTracer(complex_)
        edges.append(tracer.trace(schema.source, str(schema.target), schema.via or ()))
    return FrameSpec(tuple(edges), name)


def check_path(complex_: ParallelogramComplex, edge: FrameEdge) -> None:
    """Raise BrokenPath unless the path is a chain of glued quads between the two cone points"""
    if not edge.path:
        if edge.source != edge.target:
            raise BrokenPath(f"empty path between distinct cone points {edge.source} and {edge.target}")
        return
    n = complex_.n_quads
    if any(not 0 <= q < n for q in edge.path):
        raise BrokenPath(f"path {list(edge.path)} names quads outside 0..{n - 1}")
    if edge.source not in complex_.quads[edge.path[0]].corners:
        raise BrokenPath(f"cone point {edge.source} is not a corner of quad {edge.path[0]}")
    if edge.target not in complex_.quads[edge.path[-1]].corners:
        raise BrokenPath(f"cone point {edge.target} is not a corner of quad {edge.path[-1]}")
    for q, r in zip(edge.path, edge.path[1:]):
        if complex_.shared_edge(q, r) is None:
            raise BrokenPath(f"quads {q} and {r} are not glued", quads=[q, r])
