# =============================================================================
# JSON FILES: ARRANGEMENTS, SURFACES, FRAMES, PROJECTS
# =============================================================================

import json
import logging
import math
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Type, TypeVar, Union

import pydantic
from pydantic import BaseModel

from core.config import TOLERANCES, Tolerances
from core.exceptions import ParseError, ValidationError
from geometry.arrangement import LoopArrangement, validate
from geometry.frames import FrameSpec
from schemas.arrangement import ArrangementSchema, LoopSchema, SearchSpecSchema
from schemas.catalog import ProjectFileSchema
from schemas.reports import IssueKind, ValidationReport
from schemas.surface import FrameEdgeSchema, FramePairSchema, SurfaceSchema

logger = logging.getLogger(__name__)

Model = TypeVar("Model", bound=BaseModel)
# Resolves the string form of an embedded arrangement ("catalog:N4-A1" or a path)
ArrangementResolver = Callable[[str], LoopArrangement]


# -------------------------------
# Positioned decoding
# -------------------------------
def _position(text: str, offset: int) -> Tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    column = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, column


def _locate(text: str, loc: Sequence[Union[int, str]]) -> Tuple[int, int]:
    """Best position for a pydantic error location: the last key named in it"""
    keys = [part for part in loc if isinstance(part, str)]
    for key in reversed(keys):
        offset = text.find(json.dumps(key))
        if offset >= 0:
            return _position(text, offset)
    return 1, 1


def load_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.lineno, e.colno, e.msg) from e


def load_model(text: str, model: Type[Model]) -> Model:
    data = load_json(text)
    try:
        return model.model_validate(data)
    except pydantic.ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(part) for part in first["loc"]) or "<root>"
        line, column = _locate(text, first["loc"])
        raise ParseError(line, column, f"{where}: {first['msg']}") from e


def dumps(data: Any) -> str:
    """Canonical text: schema key order, shortest round-trip reals, trailing newline"""
    return json.dumps(data, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


# -------------------------------
# Arrangements
# -------------------------------
def arrangement_from_schema(schema: ArrangementSchema, name: str = "",
                            tolerances: Tolerances = TOLERANCES) -> LoopArrangement:
    """Build the arrangement; a deficit sum off 2π is surfaced as ValidationError"""
    arr = LoopArrangement.create(schema.vertices, [(loop.label, loop.normal) for loop in schema.loops],
                                 schema.deficits, name)
    total = math.fsum(schema.deficits)
    if abs(total - 2 * math.pi) > tolerances.deficit_sum:
        report = validate(arr, tolerances)
        issues = [issue for issue in report.issues if issue.kind == IssueKind.DEFICIT_SUM]
        raise ValidationError(f"deficits sum to {total!r}, expected 2π", ValidationReport(issues=issues))
    return arr


def arrangement_to_schema(arr: LoopArrangement) -> ArrangementSchema:
    return ArrangementSchema(
        n_pairs=arr.n_pairs,
        vertices=[[float(x) for x in v] for v in arr.vertices.positions],
        deficits=[float(d) for d in arr.deficits],
        loops=[LoopSchema(label=loop.label, normal=[float(x) for x in loop.normal]) for loop in arr.loops],
    )


def parse_arrangement(text: str, name: str = "", tolerances: Tolerances = TOLERANCES) -> LoopArrangement:
    return arrangement_from_schema(load_model(text, ArrangementSchema), name, tolerances)


def serialize_arrangement(arr: LoopArrangement) -> str:
    return dumps(arrangement_to_schema(arr).model_dump(mode="json"))


# -------------------------------
# Surfaces, lengths, frames, search specs
# -------------------------------
def parse_lengths(text: str, labels: Optional[Sequence[str]] = None) -> Dict[str, float]:
    """Either {label: length} or a list in loop order (labels required then)"""
    data = load_json(text)
    if isinstance(data, dict) and "lengths" in data:
        data = data["lengths"]
    if isinstance(data, list):
        if labels is None or len(data) != len(labels):
            raise ParseError(1, 1, f"a list of {len(data)} lengths needs {len(data)} loop labels")
        data = dict(zip(labels, data))
    if not isinstance(data, dict) or not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                                             for v in data.values()):
        raise ParseError(1, 1, "lengths must be an object mapping loop labels to numbers")
    return {str(label): float(value) for label, value in data.items()}


def parse_surface(text: str, resolve: ArrangementResolver,
                  tolerances: Tolerances = TOLERANCES) -> Tuple[LoopArrangement, Dict[str, float]]:
    schema = load_model(text, SurfaceSchema)
    if isinstance(schema.arrangement, str):
        arr = resolve(schema.arrangement)
    else:
        arr = arrangement_from_schema(schema.arrangement, tolerances=tolerances)
    return arr, dict(schema.lengths)


def parse_frame(text: str) -> Union[List[FrameEdgeSchema], FramePairSchema]:
    """A list of frame edges, or {"a": [...], "b": [...]} for a side comparison"""
    data = load_json(text)
    if isinstance(data, dict) and "edges" in data:
        data = data["edges"]
    try:
        if isinstance(data, dict):
            return FramePairSchema.model_validate(data)
        if not isinstance(data, list):
            raise ParseError(1, 1, "a frame is a list of edges or an object with 'a' and 'b'")
        return [FrameEdgeSchema.model_validate(entry) for entry in data]
    except pydantic.ValidationError as e:
        first = e.errors()[0]
        line, column = _locate(text, first["loc"])
        raise ParseError(line, column, f"{'.'.join(str(p) for p in first['loc']) or '<root>'}: {first['msg']}") from e


def serialize_frame(frame: FrameSpec) -> str:
    return dumps([edge.model_dump(mode="json", by_alias=True, exclude_none=True) for edge in frame.to_schema()])


def parse_search_spec(text: str) -> SearchSpecSchema:
    return load_model(text, SearchSpecSchema)


# -------------------------------
# Project files
# -------------------------------
def parse_project(text: str) -> ProjectFileSchema:
    return load_model(text, ProjectFileSchema)


def serialize_project(project: ProjectFileSchema) -> str:
    return dumps(project.model_dump(mode="json", by_alias=True, exclude_none=True))
