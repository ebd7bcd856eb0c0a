# =============================================================================
# PYDANTIC MODELS - SURFACES AND FRAMES
# =============================================================================

from typing import Dict, List, Optional, Union
from pydantic import BaseModel, Field, model_validator

from schemas.arrangement import ArrangementSchema, Vec3


class SurfaceSchema(BaseModel):
    """An arrangement together with one edge length per loop"""
    arrangement: Union[ArrangementSchema, str] = Field(..., description="Inline arrangement or a file reference")
    lengths: Dict[str, float] = Field(..., description="Edge length per loop label")


class FrameEdgeSchema(BaseModel):
    """One frame edge: a resolved quad path between cone points, or a traced curve between labels"""
    source: Union[int, str] = Field(..., alias="from", description="Cone point id, or a vertex label to trace from")
    target: Union[int, str] = Field(..., alias="to", description="Cone point id, or a vertex label to trace to")
    path: Optional[List[int]] = Field(None, description="Quad ids from a corner of source to a corner of target")
    via: Optional[List[Vec3]] = Field(None, description="Waypoints of the traced great-circle curve")

    model_config = {"populate_by_name": True}

    @model_validator(mode="after")
    def check_form(self):
        resolved = isinstance(self.source, int) and isinstance(self.target, int)
        traced = isinstance(self.source, str) and isinstance(self.target, str)
        if not (resolved or traced):
            raise ValueError("'from' and 'to' must both be cone point ids or both be vertex labels")
        if resolved and self.path is None:
            raise ValueError("a frame edge between cone point ids needs a 'path'")
        if traced and self.path is not None:
            raise ValueError("a traced frame edge takes 'via' waypoints, not a 'path'")
        return self


class FramePairSchema(BaseModel):
    """Frame specs for the two charts of a side comparison"""
    a: List[FrameEdgeSchema] = Field(..., description="Frame on the first arrangement")
    b: List[FrameEdgeSchema] = Field(..., description="Frame on the second arrangement")
