# =============================================================================
# PYDANTIC MODELS - CATALOG AND PROJECT FILES
# =============================================================================

from typing import Dict, List, Literal, Optional
from pydantic import BaseModel, Field, field_validator

from schemas.arrangement import ArrangementSchema, Vec3
from schemas.surface import FrameEdgeSchema


class CatalogLoopSchema(BaseModel):
    """Frozen loop of a catalog entry"""
    label: str
    sign_class: str = Field(..., alias="class", description="Side of 1+, 2+, ... up to global sign")
    normal: Vec3 = Field(..., description="Frozen normal; normalized on load")

    model_config = {"populate_by_name": True}


class CatalogEntrySchema(BaseModel):
    """One realized arrangement of the catalog"""
    name: str = Field(..., description="Entry name, e.g. 'N4-A1'")
    vertex_set: str = Field(..., description="Key into the file's vertex sets")
    loops: List[CatalogLoopSchema]
    frame: List[FrameEdgeSchema] = Field(..., description="Default frame in trace form")
    reference: Optional[str] = Field(None, description="Entry this chart is compared against")
    across: Optional[str] = Field(None, description="Loop whose face is shared with the reference")
    expected_det_sign: Literal[-1, 1] = Field(..., description="sign(det) relative to the reference under this frame")
    provenance: str = Field("", description="What the entry realizes")

    @field_validator("name")
    @classmethod
    def check_name(cls, value: str) -> str:
        if ":" in value:
            raise ValueError("entry names may not contain ':'")
        return value


class CatalogFileSchema(BaseModel):
    """A frozen catalog file"""
    version: str = "1"
    n_pairs: int = Field(..., gt=0)
    vertex_sets: Dict[str, List[Vec3]]
    entries: List[CatalogEntrySchema]


class ProjectFileSchema(BaseModel):
    """Everything needed to reproduce one session"""
    version: str = Field("1", description="Project file format version")
    arrangement: Optional[ArrangementSchema] = None
    lengths: Optional[Dict[str, float]] = None
    frames: Optional[List[FrameEdgeSchema]] = None
    catalog: List[CatalogEntrySchema] = Field(default_factory=list)


class CatalogCheck(BaseModel):
    """Re-verification of one frozen entry"""
    name: str
    valid: bool = Field(..., description="Frozen normals pass validate")
    classes_match: bool = Field(..., description="Frozen normals reproduce the stored classes")
    reference: Optional[str] = None
    across: Optional[str] = None
    verdict: Optional[str] = Field(None, description="Side verdict against the reference entry")
    det_sign: Optional[int] = Field(None, description="sign(det entry · det reference) under the entry's frame")
    expected_det_sign: int
    passed: bool
    message: str = ""
