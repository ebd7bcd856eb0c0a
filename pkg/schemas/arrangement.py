# =============================================================================
# PYDANTIC MODELS - ARRANGEMENT JSON
# =============================================================================

from typing import Annotated, List, Optional
from pydantic import BaseModel, Field, field_validator, model_validator

Vec3 = Annotated[List[float], Field(min_length=3, max_length=3)]


class LoopSchema(BaseModel):
    """One oriented great circle, stored by its outward normal"""
    label: str = Field(..., min_length=1, description="Loop label, unique within the arrangement")
    normal: Vec3 = Field(..., description="Normal pointing to the loop's outside")


class ArrangementSchema(BaseModel):
    """Labeled antipodal vertices, their deficits, and the loops"""
    n_pairs: int = Field(..., gt=0, description="Number N of antipodal vertex pairs")
    vertices: List[Vec3] = Field(..., description="Position of i+ for i = 1..N; i- is its antipode")
    deficits: List[float] = Field(..., description="Cone deficits δ_1..δ_N")
    loops: List[LoopSchema] = Field(..., description="Loops in column order")

    @model_validator(mode="after")
    def check_lengths(self):
        if len(self.vertices) != self.n_pairs:
            raise ValueError(f"expected {self.n_pairs} vertices, got {len(self.vertices)}")
        if len(self.deficits) != self.n_pairs:
            raise ValueError(f"expected {self.n_pairs} deficits, got {len(self.deficits)}")
        labels = [loop.label for loop in self.loops]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate loop labels in {labels}")
        return self


class LoopClassSchema(BaseModel):
    """Target vertex bipartition for one searched loop"""
    label: str = Field(..., min_length=1, description="Loop label")
    sign_class: str = Field(..., alias="class", description="Side of 1+, 2+, ... as a '+'/'-' string")

    model_config = {"populate_by_name": True}

    @field_validator("sign_class")
    @classmethod
    def check_signs(cls, value: str) -> str:
        if not value or set(value) - {"+", "-"}:
            raise ValueError(f"class must be a non-empty string of '+' and '-', got {value!r}")
        return value


class SearchSpecSchema(BaseModel):
    """Input of the search command"""
    vertices: List[Vec3] = Field(..., min_length=1, description="Position of i+ for i = 1..N")
    deficits: Optional[List[float]] = Field(None, description="Cone deficits; uniform 2π/N when omitted")
    loops: List[LoopClassSchema] = Field(..., min_length=1, description="One target class per loop")

    @model_validator(mode="after")
    def check_classes(self):
        n = len(self.vertices)
        for loop in self.loops:
            if len(loop.sign_class) != n:
                raise ValueError(f"class of loop {loop.label} has {len(loop.sign_class)} signs, expected {n}")
        if self.deficits is not None and len(self.deficits) != n:
            raise ValueError(f"expected {n} deficits, got {len(self.deficits)}")
        return self
