# =============================================================================
# PYDANTIC MODELS - REPORTS
# =============================================================================

from enum import Enum
from typing import Dict, List, Optional, Tuple
from pydantic import BaseModel, Field


class IssueKind(str, Enum):
    DEFICIT_SUM = "DeficitSum"
    NON_POSITIVE_DEFICIT = "NonPositiveDeficit"
    NON_UNIT_VECTOR = "NonUnitVector"
    COINCIDENT_VERTICES = "CoincidentVertices"
    VERTEX_ON_LOOP = "VertexOnLoop"
    CONCURRENT_LOOPS = "ConcurrentLoops"
    HOMOTOPIC_PAIR = "HomotopicPair"


class ValidationIssue(BaseModel):
    """One violated arrangement invariant"""
    kind: IssueKind = Field(..., description="Which invariant is violated")
    indices: List[int] = Field(default_factory=list, description="Offending loop or vertex indices (0-based)")
    message: str = Field(..., description="Human readable detail")


class ValidationReport(BaseModel):
    """All violated invariants; empty means valid"""
    issues: List[ValidationIssue] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def kinds(self) -> List[IssueKind]:
        return [issue.kind for issue in self.issues]


class DeficitAuditRow(BaseModel):
    """Measured against expected deficit at one cone point"""
    cone_point: int = Field(..., description="Cone point id (arrangement face id)")
    labels: List[str] = Field(default_factory=list, description="Labeled vertices at this cone point")
    cone_angle: float = Field(..., description="Sum of incident corner angles")
    measured: float = Field(..., description="2π minus the cone angle")
    expected: float = Field(..., description="Sum of the deficits of the labels here, 0 if unlabeled")
    error: float = Field(..., description="|measured - expected|")
    passed: bool


class DeficitAudit(BaseModel):
    """Cone point audit of a parallelogram complex"""
    rows: List[DeficitAuditRow] = Field(default_factory=list)
    total_deficit: float = Field(..., description="Sum of measured deficits, 4π for a closed surface")
    tolerance: float
    passed: bool
    flat_corners: List[Tuple[int, int]] = Field(default_factory=list, description="(quad, corner) pairs with angle near π")


class SignatureReport(BaseModel):
    """Inertia of a symmetric form"""
    positives: int
    negatives: int
    zeros: int
    eigenvalues: List[float] = Field(default_factory=list, description="Ascending eigenvalues")

    def as_tuple(self) -> Tuple[int, int, int]:
        return self.positives, self.negatives, self.zeros


class AreaFormReport(BaseModel):
    """Area form matrix with its signature"""
    labels: List[str]
    matrix: List[List[float]]
    signature: SignatureReport


class FrameMatrixReport(BaseModel):
    """Frame matrix rows (x, y per frame vector) against loop columns"""
    labels: List[str]
    matrix: List[List[float]]
    determinant: float


class SideVerdict(str, Enum):
    SAME = "same"
    DIFFERENT = "different"


class SideComparison(BaseModel):
    """Side of the shared face occupied by two adjacent charts"""
    verdict: SideVerdict
    loop: str = Field(..., description="Label of the loop whose face is shared")
    det_a: float
    det_b: float
    residual: float = Field(..., description="Largest shared-column mismatch after per-vector alignment")


class IdealSimplexReport(BaseModel):
    """Ideal simplex structure of the positive orthant under the area form"""
    null_residuals: Dict[str, float] = Field(..., description="Q(e_i) per axis")
    n_vertices: int = Field(..., description="Axes that are Q-null")
    n_facets: int = Field(..., description="Coordinate hyperplanes carrying a Lorentzian form")
    facet_signatures: Dict[str, Tuple[int, int, int]] = Field(..., description="Signature of Q restricted to l_i = 0")
    vertices_per_facet: int
    facets_per_vertex: int
    log_scalings: Dict[str, float] = Field(..., description="Fitted u_i in log B_ij = u_i + u_j + c")
    regularity_residual: float = Field(..., ge=0, description="Euclidean norm of the log-linear misfit")
    gram_spread: float = Field(..., ge=0, description="max/min of the off-diagonal Gram entries")


class DistanceReport(BaseModel):
    """Hyperbolic distance between two unit-area points"""
    distance: float
    lorentz_product: float
    x: Dict[str, float]
    y: Dict[str, float]


class OrbitReport(BaseModel):
    """D6 orbit of a length vector over labels a..f"""
    canonical: List[float]
    orbit_size: int
    orbit: List[List[float]]
    labels: Optional[List[str]] = None
