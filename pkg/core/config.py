import os
import logging
from dotenv import load_dotenv
from pydantic import BaseModel, Field

load_dotenv()

# -------------------- ENV --------------------
ENV = os.getenv("ENV", "development")

if ENV == "production":
    LOG_LEVEL = os.getenv("CONESPHERE_LOG_LEVEL", "WARNING")
else:
    LOG_LEVEL = os.getenv("CONESPHERE_LOG_LEVEL", "INFO")

DEFAULT_SEED = int(os.getenv("CONESPHERE_SEED", "20240601"))
SEARCH_ATTEMPTS = int(os.getenv("CONESPHERE_SEARCH_ATTEMPTS", "4000"))

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s'


def setup_logging(level: str = LOG_LEVEL) -> None:
    logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO), format=LOG_FORMAT)


# -------------------- TOLERANCES --------------------
class Tolerances(BaseModel):
    """Numerical thresholds shared by every geometry module"""
    vertex: float = Field(1e-9, description="Minimum |n·v| for a loop to avoid a labeled vertex")
    concurrency: float = Field(1e-9, description="Minimum |det(n_i, n_j, n_k)| for three loops")
    deficit_sum: float = Field(1e-10, description="Allowed gap between the deficit sum and 2π")
    unit_norm: float = Field(1e-12, description="Allowed gap between a stored normal's norm and 1")
    audit: float = Field(1e-9, description="Per cone point deficit tolerance")
    total_deficit: float = Field(1e-8, description="Tolerance on the total deficit 4π")
    eigen_relative: float = Field(1e-9, description="Zero eigenvalue threshold relative to ‖Q‖")
    det_relative: float = Field(1e-12, description="Singular frame threshold relative to ‖M‖^(2N-2)")
    column_match: float = Field(1e-8, description="Shared columns of adjacent frame matrices")
    merge: float = Field(1e-9, description="Vertex merge distance for OBJ export")
    flat_angle: float = Field(1e-9, description="Corner angles within this of π are flagged")
    distance_slack: float = Field(1e-12, description="Slack below 1 clamped in hyperbolic distance")

    def scaled(self, factor: float) -> "Tolerances":
        """Copy with the audit-type tolerances multiplied by factor"""
        if factor <= 0:
            raise ValueError(f"tolerance factor must be positive, got {factor}")
        return self.model_copy(update={
            "audit": self.audit * factor,
            "total_deficit": self.total_deficit * factor,
            "deficit_sum": self.deficit_sum * factor,
            "column_match": self.column_match * factor,
        })


TOLERANCES = Tolerances()
