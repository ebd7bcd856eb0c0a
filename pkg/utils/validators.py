import math
import re
from typing import Any, Dict, Mapping, Sequence

LABEL_PATTERN = re.compile(r"^[1-9]\d*[+-]$")


def validate_lengths(lengths: Mapping[str, float], labels: Sequence[str]) -> Dict[str, Any]:
    if not lengths:
        return {"valid": False, "message": "Lengths cannot be empty"}

    missing = [label for label in labels if label not in lengths]
    if missing:
        return {"valid": False, "message": f"Missing lengths for loops {missing}"}

    extra = sorted(set(lengths) - set(labels))
    if extra:
        return {"valid": False, "message": f"Lengths given for unknown loops {extra}"}

    for label in labels:
        value = lengths[label]
        if not math.isfinite(value) or value < 0:
            return {"valid": False, "message": f"Length of loop {label} must be finite and nonnegative, got {value}"}

    return {"valid": True, "message": "Lengths are valid"}


def validate_deficits(deficits: Sequence[float], n_pairs: int, tolerance: float = 1e-10) -> Dict[str, Any]:
    if len(deficits) != n_pairs:
        return {"valid": False, "message": f"Expected {n_pairs} deficits, got {len(deficits)}"}

    if any(not d > 0 for d in deficits):
        return {"valid": False, "message": "Every deficit must be positive"}

    total = math.fsum(deficits)
    if abs(total - 2 * math.pi) > tolerance:
        return {"valid": False, "message": f"Deficits sum to {total!r}, expected 2π"}

    return {"valid": True, "message": "Deficits are valid"}


def validate_vertex_label(label: str, n_pairs: int) -> Dict[str, Any]:
    if not LABEL_PATTERN.match(label):
        return {"valid": False, "message": f"Invalid vertex label {label!r}. Use e.g. '2+' or '3-'"}

    if int(label[:-1]) > n_pairs:
        return {"valid": False, "message": f"Vertex label {label} out of range for {n_pairs} pairs"}

    return {"valid": True, "message": "Vertex label is valid"}


def validate_tolerance_factor(factor: float) -> Dict[str, Any]:
    if not math.isfinite(factor) or factor <= 0:
        return {"valid": False, "message": f"Tolerance factor must be a positive number, got {factor}"}
    return {"valid": True, "message": "Tolerance factor is valid"}
