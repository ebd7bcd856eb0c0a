# =============================================================================
# FROZEN CATALOG OF REALIZED ARRANGEMENTS
# =============================================================================

import json
import logging
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from core.config import TOLERANCES, Tolerances
from core.exceptions import ConeSphereError, ValidationError
from geometry.arrangement import LabeledVertexSet, LoopArrangement, loop_class, normalize_class, parse_class, validate
from geometry.developing import compare_face_sides
from geometry.search import search_arrangement
from schemas.catalog import CatalogCheck, CatalogEntrySchema, CatalogFileSchema
from schemas.reports import SideVerdict
from schemas.surface import FrameEdgeSchema

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).resolve().parent / "data"
PREFIX = "catalog:"


class Catalog:
    """Entries of one or more catalog files, by name"""

    def __init__(self, files: List[CatalogFileSchema]):
        self._entries: Dict[str, Tuple[CatalogEntrySchema, CatalogFileSchema]] = {}
        for file in files:
            for entry in file.entries:
                if entry.name in self._entries:
                    raise ValueError(f"duplicate catalog entry {entry.name}")
                if entry.vertex_set not in file.vertex_sets:
                    raise ValueError(f"entry {entry.name} names unknown vertex set {entry.vertex_set}")
                self._entries[entry.name] = (entry, file)
        for entry, _ in self._entries.values():
            if entry.reference is not None and entry.reference not in self._entries:
                raise ValueError(f"entry {entry.name} refers to unknown entry {entry.reference}")

    @classmethod
    def load(cls, directory: Path = DATA_DIR) -> "Catalog":
        files = []
        for path in sorted(directory.glob("*.json")):
            files.append(CatalogFileSchema.model_validate(json.loads(path.read_text(encoding="utf-8"))))
        logger.debug(f"Loaded {len(files)} catalog file(s) from {directory}")
        return cls(files)

    def names(self) -> List[str]:
        return list(self._entries)

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def entry(self, name: str) -> CatalogEntrySchema:
        try:
            return self._entries[name][0]
        except KeyError:
            raise KeyError(f"no catalog entry {name!r}; known: {', '.join(self._entries)}") from None

    def vertices(self, name: str) -> LabeledVertexSet:
        entry, file = self._entries[name]
        return LabeledVertexSet.from_points(file.vertex_sets[entry.vertex_set])

    def arrangement(self, name: str) -> LoopArrangement:
        """Frozen arrangement with uniform deficits"""
        entry = self.entry(name)
        return LoopArrangement.create(self.vertices(name), [(loop.label, loop.normal) for loop in entry.loops],
                                      name=name)

    def moved_across(self, name: str) -> LoopArrangement:
        """Reference chart with the entry's `across` loop swapped for the entry's normal"""
        entry = self.entry(name)
        if entry.reference is None or entry.across is None:
            raise ValueError(f"catalog entry {name} has no reference chart")
        normal = next(loop.normal for loop in entry.loops if loop.label == entry.across)
        return self.arrangement(entry.reference).replace_loop(entry.across, normal, name=name)

    def frame(self, name: str) -> List[FrameEdgeSchema]:
        return list(self.entry(name).frame)

    def classes_match(self, name: str) -> bool:
        arr = self.arrangement(name)
        entry = self.entry(name)
        return all(loop_class(loop, arr.vertices) == normalize_class(parse_class(stored.sign_class))
                   for loop, stored in zip(arr.loops, entry.loops))

    def rebuild(self, name: str, seed: Optional[int] = None) -> LoopArrangement:
        """Search fresh normals for the entry's classes"""
        entry = self.entry(name)
        return search_arrangement([loop.sign_class for loop in entry.loops], self.vertices(name), seed=seed,
                                  labels=[loop.label for loop in entry.loops], name=f"{name} (rebuilt)")

    def verify(self, name: str, tolerances: Tolerances = TOLERANCES) -> CatalogCheck:
        entry = self.entry(name)
        arr = self.arrangement(name)
        report = validate(arr, tolerances)
        check = dict(name=name, valid=report.ok, classes_match=False, reference=entry.reference,
                     across=entry.across, expected_det_sign=entry.expected_det_sign)
        if not report.ok:
            return CatalogCheck(**check, passed=False, message=report.issues[0].message)
        check["classes_match"] = self.classes_match(name)
        if not check["classes_match"]:
            return CatalogCheck(**check, passed=False, message="frozen normals do not reproduce the stored classes")
        if entry.reference is None:
            return CatalogCheck(**check, passed=entry.expected_det_sign == 1, message="reference entry")

        moved = self.moved_across(name)
        if not (moved.vertices.same_as(arr.vertices) and np.allclose(moved.normals, arr.normals, rtol=0.0,
                                                                     atol=1e-12)):
            return CatalogCheck(**check, passed=False,
                                message=f"entry differs from {entry.reference} outside loop {entry.across}")
        try:
            comparison = compare_face_sides(self.arrangement(entry.reference), moved, self.frame(name),
                                            entry.across, tolerances)
        except ConeSphereError as e:
            return CatalogCheck(**check, passed=False, message=f"{e.kind}: {e.message}")
        sign = 1 if comparison.det_a * comparison.det_b > 0 else -1
        expected = SideVerdict.DIFFERENT if entry.expected_det_sign < 0 else SideVerdict.SAME
        passed = sign == entry.expected_det_sign and comparison.verdict == expected
        return CatalogCheck(**check, verdict=comparison.verdict.value, det_sign=sign, passed=passed,
                            message=f"det {comparison.det_b:.6g} against {comparison.det_a:.6g}")

    def verify_all(self, tolerances: Tolerances = TOLERANCES) -> List[CatalogCheck]:
        checks = [self.verify(name, tolerances) for name in self.names()]
        failed = [c.name for c in checks if not c.passed]
        if failed:
            logger.warning(f"Catalog entries failing verification: {failed}")
        else:
            logger.info(f"All {len(checks)} catalog entries verified")
        return checks


@lru_cache(maxsize=1)
def default_catalog() -> Catalog:
    return Catalog.load()


def is_catalog_ref(text: str) -> bool:
    return text.startswith(PREFIX)


def catalog_arrangement(ref: str, tolerances: Tolerances = TOLERANCES) -> LoopArrangement:
    """Arrangement for 'catalog:NAME'; invalid frozen data surfaces as ValidationError"""
    name = ref[len(PREFIX):] if is_catalog_ref(ref) else ref
    arr = default_catalog().arrangement(name)
    report = validate(arr, tolerances)
    if not report.ok:
        raise ValidationError(f"catalog entry {name} is not a valid arrangement", report)
    return arr
