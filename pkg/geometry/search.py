# =============================================================================
# REALIZING BIPARTITION SPECS BY GREAT CIRCLES
# =============================================================================

import itertools
import logging
import string
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from core.config import DEFAULT_SEED, SEARCH_ATTEMPTS, TOLERANCES, Tolerances
from core.exceptions import Unrealizable
from geometry.arrangement import (
    Bipartition, LabeledVertexSet, LoopArrangement, SignVector, normalize_class, parse_class,
    signs_from_bipartition, validate,
)

logger = logging.getLogger(__name__)

ClassSpec = Union[str, Sequence[int], Bipartition]

# Search works with margins well above the validation tolerances so results survive serialization.
MIN_MARGIN = 1e-4
MIN_TRIPLE = 1e-6
BATCH = 48


def default_labels(k: int) -> List[str]:
    return [string.ascii_lowercase[i] if i < 26 else f"l{i}" for i in range(k)]


def as_class(entry: ClassSpec, n_pairs: int) -> SignVector:
    if isinstance(entry, str):
        signs = parse_class(entry)
    elif isinstance(entry, frozenset):
        return signs_from_bipartition(entry, n_pairs)
    else:
        signs = tuple(int(s) for s in entry)
        if any(s not in (1, -1) for s in signs):
            raise ValueError(f"class entries must be ±1, got {signs}")
    if len(signs) != n_pairs:
        raise ValueError(f"class {signs} has {len(signs)} signs, expected {n_pairs}")
    return normalize_class(signs)


class SeparatorSampler:
    """Rejection sampler over the open cone {n : s_k (n·v_k) > 0 for all k}"""

    def __init__(self, signs: SignVector, vs: LabeledVertexSet, rng: np.random.Generator, attempts: int):
        self.signs = signs
        self.rows = np.array(signs, dtype=float)[:, None] * vs.positions
        self.rng = rng
        self.attempts = attempts
        self.seed_normal = self._perceptron()

    def margin(self, normal: np.ndarray) -> float:
        return float(np.min(self.rows @ (normal / np.linalg.norm(normal))))

    def _perceptron(self) -> np.ndarray:
        n = self.rows.sum(axis=0)
        for step in range(self.attempts):
            if np.linalg.norm(n) > 0 and self.margin(n) > 0:
                logger.debug(f"Class {self.signs}: perceptron converged after {step} updates")
                return n / np.linalg.norm(n)
            worst = int(np.argmin(self.rows @ n)) if np.linalg.norm(n) > 0 else 0
            n = n + self.rows[worst]
        raise Unrealizable(f"no great circle separates the class {self.signs} within {self.attempts} updates",
                           sign_class=list(self.signs))

    def draw(self) -> np.ndarray:
        """Best-margin accepted candidate out of one batch around the seed normal"""
        base_margin = self.margin(self.seed_normal)
        best, best_margin = None, -np.inf
        for _ in range(BATCH):
            scale = self.rng.uniform(0.05, 1.0) * max(base_margin, 1e-3)
            candidate = self.seed_normal + self.rng.normal(scale=scale, size=3)
            norm = np.linalg.norm(candidate)
            if norm == 0:
                continue
            candidate = candidate / norm
            m = self.margin(candidate)
            if m <= MIN_MARGIN:
                continue
            if m > best_margin:
                best, best_margin = candidate, m
        if best is None:
            if base_margin > MIN_MARGIN:
                return self.seed_normal.copy()
            raise Unrealizable(f"class {self.signs} admits no separator with margin above {MIN_MARGIN}",
                               sign_class=list(self.signs))
        return best


def _bad_triples(normals: List[np.ndarray]) -> List[Tuple[int, int, int]]:
    bad = []
    for i, j, m in itertools.combinations(range(len(normals)), 3):
        if abs(float(np.linalg.det(np.stack([normals[i], normals[j], normals[m]])))) <= MIN_TRIPLE:
            bad.append((i, j, m))
    return bad


def search_arrangement(
    spec: Sequence[ClassSpec],
    vs: LabeledVertexSet,
    seed: Optional[int] = None,
    labels: Optional[Sequence[str]] = None,
    deficits: Optional[Sequence[float]] = None,
    attempts: int = SEARCH_ATTEMPTS,
    tolerances: Tolerances = TOLERANCES,
    name: str = "",
) -> LoopArrangement:
    """Find normals realizing each target class; the result depends only on (spec, seed)"""
    seed = DEFAULT_SEED if seed is None else seed
    classes = [as_class(entry, vs.n_pairs) for entry in spec]
    for i, j in itertools.combinations(range(len(classes)), 2):
        if classes[i] == classes[j]:
            raise Unrealizable(f"spec entries {i} and {j} are the same bipartition", indices=[i, j])
    labels = list(labels) if labels is not None else default_labels(len(classes))
    if len(labels) != len(classes):
        raise ValueError(f"{len(labels)} labels for {len(classes)} classes")

    rng = np.random.default_rng(seed)
    samplers = [SeparatorSampler(c, vs, rng, attempts) for c in classes]
    normals = [sampler.draw() for sampler in samplers]

    for round_ in range(attempts):
        bad = _bad_triples(normals)
        if not bad:
            break
        i, j, m = bad[0]
        logger.debug(f"Round {round_}: loops {labels[i]}, {labels[j]}, {labels[m]} nearly concurrent, redrawing {labels[m]}")
        normals[m] = samplers[m].draw()
    else:
        raise Unrealizable(f"could not break concurrent triples within {attempts} rounds")

    arr = LoopArrangement.create(vs, list(zip(labels, normals)), deficits, name)
    report = validate(arr, tolerances)
    if not report.ok:
        raise Unrealizable(f"searched arrangement failed validation: {report.issues[0].message}")
    logger.info(f"Realized {len(classes)} loops on {vs.n_pairs} vertex pairs (seed {seed})")
    return arr
