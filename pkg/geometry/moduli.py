# =============================================================================
# UNIT-AREA SLICE: HYPERBOLIC DISTANCE, IDEAL SIMPLEX, DIHEDRAL QUOTIENT
# =============================================================================

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Mapping, Sequence, Tuple, Union

import numpy as np

from core.config import TOLERANCES, Tolerances
from core.exceptions import IncompatibleForms, NonPositiveArea, WrongChart, WrongSignature
from geometry.decomposition import AreaForm, signature
from schemas.reports import DistanceReport, IdealSimplexReport, OrbitReport

logger = logging.getLogger(__name__)

Vector = Union[Mapping[str, float], Sequence[float], np.ndarray]


def _as_vector(form: AreaForm, l: Vector) -> np.ndarray:
    if isinstance(l, Mapping):
        missing = [label for label in form.labels if label not in l]
        if missing:
            raise ValueError(f"missing lengths for loops {missing}")
        vector = np.array([float(l[label]) for label in form.labels])
    else:
        vector = np.asarray(l, dtype=float).reshape(-1)
    if vector.shape != (form.k,):
        raise ValueError(f"expected {form.k} lengths, got {vector.shape[0]}")
    if not np.all(np.isfinite(vector)) or np.any(vector < 0):
        raise ValueError(f"lengths must be finite and nonnegative, got {vector.tolist()}")
    return vector


# -------------------------------
# Points and distance
# -------------------------------
@dataclass(frozen=True, eq=False)
class ModuliPoint:
    """Unit-area length vector of one chart"""
    lengths: np.ndarray
    form: AreaForm

    @property
    def area(self) -> float:
        return self.form.value(self.lengths)

    def lorentz_product(self, other: "ModuliPoint") -> float:
        return self.form.bilinear(self.lengths, other.lengths)

    def as_dict(self) -> Dict[str, float]:
        return {label: float(v) for label, v in zip(self.form.labels, self.lengths)}


def normalize(l: Vector, form: AreaForm) -> ModuliPoint:
    """Rescale l to unit area"""
    vector = _as_vector(form, l)
    area = form.value(vector)
    if not area > 0:
        raise NonPositiveArea(f"lᵀQl = {area:.6g} is not positive", area=area)
    scaled = vector / math.sqrt(area)
    scaled.setflags(write=False)
    return ModuliPoint(scaled, form)


def distance(x: ModuliPoint, y: ModuliPoint, tolerances: Tolerances = TOLERANCES) -> float:
    """Hyperboloid distance arccosh(xᵀQy), evaluated as 2·asinh(½·√(−Q(x−y)))"""
    if not x.form.same_as(y.form):
        raise IncompatibleForms("points belong to different area forms")
    b = x.lorentz_product(y)
    if b < 1.0 - tolerances.distance_slack:
        logger.warning(f"Lorentz product {b!r} below 1 by more than {tolerances.distance_slack}; clamping")
    # Q(x−y) = 2 − 2·cosh d on the unit slice; acosh loses half the digits near b = 1
    w = x.lengths - y.lengths
    return 2.0 * math.asinh(0.5 * math.sqrt(max(-x.form.value(w), 0.0)))


def distance_report(x: ModuliPoint, y: ModuliPoint, tolerances: Tolerances = TOLERANCES) -> DistanceReport:
    return DistanceReport(distance=distance(x, y, tolerances), lorentz_product=x.lorentz_product(y),
                          x=x.as_dict(), y=y.as_dict())


# -------------------------------
# Ideal simplex
# -------------------------------
def ideal_simplex_check(form: AreaForm, tolerances: Tolerances = TOLERANCES) -> IdealSimplexReport:
    """Check that the positive orthant is an ideal simplex of the unit-area slice"""
    k = form.k
    report = signature(form, tolerances)
    if report.as_tuple() != (1, k - 1, 0):
        raise WrongSignature(f"area form has signature {report.as_tuple()}, expected {(1, k - 1, 0)}",
                             signature=list(report.as_tuple()))
    q = form.matrix

    null_residuals = {label: abs(float(q[i, i])) for i, label in enumerate(form.labels)}
    vertices = [i for i in range(k) if null_residuals[form.labels[i]] == 0.0]

    facet_signatures = {label: signature(form.restrict(label), tolerances).as_tuple() for label in form.labels}
    facets = [i for i, label in enumerate(form.labels) if facet_signatures[label] == (1, k - 2, 0)]
    # facet l_i = 0 holds the axis e_j exactly when j != i
    vertices_per_facet = min((sum(1 for j in vertices if j != i) for i in facets), default=0)
    facets_per_vertex = min((sum(1 for i in facets if i != j) for j in vertices), default=0)

    pairs = list(itertools.combinations(range(k), 2))
    gram = np.array([q[i, j] for i, j in pairs])
    positive = gram > 0
    if not np.all(positive):
        logger.warning(f"{int(np.sum(~positive))} Gram entries are not positive; left out of the regularity fit")
    rows = np.zeros((int(np.sum(positive)), k + 1))
    for row, (i, j) in enumerate(p for p, ok in zip(pairs, positive) if ok):
        rows[row, i] = rows[row, j] = 1.0
        rows[row, k] = 1.0
    target = np.log(gram[positive])
    solution, *_ = np.linalg.lstsq(rows, target, rcond=None)
    residual = float(np.linalg.norm(rows @ solution - target))
    spread = float(np.max(gram[positive]) / np.min(gram[positive])) if np.any(positive) else 0.0

    logger.info(f"Ideal simplex: {len(vertices)} vertices, {len(facets)} facets, regularity residual {residual:.3e}")
    return IdealSimplexReport(
        null_residuals=null_residuals,
        n_vertices=len(vertices),
        n_facets=len(facets),
        facet_signatures=facet_signatures,
        vertices_per_facet=vertices_per_facet,
        facets_per_vertex=facets_per_vertex,
        log_scalings={label: float(u) for label, u in zip(form.labels, solution[:k])},
        regularity_residual=residual,
        gram_spread=spread,
    )


# -------------------------------
# Dihedral action on the six N=4 coordinates
# -------------------------------
# (g·l)[i] = l[map[i]]
ROTATION_MAP = (2, 3, 4, 5, 1, 0)
REFLECTION_MAP = (5, 4, 3, 2, 1, 0)
IDENTITY_MAP = tuple(range(6))
ORDER = 12


def _then(first: Tuple[int, ...], second: Tuple[int, ...]) -> Tuple[int, ...]:
    """Index map of applying `first`, then `second`"""
    return tuple(first[second[i]] for i in range(len(first)))


@dataclass(frozen=True)
class D6Element:
    """r^rotation ∘ s^reflection"""
    rotation: int = 0
    reflection: int = 0

    def __post_init__(self):
        if not 0 <= self.rotation < 6 or self.reflection not in (0, 1):
            raise ValueError(f"no D6 element ({self.rotation}, {self.reflection})")

    @property
    def index_map(self) -> Tuple[int, ...]:
        out = REFLECTION_MAP if self.reflection else IDENTITY_MAP
        for _ in range(self.rotation):
            out = _then(out, ROTATION_MAP)
        return out

    def compose(self, other: "D6Element") -> "D6Element":
        """self ∘ other"""
        return element_of(_then(other.index_map, self.index_map))

    def inverse(self) -> "D6Element":
        m = self.index_map
        inverse = [0] * 6
        for i, j in enumerate(m):
            inverse[j] = i
        return element_of(tuple(inverse))

    @property
    def matrix(self) -> np.ndarray:
        """P with P·l = g·l"""
        p = np.zeros((6, 6))
        for i, j in enumerate(self.index_map):
            p[i, j] = 1.0
        return p

    @classmethod
    def from_word(cls, word: str) -> "D6Element":
        """Element named by a word in r and s, composed like functions: 'sr' is s ∘ r"""
        out = cls()
        for letter in reversed(word.replace(" ", "")):
            if letter not in "rs":
                raise ValueError(f"words use the letters r and s, got {letter!r}")
            step = cls(1, 0) if letter == "r" else cls(0, 1)
            out = step.compose(out)
        return out

    def __str__(self) -> str:
        return ("r" * self.rotation + "s" * self.reflection) or "id"


ELEMENTS: Tuple[D6Element, ...] = tuple(D6Element(rot, refl) for refl in (0, 1) for rot in range(6))
_BY_MAP = {element.index_map: element for element in ELEMENTS}


def element_of(index_map: Sequence[int]) -> D6Element:
    try:
        return _BY_MAP[tuple(index_map)]
    except KeyError:
        raise ValueError(f"{list(index_map)} is not a D6 permutation") from None


def _six(l: Vector) -> np.ndarray:
    if isinstance(l, Mapping):
        raise WrongChart("the dihedral action takes a positional vector over a..f")
    vector = np.asarray(l, dtype=float).reshape(-1)
    if vector.shape != (6,):
        raise WrongChart(f"the dihedral action needs k = 6 coordinates, got {vector.shape[0]}", k=int(vector.shape[0]))
    return vector


def d6_apply(g: D6Element, l: Vector) -> np.ndarray:
    vector = _six(l)
    return vector[list(g.index_map)]


def orbit(l: Vector) -> List[np.ndarray]:
    """Distinct images of l, in element order"""
    vector = _six(l)
    seen: Dict[Tuple[float, ...], np.ndarray] = {}
    for g in ELEMENTS:
        image = d6_apply(g, vector)
        seen.setdefault(tuple(image.tolist()), image)
    return list(seen.values())


def canonical_rep(l: Vector) -> np.ndarray:
    """Lexicographically smallest vector of the orbit"""
    return np.array(min(tuple(image.tolist()) for image in orbit(l)))


def orbit_report(l: Vector, labels: Sequence[str] = ("a", "b", "c", "d", "e", "f")) -> OrbitReport:
    images = orbit(l)
    return OrbitReport(canonical=canonical_rep(l).tolist(), orbit_size=len(images),
                       orbit=[image.tolist() for image in images], labels=list(labels))


def is_isometry(form: AreaForm, g: D6Element, tol: float = 1e-10) -> bool:
    """Whether PᵀQP = Q for the permutation of g"""
    if form.k != 6:
        raise WrongChart(f"the dihedral action needs k = 6 coordinates, got {form.k}", k=form.k)
    p = g.matrix
    return bool(np.max(np.abs(p.T @ form.matrix @ p - form.matrix)) <= tol)
