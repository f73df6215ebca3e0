"""
Generators for canonical finite test geometries.

Projective and affine spaces over prime fields, complete-graph spaces and
near-pencils, plus collineations and the standard polarity of PG(3, q).
"""

import random
from dataclasses import dataclass
from itertools import product
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy import isprime

from src.config import config
from src.errors import InputValidationError, PreconditionViolatedError, SizeCapExceededError
from src.models import (
    CorrelationSeed, GeometryFamily, LabeledSpace, LinearSpace, PointMap, Provenance,
)
from src.services.chow import induce_line_map_from_correlation
from src.services.incidence_core import validate
from src.utils.helpers import gaussian_binomial
import logging

logger = logging.getLogger(__name__)


class UnsupportedOrderError(InputValidationError):
    """Raised when a field order is not prime."""

    def __init__(self, q: int):
        self.q = q
        super().__init__(f"unsupported order {q}: only prime orders are supported")


class WrongProvenanceError(InputValidationError):
    """Raised when an operation needs a space from a specific generator."""
    pass


# ============================================================================
# Prime field arithmetic
# ============================================================================

@dataclass(frozen=True)
class PrimeField:
    """GF(p) with modular routines on numpy integer arrays."""
    p: int

    def __post_init__(self):
        if not isprime(self.p):
            raise UnsupportedOrderError(self.p)

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, self.p - 2, self.p)

    def vectors(self, length: int) -> List[Tuple[int, ...]]:
        """All vectors of GF(p)^length in lexicographic order."""
        return list(product(range(self.p), repeat=length))

    def normalize(self, vector: Sequence[int]) -> Tuple[int, ...]:
        """Scale so the first nonzero coordinate is 1."""
        v = np.asarray(vector, dtype=np.int64) % self.p
        nonzero = np.flatnonzero(v)
        if nonzero.size == 0:
            raise ValueError("Zero vector has no projective point")
        scaled = (v * self.inv(int(v[nonzero[0]]))) % self.p
        return tuple(int(x) for x in scaled)

    def _echelon(self, matrix: np.ndarray) -> Tuple[np.ndarray, List[int]]:
        m = np.array(matrix, dtype=np.int64) % self.p
        rows, cols = m.shape
        pivots: List[int] = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            candidates = np.flatnonzero(m[r:, c])
            if candidates.size == 0:
                continue
            k = r + int(candidates[0])
            m[[r, k]] = m[[k, r]]
            m[r] = (m[r] * self.inv(int(m[r, c]))) % self.p
            for i in range(rows):
                if i != r and m[i, c]:
                    m[i] = (m[i] - m[i, c] * m[r]) % self.p
            pivots.append(c)
            r += 1
        return m, pivots

    def rank(self, matrix) -> int:
        _, pivots = self._echelon(np.atleast_2d(matrix))
        return len(pivots)

    def null_vector(self, rows) -> Tuple[int, ...]:
        """
        Normalized generator of a 1-dimensional null space.

        Raises:
            ValueError: If the null space is not 1-dimensional
        """
        m, pivots = self._echelon(np.atleast_2d(rows))
        cols = m.shape[1]
        free = [c for c in range(cols) if c not in pivots]
        if len(free) != 1:
            raise ValueError(f"Null space has dimension {len(free)}, expected 1")
        v = np.zeros(cols, dtype=np.int64)
        v[free[0]] = 1
        for i, c in enumerate(pivots):
            v[c] = (-m[i, free[0]]) % self.p
        return self.normalize(v)


# ============================================================================
# Generators
# ============================================================================

def _check_caps(points: int, lines: int, max_points: Optional[int], max_lines: Optional[int]):
    max_points = config.MAX_POINTS if max_points is None else max_points
    max_lines = config.MAX_LINES if max_lines is None else max_lines
    if points > max_points:
        raise SizeCapExceededError("point count", points, max_points)
    if lines > max_lines:
        raise SizeCapExceededError("line count", lines, max_lines)


def _check_params(n: int, q: int):
    if not 1 <= n <= 4:
        raise InputValidationError(f"Dimension n must be between 1 and 4, got {n}")
    if not isprime(q):
        raise UnsupportedOrderError(q)


def generate_pg(n: int, q: int, max_points: Optional[int] = None,
                max_lines: Optional[int] = None) -> LabeledSpace:
    """
    Projective space PG(n, q) over a prime field.

    Points are normalized vectors of GF(q)^(n+1) in lexicographic order;
    lines are the 2-dimensional subspaces.

    Args:
        n: Projective dimension (1..4)
        q: Prime field order

    Returns:
        LabeledSpace with normalized coordinate labels

    Raises:
        UnsupportedOrderError: If q is not prime
        SizeCapExceededError: If the output would exceed the caps
    """
    _check_params(n, q)
    _check_caps(gaussian_binomial(n + 1, 1, q), gaussian_binomial(n + 1, 2, q), max_points, max_lines)

    field = PrimeField(q)
    labels = [v for v in field.vectors(n + 1) if any(v) and v[next(i for i, x in enumerate(v) if x)] == 1]
    index = {label: i for i, label in enumerate(labels)}
    vectors = np.array(labels, dtype=np.int64)
    scalars = np.arange(q, dtype=np.int64)[:, None]

    count = len(labels)
    covered = np.zeros((count, count), dtype=bool)
    lines: List[List[int]] = []
    for i in range(count):
        for j in range(i + 1, count):
            if covered[i, j]:
                continue
            combos = (vectors[i][None, :] + scalars * vectors[j][None, :]) % q
            line = sorted({index[field.normalize(row)] for row in combos} | {j})
            lines.append(line)
            ids = np.array(line)
            covered[np.ix_(ids, ids)] = True

    space = validate(count, lines)
    logger.info(f"Generated PG({n},{q}): {space.point_count} points, {space.line_count} lines")
    return LabeledSpace(space, tuple(labels), Provenance(GeometryFamily.PG, n, q))


def generate_ag(n: int, q: int, max_points: Optional[int] = None,
                max_lines: Optional[int] = None) -> LabeledSpace:
    """
    Affine space AG(n, q) over a prime field.

    Points are the vectors of GF(q)^n, lines the cosets of 1-dimensional
    subspaces. For q = 2 every line has two points, so the result is the
    complete-graph space; the provenance records the degeneracy.

    Raises:
        UnsupportedOrderError: If q is not prime
        SizeCapExceededError: If the output would exceed the caps
    """
    _check_params(n, q)
    point_total = q ** n
    _check_caps(point_total, point_total * (point_total - 1) // (q * (q - 1)), max_points, max_lines)

    field = PrimeField(q)
    labels = field.vectors(n)
    index = {label: i for i, label in enumerate(labels)}
    vectors = np.array(labels, dtype=np.int64)
    scalars = np.arange(q, dtype=np.int64)[:, None]

    count = len(labels)
    covered = np.zeros((count, count), dtype=bool)
    lines: List[List[int]] = []
    for i in range(count):
        for j in range(i + 1, count):
            if covered[i, j]:
                continue
            direction = (vectors[j] - vectors[i]) % q
            combos = (vectors[i][None, :] + scalars * direction[None, :]) % q
            line = sorted(index[tuple(int(x) for x in row)] for row in combos)
            lines.append(line)
            ids = np.array(line)
            covered[np.ix_(ids, ids)] = True

    space = validate(count, lines)
    logger.info(f"Generated AG({n},{q}): {space.point_count} points, {space.line_count} lines")
    return LabeledSpace(space, tuple(labels), Provenance(GeometryFamily.AG, n, q, degenerate=(q == 2)))


def generate_complete(n: int, max_points: Optional[int] = None,
                      max_lines: Optional[int] = None) -> LabeledSpace:
    """Complete-graph space K_n: every pair of points is a 2-point line."""
    if n < 2:
        raise InputValidationError(f"Complete space needs n >= 2, got {n}")
    _check_caps(n, n * (n - 1) // 2, max_points, max_lines)
    space = validate(n, [[p, q] for p in range(n) for q in range(p + 1, n)])
    logger.info(f"Generated K{n}: {space.line_count} lines")
    return LabeledSpace(space, tuple((p,) for p in range(n)), Provenance(GeometryFamily.COMPLETE, n))


def generate_near_pencil(n: int, max_points: Optional[int] = None,
                         max_lines: Optional[int] = None) -> LabeledSpace:
    """Near-pencil on n points: one line {1..n-1} and the lines {0, i}."""
    if n < 3:
        raise InputValidationError(f"Near-pencil needs n >= 3, got {n}")
    _check_caps(n, n, max_points, max_lines)
    lines = [list(range(1, n))] + [[0, i] for i in range(1, n)]
    space = validate(n, lines)
    logger.info(f"Generated near-pencil on {n} points")
    return LabeledSpace(space, tuple((p,) for p in range(n)), Provenance(GeometryFamily.NEAR_PENCIL, n))


# ============================================================================
# Collineations
# ============================================================================

def _point_map(labeled: LabeledSpace, image: Sequence[int]) -> PointMap:
    space = labeled.space
    kappa = PointMap(space, space, tuple(image))
    for line_id, line in enumerate(space.lines):
        if frozenset(kappa.image[p] for p in line) not in space.line_index:
            raise PreconditionViolatedError(f"Map does not send line {line_id} onto a line")
    return kappa


def collineation_from_matrix(labeled: LabeledSpace, matrix, translation: Optional[Sequence[int]] = None) -> PointMap:
    """
    Collineation induced by an invertible matrix (and a translation for AG).

    Args:
        labeled: A pg or ag space
        matrix: Square invertible matrix over GF(q), acting on column vectors
        translation: Affine translation vector (ag only)

    Returns:
        PointMap on the space

    Raises:
        WrongProvenanceError: If the space is not pg or ag
        PreconditionViolatedError: If the matrix is singular
    """
    prov = labeled.provenance
    if prov.family not in (GeometryFamily.PG, GeometryFamily.AG):
        raise WrongProvenanceError(f"Matrix collineations need a pg or ag space, got {prov.describe()}")

    field = PrimeField(prov.q)
    m = np.array(matrix, dtype=np.int64) % field.p
    size = len(labeled.labels[0])
    if m.shape != (size, size) or field.rank(m) != size:
        raise PreconditionViolatedError("Matrix must be square, invertible and match the coordinates")

    vectors = np.array(labeled.labels, dtype=np.int64)
    moved = (vectors @ m.T) % field.p
    if prov.family is GeometryFamily.PG:
        image = [labeled.point_of_label[field.normalize(row)] for row in moved]
    else:
        shift = np.zeros(size, dtype=np.int64) if translation is None else np.array(translation, dtype=np.int64)
        moved = (moved + shift) % field.p
        image = [labeled.point_of_label[tuple(int(x) for x in row)] for row in moved]
    return _point_map(labeled, image)


def random_collineation(labeled: LabeledSpace, rng: Optional[random.Random] = None) -> PointMap:
    """
    Random collineation of a generated space.

    PGL for pg, AGL for ag (q >= 3), point permutations for complete
    spaces and degenerate ag, permutations fixing point 0 for near-pencils.
    """
    rng = rng or random.Random()
    prov = labeled.provenance
    count = labeled.space.point_count

    if prov.family is GeometryFamily.COMPLETE or prov.degenerate:
        image = list(range(count))
        rng.shuffle(image)
        return _point_map(labeled, image)

    if prov.family is GeometryFamily.NEAR_PENCIL:
        tail = list(range(1, count))
        rng.shuffle(tail)
        return _point_map(labeled, [0] + tail)

    field = PrimeField(prov.q)
    size = len(labeled.labels[0])
    while True:
        matrix = [[rng.randrange(field.p) for _ in range(size)] for _ in range(size)]
        if field.rank(matrix) == size:
            break
    translation = None
    if prov.family is GeometryFamily.AG:
        translation = [rng.randrange(field.p) for _ in range(size)]
    return collineation_from_matrix(labeled, matrix, translation)


# ============================================================================
# Polarity
# ============================================================================

def _require_pg3(labeled: LabeledSpace):
    prov = labeled.provenance
    if prov.family is not GeometryFamily.PG or prov.n != 3:
        raise WrongProvenanceError(f"Standard polarity needs a pg(3,q) space, got {prov.describe()}")


def standard_polarity(pg3q: LabeledSpace) -> CorrelationSeed:
    """
    Polarity of PG(3, q) from the standard dot product.

    Sends the point with coordinates v to the plane {w : v·w = 0}.

    Returns:
        CorrelationSeed with the point-to-plane map and its induced line map

    Raises:
        WrongProvenanceError: If the input was not generated as pg(3, q)
    """
    _require_pg3(pg3q)
    q = pg3q.provenance.q
    vectors = np.array(pg3q.labels, dtype=np.int64)
    products = (vectors @ vectors.T) % q
    plane_of = tuple(frozenset(int(i) for i in np.flatnonzero(row == 0)) for row in products)

    line_map = induce_line_map_from_correlation(pg3q.space, pg3q.space, plane_of)
    logger.info(f"Built standard polarity of {pg3q.provenance.describe()}")
    return CorrelationSeed(pg3q, plane_of, line_map)


def standard_pole(pg3q: LabeledSpace, plane: Iterable[int]) -> int:
    """
    Point whose polar plane is the given plane, solved through the same form.

    Raises:
        WrongProvenanceError: If the input was not generated as pg(3, q)
    """
    _require_pg3(pg3q)
    field = PrimeField(pg3q.provenance.q)
    rows = [pg3q.labels[p] for p in sorted(plane)]
    return pg3q.point_of_label[field.null_vector(rows)]
