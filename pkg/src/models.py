"""
Domain models for the line geometry toolkit.

All models are immutable after construction. Derived indices are computed
lazily and cached on the instance.
"""

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple

from src.utils.helpers import to_mask


# Enums
class GeometryFamily(Enum):
    PG = "pg"
    AG = "ag"
    COMPLETE = "complete"
    NEAR_PENCIL = "near-pencil"


class SetKind(Enum):
    STAR = "star"
    COPLANAR = "coplanar"
    OTHER = "other"


class VerdictKind(Enum):
    COLLINEATION = "collineation"
    CORRELATION = "correlation"


# ============================================================================
# Incidence structures
# ============================================================================

@dataclass(frozen=True)
class LinearSpace:
    """
    A finite linear space on points 0..point_count-1.

    Lines are strictly ascending tuples of point ids; a line's id is its
    position. Build instances through incidence_core.validate, which
    enforces the axioms and the canonical line order.
    """
    point_count: int
    lines: Tuple[Tuple[int, ...], ...]

    @property
    def line_count(self) -> int:
        return len(self.lines)

    @cached_property
    def line_sets(self) -> Tuple[FrozenSet[int], ...]:
        return tuple(frozenset(line) for line in self.lines)

    @cached_property
    def line_masks(self) -> Tuple[int, ...]:
        return tuple(to_mask(line) for line in self.lines)

    @cached_property
    def point_lines(self) -> Tuple[Tuple[int, ...], ...]:
        """Star index: the ids of the lines through each point."""
        index: List[List[int]] = [[] for _ in range(self.point_count)]
        for line_id, line in enumerate(self.lines):
            for p in line:
                index[p].append(line_id)
        return tuple(tuple(ids) for ids in index)

    @cached_property
    def pair_index(self) -> List[int]:
        """Flat n*n table: pair_index[p*n+q] is the line through p and q, -1 on the diagonal."""
        n = self.point_count
        table = [-1] * (n * n)
        for line_id, line in enumerate(self.lines):
            for i, p in enumerate(line):
                row = p * n
                for q in line[i + 1:]:
                    table[row + q] = line_id
                    table[q * n + p] = line_id
        return table

    @cached_property
    def line_index(self) -> Dict[FrozenSet[int], int]:
        return {points: line_id for line_id, points in enumerate(self.line_sets)}

    def line_of(self, p: int, q: int) -> int:
        """Id of the unique line through two distinct points."""
        return self.pair_index[p * self.point_count + q]


@dataclass(frozen=True)
class Subspace:
    """A closed point set of a parent linear space."""
    points: FrozenSet[int]

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, point: object) -> bool:
        return point in self.points

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.points))

    def sorted(self) -> Tuple[int, ...]:
        return tuple(sorted(self.points))


@dataclass(frozen=True)
class DualSpace:
    """
    The dual linear space of a 3-dimensional generalized projective space.

    Dual points are planes of the source, dual lines are pencils of planes.
    """
    source: LinearSpace
    space: LinearSpace
    planes: Tuple[FrozenSet[int], ...]
    axis_of: Tuple[int, ...]      # dual line id -> source line id
    pencil_of: Tuple[int, ...]    # source line id -> dual line id

    @cached_property
    def plane_index(self) -> Dict[FrozenSet[int], int]:
        return {plane: plane_id for plane_id, plane in enumerate(self.planes)}


@dataclass(frozen=True)
class Provenance:
    family: GeometryFamily
    n: int
    q: Optional[int] = None
    degenerate: bool = False

    def describe(self) -> str:
        params = f"{self.n},{self.q}" if self.q is not None else f"{self.n}"
        return f"{self.family.value}({params})"


@dataclass(frozen=True)
class LabeledSpace:
    """A generated space with coordinate labels for its points."""
    space: LinearSpace
    labels: Tuple[Tuple[int, ...], ...]
    provenance: Provenance

    @cached_property
    def point_of_label(self) -> Dict[Tuple[int, ...], int]:
        return {label: point for point, label in enumerate(self.labels)}


# ============================================================================
# Plücker space
# ============================================================================

@dataclass(frozen=True)
class LineGraph:
    """Line graph of a linear space: vertex per line, edge per adjacent pair."""
    line_count: int
    adjacency: Tuple[int, ...]

    @cached_property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(bin(mask).count("1") for mask in self.adjacency)

    @cached_property
    def related(self) -> Tuple[int, ...]:
        """Closed neighbourhoods: adjacency plus the line itself (the related relation)."""
        return tuple(mask | (1 << i) for i, mask in enumerate(self.adjacency))


@dataclass(frozen=True)
class SetClassification:
    kind: SetKind
    vertex: Optional[int] = None
    plane: Optional[FrozenSet[int]] = None


@dataclass(frozen=True)
class MaximalRelatedSet:
    lines: Tuple[int, ...]
    classification: SetClassification

    @property
    def kind(self) -> SetKind:
        return self.classification.kind


# ============================================================================
# Maps
# ============================================================================

@dataclass(frozen=True)
class LineMap:
    """A bijection from the lines of source onto the lines of target."""
    source: LinearSpace
    target: LinearSpace
    image: Tuple[int, ...]


@dataclass(frozen=True)
class PointMap:
    """A point bijection claimed to be a collineation."""
    source: LinearSpace
    target: LinearSpace
    image: Tuple[int, ...]


@dataclass(frozen=True)
class CorrelationMap:
    """A collineation of source onto the dual of target."""
    source: LinearSpace
    target: LinearSpace
    dual: DualSpace
    image: Tuple[int, ...]    # source point -> dual point (plane id of target)

    @property
    def plane_map(self) -> Tuple[FrozenSet[int], ...]:
        return tuple(self.dual.planes[plane_id] for plane_id in self.image)


@dataclass(frozen=True)
class CorrelationSeed:
    """A point-to-plane map on a generated space and its induced line map."""
    labeled: LabeledSpace
    plane_of: Tuple[FrozenSet[int], ...]
    line_map: LineMap


@dataclass(frozen=True)
class MapVerdict:
    kind: VerdictKind
    probe_point: int
    probe_image: SetClassification
    point_map: Optional[PointMap] = None
    correlation_map: Optional[CorrelationMap] = None


# ============================================================================
# Reports
# ============================================================================

@dataclass(frozen=True)
class PredicateResult:
    """Boolean outcome of an exhaustive check plus a counterexample on failure."""
    holds: bool
    witness: Optional[tuple] = None

    def __bool__(self) -> bool:
        return self.holds


@dataclass
class AutomorphismTally:
    """Result of an adjacency-preserving bijection search."""
    total: int = 0
    collineation: int = 0
    correlation: int = 0
    classified: bool = False
    strategy: str = "exhaustive"
    nodes: int = 0
    maps: Optional[List[LineMap]] = None

    def merge(self, other: "AutomorphismTally") -> "AutomorphismTally":
        self.total += other.total
        self.collineation += other.collineation
        self.correlation += other.correlation
        self.nodes += other.nodes
        if other.maps is not None:
            self.maps = (self.maps or []) + other.maps
        return self
