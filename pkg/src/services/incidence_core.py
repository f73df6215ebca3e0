"""
Finite linear spaces and their subspace lattice.

Span, join, dimension, the exchange axiom, generalized projective
structure and the dual space of a 3-dimensional generalized projective
space.
"""

from functools import lru_cache
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from src.config import config
from src.errors import (
    InputValidationError, PreconditionViolatedError, SearchBudgetExceededError,
    UnknownPointError, DimensionError,
)
from src.models import DualSpace, LinearSpace, PredicateResult, Subspace
import logging

logger = logging.getLogger(__name__)


class PairOnNoLineError(InputValidationError):
    """Raised when two points are joined by no line."""

    def __init__(self, p: int, q: int):
        self.p, self.q = p, q
        super().__init__(f"Points {p} and {q} lie on no line")


class PairOnTwoLinesError(InputValidationError):
    """Raised when two points are joined by more than one line."""

    def __init__(self, p: int, q: int, l1: int, l2: int):
        self.p, self.q, self.l1, self.l2 = p, q, l1, l2
        super().__init__(f"Points {p} and {q} lie on lines {l1} and {l2}")


class ShortLineError(InputValidationError):
    """Raised when a line has fewer than 2 points."""

    def __init__(self, line: int):
        self.line = line
        super().__init__(f"Line {line} has fewer than 2 points")


class DuplicateLineError(InputValidationError):
    """Raised when the same point set is given twice as a line."""

    def __init__(self, l1: int, l2: int):
        self.l1, self.l2 = l1, l2
        super().__init__(f"Lines {l1} and {l2} are identical")


class NotClosedError(InputValidationError):
    """Raised when a point set expected to be a subspace is not closed."""
    pass


class NotThreeDimensionalError(DimensionError):
    """Raised when the dual space is requested for a space of dimension other than 3."""

    def __init__(self, dimension: int):
        self.dimension = dimension
        super().__init__(f"Dual space needs dimension 3, got {dimension}")


class NotGeneralizedProjectiveError(InputValidationError):
    """Raised when a generalized projective space is required."""
    pass


# ============================================================================
# Construction
# ============================================================================

def validate(point_count: int, raw_lines: Sequence[Iterable[int]]) -> LinearSpace:
    """
    Check the linear-space axioms and return the canonical LinearSpace.

    Error ids refer to positions in raw_lines.

    Args:
        point_count: Number of points (ids 0..point_count-1)
        raw_lines: Lines as iterables of point ids

    Returns:
        Validated LinearSpace with ascending lines in lexicographic order

    Raises:
        ShortLineError, DuplicateLineError, PairOnTwoLinesError,
        PairOnNoLineError, UnknownPointError
    """
    if point_count < 0:
        raise InputValidationError(f"Point count must be non-negative, got {point_count}")

    lines: List[Tuple[int, ...]] = []
    first_seen: Dict[Tuple[int, ...], int] = {}
    for line_id, raw in enumerate(raw_lines):
        line = tuple(sorted(set(raw)))
        for p in line:
            if not 0 <= p < point_count:
                raise UnknownPointError(p, point_count)
        if len(line) < 2:
            raise ShortLineError(line_id)
        if line in first_seen:
            raise DuplicateLineError(first_seen[line], line_id)
        first_seen[line] = line_id
        lines.append(line)

    owner: Dict[Tuple[int, int], int] = {}
    for line_id, line in enumerate(lines):
        for p, q in combinations(line, 2):
            if (p, q) in owner:
                raise PairOnTwoLinesError(p, q, owner[(p, q)], line_id)
            owner[(p, q)] = line_id

    if len(owner) != point_count * (point_count - 1) // 2:
        for p, q in combinations(range(point_count), 2):
            if (p, q) not in owner:
                raise PairOnNoLineError(p, q)

    space = LinearSpace(point_count=point_count, lines=tuple(sorted(lines)))
    logger.debug(f"Validated linear space: {point_count} points, {len(lines)} lines")
    return space


def _check_points(space: LinearSpace, points: Iterable[int]) -> FrozenSet[int]:
    members = frozenset(points)
    for p in members:
        if not 0 <= p < space.point_count:
            raise UnknownPointError(p, space.point_count)
    return members


# ============================================================================
# Closure
# ============================================================================

def close(space: LinearSpace, base: Iterable[int], extra: Iterable[int] = ()) -> FrozenSet[int]:
    """
    Closure of base ∪ extra, where base is already closed.

    Each new point is joined with every point already in the closure, so
    pairs inside base are never revisited.
    """
    n = space.point_count
    table = space.pair_index
    lines = space.lines
    closed = set(base)
    seen = set(closed)
    frontier = []
    for p in extra:
        if p not in seen:
            seen.add(p)
            frontier.append(p)

    while frontier:
        p = frontier.pop()
        row = p * n
        for q in tuple(closed):
            for r in lines[table[row + q]]:
                if r not in seen:
                    seen.add(r)
                    frontier.append(r)
        closed.add(p)

    return frozenset(closed)


def span(space: LinearSpace, points: Iterable[int]) -> Subspace:
    """
    Smallest subspace containing the given points.

    Raises:
        UnknownPointError: If a point is out of range
    """
    members = _check_points(space, points)
    return Subspace(close(space, (), sorted(members)))


def join(space: LinearSpace, first: Iterable[int], second: Iterable[int]) -> Subspace:
    """Span of the union of two point sets."""
    return span(space, set(first) | set(second))


def is_closed(space: LinearSpace, points: Iterable[int]) -> bool:
    members = frozenset(points)
    n = space.point_count
    for p, q in combinations(members, 2):
        if not space.line_sets[space.pair_index[p * n + q]] <= members:
            return False
    return True


def lines_in(space: LinearSpace, points: Iterable[int]) -> List[int]:
    """Ids of the lines contained in a point set, ascending."""
    members = frozenset(points)
    return [line_id for line_id, line in enumerate(space.line_sets) if line <= members]


def induced_space(space: LinearSpace, points: Iterable[int]) -> Tuple[LinearSpace, Tuple[int, ...]]:
    """
    The linear space induced on a closed point set.

    Args:
        space: Parent space
        points: Closed point set

    Returns:
        Tuple of (induced space on 0..k-1, relabelling new id -> parent id)

    Raises:
        NotClosedError: If the point set is not a subspace
    """
    members = _check_points(space, points)
    if not is_closed(space, members):
        raise NotClosedError(f"Point set {sorted(members)} is not a subspace")

    order = tuple(sorted(members))
    position = {p: i for i, p in enumerate(order)}
    induced = [
        [position[p] for p in space.lines[line_id]]
        for line_id in lines_in(space, members)
    ]
    return validate(len(order), induced), order


def subspaces(space: LinearSpace, node_budget: Optional[int] = None) -> List[FrozenSet[int]]:
    """
    All closed point sets, ordered by size then lexicographically.

    Raises:
        SearchBudgetExceededError: If more closures than the budget are needed
    """
    found, _ = _walk_subspaces(space, config.NODE_BUDGET if node_budget is None else node_budget)
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def _walk_subspaces(space: LinearSpace, budget: int):
    """Breadth-first walk of the lattice; returns (subspaces, extension table)."""
    start = frozenset()
    found = {start}
    queue = [start]
    extensions: Dict[FrozenSet[int], Dict[int, FrozenSet[int]]] = {}
    closures = 0

    while queue:
        current = queue.pop()
        ext = {}
        for p in range(space.point_count):
            if p in current:
                continue
            closures += 1
            if closures > budget:
                raise SearchBudgetExceededError(budget, "subspace enumeration")
            bigger = close(space, current, (p,))
            ext[p] = bigger
            if bigger not in found:
                found.add(bigger)
                queue.append(bigger)
        extensions[current] = ext

    return found, extensions


# ============================================================================
# Exchange axiom and dimension
# ============================================================================

def is_exchange_space(space: LinearSpace, max_points: Optional[int] = None,
                      node_budget: Optional[int] = None) -> PredicateResult:
    """
    Exhaustive check of the exchange axiom.

    S ranges over closed sets only, since S ∨ {A} and ⟨S⟩ depend on S
    only through its span.

    Returns:
        PredicateResult with witness (S, A, B) on failure

    Raises:
        SearchBudgetExceededError: Above the point cap or the node budget
    """
    max_points = config.EXCHANGE_MAX_POINTS if max_points is None else max_points
    if space.point_count > max_points:
        raise SearchBudgetExceededError(max_points, f"exchange check on {space.point_count} points")

    _, extensions = _walk_subspaces(space, config.NODE_BUDGET if node_budget is None else node_budget)
    for current in sorted(extensions, key=lambda s: (len(s), sorted(s))):
        ext = extensions[current]
        for a in sorted(ext):
            for b in sorted(ext[a] - current):
                if b != a and a not in ext[b]:
                    logger.info(f"Exchange axiom fails: S={sorted(current)}, A={a}, B={b}")
                    return PredicateResult(False, (current, a, b))

    return PredicateResult(True)


def _greedy_basis(space: LinearSpace) -> List[int]:
    basis: List[int] = []
    closed: FrozenSet[int] = frozenset()
    for p in range(space.point_count):
        if len(closed) == space.point_count:
            break
        if p not in closed:
            basis.append(p)
            closed = close(space, closed, (p,))
    return basis


def _search_dimension(space: LinearSpace, upper: int, budget: int) -> int:
    """
    Branch and bound over generating sets in ascending point order.

    Only points outside the current span are added: a minimum generating set
    never contains a point spanned by its smaller members.
    """
    n = space.point_count
    best = upper
    nodes = 0

    def descend(start: int, size: int, closed: FrozenSet[int]):
        nonlocal best, nodes
        nodes += 1
        if nodes > budget:
            raise SearchBudgetExceededError(budget, "dimension search")
        if len(closed) == n:
            best = min(best, size)
            return
        if size + 1 >= best:
            return
        for p in range(start, n):
            if p not in closed:
                descend(p + 1, size + 1, close(space, closed, (p,)))

    descend(0, 0, frozenset())
    logger.debug(f"Dimension search visited {nodes} nodes")
    return best - 1


@lru_cache(maxsize=64)
def _auto_dimension(space: LinearSpace, budget: int, exchange_cap: int) -> int:
    greedy = len(_greedy_basis(space))
    if is_generalized_projective_space(space).holds:
        return greedy - 1
    if space.point_count <= exchange_cap and is_exchange_space(space, exchange_cap, budget).holds:
        return greedy - 1
    return _search_dimension(space, greedy, budget)


def dimension(space: LinearSpace, method: str = "auto", node_budget: Optional[int] = None) -> int:
    """
    Dimension: minimum size of a generating set, minus one.

    Args:
        space: Linear space
        method: "auto" (greedy when the space is known to satisfy the exchange
            axiom, exact search otherwise), "greedy" or "search"
        node_budget: Node limit for the exact search

    Returns:
        Dimension, -1 for the empty space

    Raises:
        SearchBudgetExceededError: If the exact search exceeds the budget
    """
    if space.point_count == 0:
        return -1

    budget = config.NODE_BUDGET if node_budget is None else node_budget
    if method == "greedy":
        return len(_greedy_basis(space)) - 1
    if method == "search":
        return _search_dimension(space, len(_greedy_basis(space)), budget)
    if method != "auto":
        raise ValueError(f"Unknown dimension method: {method}")
    return _auto_dimension(space, budget, config.EXCHANGE_MAX_POINTS)


def subspace_dimension(space: LinearSpace, subspace: Iterable[int],
                       node_budget: Optional[int] = None) -> int:
    """
    Dimension of the linear space induced on a closed set.

    Raises:
        NotClosedError: If the set is not closed
    """
    points = subspace.points if isinstance(subspace, Subspace) else subspace
    induced, _ = induced_space(space, points)
    return dimension(induced, node_budget=node_budget)


# ============================================================================
# Planes and generalized projective structure
# ============================================================================

@lru_cache(maxsize=64)
def _planes(space: LinearSpace) -> Tuple[FrozenSet[int], ...]:
    n = space.point_count
    table = space.pair_index
    found = set()

    for line_id, line in enumerate(space.lines):
        covered = set(line)
        for p in range(n):
            if p in covered:
                continue
            found.add(close(space, line, (p,)))
            # A point on a line joining p to the base line spans the same plane with it.
            for x in line:
                covered.update(space.lines[table[p * n + x]])

    return tuple(sorted(found, key=lambda plane: sorted(plane)))


def planes(space: LinearSpace) -> List[Subspace]:
    """
    All planes, in lexicographic order of their sorted point lists.

    Each plane is the closure of a line and a point off it; three
    non-collinear generators make every such closure 2-dimensional.
    """
    result = [Subspace(plane) for plane in _planes(space)]
    logger.debug(f"Found {len(result)} planes")
    return result


@lru_cache(maxsize=64)
def _generalized_projective(space: LinearSpace) -> PredicateResult:
    for plane in _planes(space):
        inside = lines_in(space, plane)
        for a, b in combinations(inside, 2):
            if not space.line_masks[a] & space.line_masks[b]:
                return PredicateResult(False, (plane, a, b))
    return PredicateResult(True)


def is_generalized_projective_space(space: LinearSpace) -> PredicateResult:
    """
    Check that any two lines of a common plane meet.

    Returns:
        PredicateResult with witness (plane, line, line) on failure
    """
    return _generalized_projective(space)


def verbind_check(space: LinearSpace, points: Iterable[int], x: int) -> bool:
    """
    Check S ∨ {X} = union of the lines X ∨ Y over Y in ⟨S⟩.

    Raises:
        PreconditionViolatedError: If S is empty, X lies in ⟨S⟩, or the
            space is not generalized projective
    """
    members = _check_points(space, points)
    _check_points(space, (x,))
    if not members:
        raise PreconditionViolatedError("S must be non-empty")
    closed = close(space, (), sorted(members))
    if x in closed:
        raise PreconditionViolatedError(f"Point {x} lies in the span of S")
    if not is_generalized_projective_space(space).holds:
        raise PreconditionViolatedError("Space is not a generalized projective space")

    left = close(space, closed, (x,))
    right = set()
    for y in closed:
        right.update(space.lines[space.line_of(x, y)])
    return left == frozenset(right)


def collinear_by_stars(space: LinearSpace, q: int, r: int, s: int) -> bool:
    """Three distinct points are collinear iff their stars share exactly one line."""
    _check_points(space, (q, r, s))
    if len({q, r, s}) != 3:
        raise PreconditionViolatedError("Points must be distinct")
    shared = set(space.point_lines[q]) & set(space.point_lines[r]) & set(space.point_lines[s])
    return len(shared) == 1


def lines_meet_planes(space: LinearSpace) -> PredicateResult:
    """
    Check that every line meets every plane.

    Returns:
        PredicateResult with witness (line, plane) on failure
    """
    for plane in _planes(space):
        for line_id, line in enumerate(space.line_sets):
            if not line & plane:
                return PredicateResult(False, (line_id, plane))
    return PredicateResult(True)


# ============================================================================
# Dual space
# ============================================================================

@lru_cache(maxsize=16)
def dual_space(space: LinearSpace) -> DualSpace:
    """
    Dual linear space: planes as points, pencils of planes as lines.

    Raises:
        NotThreeDimensionalError: If dimension(space) != 3
        NotGeneralizedProjectiveError: If some plane has two disjoint lines
    """
    dim = dimension(space)
    if dim != 3:
        raise NotThreeDimensionalError(dim)
    if not is_generalized_projective_space(space).holds:
        raise NotGeneralizedProjectiveError("Dual space needs a generalized projective space")

    plane_sets = _planes(space)
    pencils = []
    for line_id, line in enumerate(space.line_sets):
        pencil = tuple(i for i, plane in enumerate(plane_sets) if line <= plane)
        if len(pencil) < 2:
            raise NotGeneralizedProjectiveError(f"Pencil of line {line_id} has {len(pencil)} planes")
        pencils.append(pencil)

    dual = validate(len(plane_sets), pencils)
    axis_by_pencil = {pencil: line_id for line_id, pencil in enumerate(pencils)}
    axis_of = tuple(axis_by_pencil[pencil] for pencil in dual.lines)
    pencil_of = [0] * space.line_count
    for dual_line, axis in enumerate(axis_of):
        pencil_of[axis] = dual_line

    logger.info(f"Built dual space: {dual.point_count} planes, {dual.line_count} pencils")
    return DualSpace(
        source=space,
        space=dual,
        planes=plane_sets,
        axis_of=axis_of,
        pencil_of=tuple(pencil_of),
    )
