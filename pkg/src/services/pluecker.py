"""
Plücker space of a linear space: the related relation on lines, stars of
lines, and maximal related sets with their classification.
"""

from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from typing import FrozenSet, Iterable, List, Optional, Tuple

from src.config import config
from src.errors import InputValidationError, SizeCapExceededError, UnknownLineError, UnknownPointError
from src.models import LineGraph, LinearSpace, MaximalRelatedSet, SetClassification, SetKind
from src.services.incidence_core import close
from src.utils.helpers import bits, iter_bits, popcount, to_mask
import logging

logger = logging.getLogger(__name__)


class NotRelatedSetError(InputValidationError):
    """Raised when a line set contains two disjoint lines."""
    pass


class NotMaximalError(InputValidationError):
    """Raised when a related set can be extended by another line."""
    pass


# ============================================================================
# Line graph
# ============================================================================

@lru_cache(maxsize=64)
def line_graph(space: LinearSpace) -> LineGraph:
    """Build the line graph: bit b of adjacency[a] is set iff lines a != b meet."""
    adjacency = [0] * space.line_count
    for star_lines in space.point_lines:
        mask = to_mask(star_lines)
        for line_id in star_lines:
            adjacency[line_id] |= mask
    graph = LineGraph(
        line_count=space.line_count,
        adjacency=tuple(mask & ~(1 << i) for i, mask in enumerate(adjacency)),
    )
    logger.debug(f"Built line graph on {graph.line_count} lines")
    return graph


def _check_line(space: LinearSpace, line_id: int):
    if not 0 <= line_id < space.line_count:
        raise UnknownLineError(line_id, space.line_count)


def related(space: LinearSpace, a: int, b: int) -> bool:
    """Lines are related iff they share a point; every line is related to itself."""
    _check_line(space, a)
    _check_line(space, b)
    return bool(space.line_masks[a] & space.line_masks[b])


def star(space: LinearSpace, point: int) -> FrozenSet[int]:
    """All lines through a point."""
    if not 0 <= point < space.point_count:
        raise UnknownPointError(point, space.point_count)
    return frozenset(space.point_lines[point])


def is_trilateral(space: LinearSpace, a: int, b: int, c: int) -> bool:
    """Three mutually adjacent lines without a common point."""
    for line_id in (a, b, c):
        _check_line(space, line_id)
    if len({a, b, c}) != 3:
        return False
    masks = space.line_masks
    pairwise = masks[a] & masks[b] and masks[a] & masks[c] and masks[b] & masks[c]
    return bool(pairwise) and not masks[a] & masks[b] & masks[c]


# ============================================================================
# Related sets
# ============================================================================

def _mask_of(space: LinearSpace, lines: Iterable[int]) -> int:
    members = set(lines)
    for line_id in members:
        _check_line(space, line_id)
    return to_mask(members)


def is_related_set(space: LinearSpace, lines: Iterable[int]) -> bool:
    graph = line_graph(space)
    mask = _mask_of(space, lines)
    return all(graph.related[m] & mask == mask for m in iter_bits(mask))


def _common_related(graph: LineGraph, mask: int) -> int:
    """Lines related to every member of the set."""
    common = (1 << graph.line_count) - 1
    for m in iter_bits(mask):
        common &= graph.related[m]
    return common


def is_maximal_related_set(space: LinearSpace, lines: Iterable[int]) -> bool:
    mask = _mask_of(space, lines)
    if not is_related_set(space, bits(mask)):
        return False
    return _common_related(line_graph(space), mask) == mask


@lru_cache(maxsize=1 << 16)
def join_lines(space: LinearSpace, a: int, b: int) -> FrozenSet[int]:
    """Point set of the join of two lines."""
    return close(space, space.lines[a], space.lines[b])


def classify_lines(space: LinearSpace, lines: Tuple[int, ...]) -> SetClassification:
    """Classify a line set by common vertex or common plane, without checking maximality."""
    if not lines:
        return SetClassification(SetKind.OTHER)

    common = -1
    for line_id in lines:
        common &= space.line_masks[line_id]
    # A single line has more than one common point: no distinguished vertex.
    if common and popcount(common) == 1:
        return SetClassification(SetKind.STAR, vertex=common.bit_length() - 1)
    if len(lines) < 2:
        return SetClassification(SetKind.OTHER)
    if common:
        return SetClassification(SetKind.OTHER)

    plane = join_lines(space, lines[0], lines[1])
    if all(space.line_sets[line_id] <= plane for line_id in lines):
        return SetClassification(SetKind.COPLANAR, plane=plane)
    return SetClassification(SetKind.OTHER)


def classify_maximal_set(space: LinearSpace, lines: Iterable[int]) -> SetClassification:
    """
    Classify a maximal related set as a star, a coplanar set, or other.

    Star(A) when the members share exactly one point A (this wins when both
    descriptions apply); Coplanar(E) when they share no point and the join E
    of the first two members contains every member; Other otherwise,
    including the single-line set.

    Raises:
        NotRelatedSetError: If two members are disjoint
        NotMaximalError: If some other line is related to every member
    """
    members = tuple(sorted(set(lines)))
    mask = _mask_of(space, members)
    if not is_related_set(space, members):
        raise NotRelatedSetError(f"Lines {list(members)} are not mutually related")
    if _common_related(line_graph(space), mask) != mask:
        raise NotMaximalError(f"Related set {list(members)} is not maximal")
    return classify_lines(space, members)


def extend_to_maximal(space: LinearSpace, lines: Iterable[int]) -> MaximalRelatedSet:
    """
    Extend a related set greedily, in line id order, to a maximal one.

    Raises:
        NotRelatedSetError: If the input is not a related set
    """
    members = set(lines)
    if not is_related_set(space, members):
        raise NotRelatedSetError(f"Lines {sorted(members)} are not mutually related")

    graph = line_graph(space)
    mask = to_mask(members)
    for line_id in range(space.line_count):
        if not mask >> line_id & 1 and graph.related[line_id] & mask == mask:
            mask |= 1 << line_id

    result = tuple(bits(mask))
    return MaximalRelatedSet(result, classify_lines(space, result))


# ============================================================================
# Maximal clique enumeration
# ============================================================================

def _bron_kerbosch(adjacency: Tuple[int, ...], r: int, p: int, x: int, out: List[int]):
    if not p and not x:
        out.append(r)
        return
    pivot = max(iter_bits(p | x), key=lambda u: popcount(p & adjacency[u]))
    for v in iter_bits(p & ~adjacency[pivot]):
        _bron_kerbosch(adjacency, r | (1 << v), p & adjacency[v], x & adjacency[v], out)
        p &= ~(1 << v)
        x |= 1 << v


def _expand_branch(adjacency: Tuple[int, ...], r: int, p: int, x: int) -> List[int]:
    out: List[int] = []
    _bron_kerbosch(adjacency, r, p, x, out)
    return out


def maximal_cliques(graph: LineGraph, workers: int = 1) -> List[Tuple[int, ...]]:
    """
    Maximal cliques by Bron–Kerbosch with pivoting on bitsets.

    With workers > 1 the top-level branches run in separate processes;
    the merged output is sorted, so it does not depend on scheduling.
    """
    adjacency = graph.adjacency
    p = (1 << graph.line_count) - 1
    if workers <= 1 or graph.line_count == 0:
        found = _expand_branch(adjacency, 0, p, 0)
    else:
        branches = []
        x = 0
        pivot = max(iter_bits(p), key=lambda u: popcount(p & adjacency[u]))
        for v in iter_bits(p & ~adjacency[pivot]):
            branches.append((1 << v, p & adjacency[v], x & adjacency[v]))
            p &= ~(1 << v)
            x |= 1 << v
        found = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_expand_branch, adjacency, *branch) for branch in branches]
            for future in futures:
                found.extend(future.result())

    return sorted(tuple(bits(mask)) for mask in found)


def maximal_related_sets(space: LinearSpace, max_lines: Optional[int] = None,
                         workers: Optional[int] = None) -> List[MaximalRelatedSet]:
    """
    All maximal related sets, classified, in canonical order.

    Args:
        space: Linear space
        max_lines: Line cap (defaults to config.CLIQUE_MAX_LINES)
        workers: Worker processes (defaults to config.WORKERS)

    Returns:
        List of MaximalRelatedSet sorted by member list

    Raises:
        SizeCapExceededError: If the space has too many lines
    """
    cap = config.CLIQUE_MAX_LINES if max_lines is None else max_lines
    if space.line_count > cap:
        raise SizeCapExceededError("line count", space.line_count, cap)

    cliques = maximal_cliques(line_graph(space), config.WORKERS if workers is None else workers)
    result = [MaximalRelatedSet(lines, classify_lines(space, lines)) for lines in cliques]

    stars = sum(1 for m in result if m.kind is SetKind.STAR)
    coplanar = sum(1 for m in result if m.kind is SetKind.COPLANAR)
    logger.info(f"Found {len(result)} maximal related sets: {stars} stars, "
                f"{coplanar} coplanar, {len(result) - stars - coplanar} other")
    return result
