"""
Independent oracles, fixture builders and Hypothesis settings for the
line geometry tests.

Everything here is deliberately naive: brute-force enumerations that share
no code with the services they check.
"""

from itertools import combinations, product
from typing import FrozenSet, List, Sequence, Set, Tuple

from hypothesis import HealthCheck, settings

from src.models import LineMap, LinearSpace
from src.services.incidence_core import validate


# ============================================================================
# Hypothesis settings
# ============================================================================

# Regular property tests
STANDARD_SETTINGS = settings(max_examples=50, deadline=None)

# Each example builds or searches a geometry
SLOW_SETTINGS = settings(max_examples=15, deadline=None,
                         suppress_health_check=[HealthCheck.too_slow])

# Cheap rejection checks
QUICK_SETTINGS = settings(max_examples=20, deadline=None)


# ============================================================================
# Fixture geometries
# ============================================================================

# Points 0..5; {0,1} spans only itself but {0,1} ∨ {2} is everything while
# {0,1} ∨ {5} = {0,1,5}.
NON_EXCHANGE_LINES = [
    [0, 1], [0, 2, 3], [1, 2, 4], [3, 4, 5],
    [0, 4], [0, 5], [1, 3], [1, 5], [2, 5],
]


def non_exchange_space() -> LinearSpace:
    return validate(6, NON_EXCHANGE_LINES)


def single_line_space(points: int = 3) -> LinearSpace:
    return validate(points, [list(range(points))])


# ============================================================================
# Naive oracles
# ============================================================================

def naive_closure(space: LinearSpace, points) -> FrozenSet[int]:
    """Fixed-point iteration over the lines until nothing changes."""
    closed = set(points)
    changed = True
    while changed:
        changed = False
        for line in space.lines:
            if len(closed & set(line)) >= 2 and not set(line) <= closed:
                closed |= set(line)
                changed = True
    return frozenset(closed)


def exhaustive_dimension(space: LinearSpace) -> int:
    """Smallest k such that some k points span the space, minus one."""
    everything = frozenset(range(space.point_count))
    for k in range(space.point_count + 1):
        for subset in combinations(range(space.point_count), k):
            if naive_closure(space, subset) == everything:
                return k - 1
    return space.point_count - 1


def naive_maximal_cliques(adjacency: Sequence[int]) -> Set[FrozenSet[int]]:
    """All cliques by increasing-index extension, then keep the maximal ones."""
    n = len(adjacency)

    def neighbours(v: int) -> Set[int]:
        return {u for u in range(n) if adjacency[v] >> u & 1}

    neigh = [neighbours(v) for v in range(n)]
    cliques: List[FrozenSet[int]] = []

    def grow(clique: Tuple[int, ...], candidates: Set[int]):
        cliques.append(frozenset(clique))
        for v in sorted(candidates):
            if not clique or v > clique[-1]:
                grow(clique + (v,), candidates & neigh[v])

    grow((), set(range(n)))
    maximal = set()
    for clique in cliques:
        common = set(range(n)) - clique
        for v in clique:
            common &= neigh[v]
        if not common:
            maximal.add(clique)
    return maximal


def networkx_maximal_cliques(adjacency: Sequence[int]) -> Set[FrozenSet[int]]:
    import networkx as nx

    graph = nx.Graph()
    graph.add_nodes_from(range(len(adjacency)))
    for v, mask in enumerate(adjacency):
        for u in range(v + 1, len(adjacency)):
            if mask >> u & 1:
                graph.add_edge(v, u)
    return {frozenset(c) for c in nx.find_cliques(graph)}


def _normalize(vector: Sequence[int], q: int) -> Tuple[int, ...]:
    lead = next(x for x in vector if x % q)
    inverse = next(i for i in range(1, q) if (lead * i) % q == 1)
    return tuple((x * inverse) % q for x in vector)


def projective_lines_by_span(n: int, q: int) -> Set[FrozenSet[Tuple[int, ...]]]:
    """Lines of PG(n, q) as label sets: spans of two independent vectors."""
    vectors = [v for v in product(range(q), repeat=n + 1) if any(v)]
    lines = set()
    for u, v in combinations(vectors, 2):
        span = set()
        for a, b in product(range(q), repeat=2):
            w = tuple((a * x + b * y) % q for x, y in zip(u, v))
            if any(w):
                span.add(_normalize(w, q))
        if len(span) == q + 1:
            lines.add(frozenset(span))
    return lines


def affine_lines_by_cosets(n: int, q: int) -> Set[FrozenSet[Tuple[int, ...]]]:
    """Lines of AG(n, q) as label sets: cosets x + <d>."""
    lines = set()
    for x in product(range(q), repeat=n):
        for d in product(range(q), repeat=n):
            if any(d):
                lines.add(frozenset(
                    tuple((xi + t * di) % q for xi, di in zip(x, d)) for t in range(q)
                ))
    return lines


def line_label_sets(labeled) -> Set[FrozenSet[Tuple[int, ...]]]:
    return {frozenset(labeled.labels[p] for p in line) for line in labeled.space.lines}


# ============================================================================
# Map builders
# ============================================================================

def identity_map(space: LinearSpace) -> LineMap:
    return LineMap(space, space, tuple(range(space.line_count)))


def skew_swap_map(space: LinearSpace) -> Tuple[LineMap, int, int]:
    """Identity except that the first pair of disjoint lines is swapped."""
    for a, b in combinations(range(space.line_count), 2):
        if not space.line_masks[a] & space.line_masks[b]:
            image = list(range(space.line_count))
            image[a], image[b] = b, a
            return LineMap(space, space, tuple(image)), a, b
    raise ValueError("Space has no disjoint lines")


def related_pair_broken(line_map: LineMap, a: int, b: int) -> bool:
    source, target = line_map.source, line_map.target
    before = bool(source.line_masks[a] & source.line_masks[b])
    after = bool(target.line_masks[line_map.image[a]] & target.line_masks[line_map.image[b]])
    return before != after


def pgl_order(n: int, q: int) -> int:
    """Order of PGL(n+1, q): ordered bases divided by the scalars."""
    size = n + 1
    total = 1
    for i in range(size):
        total *= q ** size - q ** i
    return total // (q - 1)

