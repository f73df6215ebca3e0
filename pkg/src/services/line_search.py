"""
Backtracking search for adjacency-preserving line bijections.

Domains are bitsets of candidate target lines. Assigning s -> t intersects
every open domain with the neighbours of t (if the line is adjacent to s)
or with the non-neighbours of t (otherwise), which enforces adjacency
consistency of the partial bijection in both directions.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from src.errors import PreconditionViolatedError, SearchBudgetExceededError
from src.models import LineGraph
from src.utils.helpers import iter_bits, popcount
import logging

logger = logging.getLogger(__name__)


@dataclass
class OrbitLevel:
    """One level of a stabilizer chain: a base line, its orbit, one map per orbit point."""
    base: int
    orbit: List[int]
    transversal: Dict[int, Tuple[int, ...]] = field(default_factory=dict)


class LineMapSearch:
    """
    Mutable search state for bijections source lines -> target lines.

    Attributes:
        source: Line graph of the source space
        target: Line graph of the target space
        budget: Maximum number of search nodes
        nodes: Search nodes visited so far
        leaves: Complete bijections produced so far
        order: Static variable order (descending degree, then most
            neighbours among the lines already ordered)
    """

    def __init__(self, source: LineGraph, target: LineGraph, budget: int):
        self.source = source
        self.target = target
        self.budget = budget
        self.nodes = 0
        self.leaves = 0
        self.size = source.line_count
        self.full = (1 << target.line_count) - 1
        self.order = self._variable_order()

    def _variable_order(self) -> List[int]:
        adjacency = self.source.adjacency
        degrees = self.source.degrees
        order: List[int] = []
        placed = 0
        remaining = set(range(self.size))
        while remaining:
            nxt = max(remaining, key=lambda u: (popcount(adjacency[u] & placed), degrees[u], -u))
            order.append(nxt)
            placed |= 1 << nxt
            remaining.discard(nxt)
        return order

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise SearchBudgetExceededError(self.budget, "line map search")

    # ------------------------------------------------------------------
    # Domains
    # ------------------------------------------------------------------

    def initial_domains(self) -> Optional[List[int]]:
        """Degree-filtered domains, or None when the graphs cannot match."""
        if self.source.line_count != self.target.line_count:
            return None
        by_degree: Dict[int, int] = {}
        for t, degree in enumerate(self.target.degrees):
            by_degree[degree] = by_degree.get(degree, 0) | (1 << t)
        domains = [by_degree.get(degree, 0) for degree in self.source.degrees]
        if not all(domains):
            return None
        return domains

    def assign(self, domains: List[int], open_mask: int, s: int, t: int) -> Optional[List[int]]:
        """
        Forward-check the assignment s -> t against every open variable.

        Returns:
            New domain list, or None on a wipeout
        """
        adjacent_s = self.source.adjacency[s]
        adjacent_t = self.target.adjacency[t]
        apart_t = self.full & ~adjacent_t & ~(1 << t)

        child = list(domains)
        child[s] = 1 << t
        for u in iter_bits(open_mask & ~(1 << s)):
            child[u] &= adjacent_t if adjacent_s >> u & 1 else apart_t
            if not child[u]:
                return None
        return child

    def prescribe(self, domains: List[int], open_mask: int,
                  fixed: Dict[int, int]) -> Tuple[Optional[List[int]], int]:
        """Apply several assignments; returns (domains or None, remaining open mask)."""
        for s, t in fixed.items():
            if not domains[s] >> t & 1:
                return None, open_mask
            domains = self.assign(domains, open_mask, s, t)
            open_mask &= ~(1 << s)
            if domains is None:
                return None, open_mask
        return domains, open_mask

    # ------------------------------------------------------------------
    # Enumeration
    # ------------------------------------------------------------------

    def _next_variable(self, open_mask: int) -> int:
        for s in self.order:
            if open_mask >> s & 1:
                return s
        raise ValueError("No open variable")

    def extend(self, domains: List[int], open_mask: int) -> Iterator[Tuple[int, ...]]:
        """Yield every complete bijection extending the given domains."""
        self._tick()
        if not open_mask:
            self.leaves += 1
            yield tuple(d.bit_length() - 1 for d in domains)
            return

        s = self._next_variable(open_mask)
        rest = open_mask & ~(1 << s)
        for t in iter_bits(domains[s]):
            child = self.assign(domains, open_mask, s, t)
            if child is not None:
                yield from self.extend(child, rest)

    def iter_maps(self, fixed: Optional[Dict[int, int]] = None) -> Iterator[Tuple[int, ...]]:
        """
        Yield every adjacency-preserving bijection, optionally with prescribed images.

        Raises:
            SearchBudgetExceededError: If the node budget is exhausted
        """
        domains = self.initial_domains()
        if domains is None:
            return
        open_mask = (1 << self.size) - 1
        if fixed:
            domains, open_mask = self.prescribe(domains, open_mask, fixed)
            if domains is None:
                return
        yield from self.extend(domains, open_mask)

    def first_map(self, fixed: Optional[Dict[int, int]] = None) -> Optional[Tuple[int, ...]]:
        return next(self.iter_maps(fixed), None)

    # ------------------------------------------------------------------
    # Stabilizer chain
    # ------------------------------------------------------------------

    def stabilizer_chain(self) -> List[OrbitLevel]:
        """
        Orbits of a stabilizer chain of the automorphism group of a line graph.

        Base lines are taken in search order. A candidate image t of the
        current base line is in its orbit iff some automorphism fixes the
        earlier base lines and sends the base line to t. The chain stops
        once forward checking leaves every open domain a singleton, since
        the remaining stabilizer is then trivial.

        Returns:
            Levels whose orbit sizes multiply to the group order
        """
        if self.source != self.target:
            raise PreconditionViolatedError("Stabilizer chains need source == target")

        domains = self.initial_domains()
        open_mask = (1 << self.size) - 1
        levels: List[OrbitLevel] = []
        if domains is None:
            return levels

        for base in self.order:
            if all(popcount(domains[u]) == 1 for u in iter_bits(open_mask)):
                break
            level = OrbitLevel(base=base, orbit=[])
            rest = open_mask & ~(1 << base)
            for t in iter_bits(domains[base]):
                if t == base:
                    level.orbit.append(t)
                    continue
                child = self.assign(domains, open_mask, base, t)
                if child is None:
                    continue
                found = next(self.extend(child, rest), None)
                if found is not None:
                    level.orbit.append(t)
                    level.transversal[t] = found
            levels.append(level)
            logger.debug(f"Base line {base}: orbit of size {len(level.orbit)}")

            domains = self.assign(domains, open_mask, base, base)
            open_mask = rest

        return levels
