"""
Adjacency-preserving line bijections and their point-level origin.

An adjacency-preserving bijection between the lines of two linear spaces
of dimension at least 3 comes either from a collineation (stars go to
stars) or from a correlation (stars go to coplanar sets). This module
checks the hypothesis, decides which case applies, rebuilds the point map
and enumerates all such bijections of small spaces.
"""

from concurrent.futures import ProcessPoolExecutor
from math import prod
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from src.config import config
from src.errors import (
    ConsistencyAlarm, DimensionError, HypothesisError, InputValidationError,
    PreconditionViolatedError, SizeCapExceededError,
)
from src.models import (
    AutomorphismTally, CorrelationMap, LineMap, LinearSpace, MapVerdict, MaximalRelatedSet,
    PointMap, PredicateResult, SetClassification, SetKind, VerdictKind,
)
from src.services.incidence_core import dimension, dual_space, is_generalized_projective_space
from src.services.line_search import LineMapSearch
from src.services.pluecker import (
    classify_lines, classify_maximal_set, is_maximal_related_set, join_lines, line_graph,
)
from src.utils.helpers import bits, popcount
import logging

logger = logging.getLogger(__name__)


class NotBijectiveError(InputValidationError):
    """Raised when a line map is not a bijection between the line sets."""
    pass


class HypothesisViolatedError(HypothesisError):
    """Raised when a line map does not preserve adjacency in both directions."""

    def __init__(self, witness: Tuple[int, int]):
        self.witness = witness
        a, b = witness
        super().__init__(f"Adjacency not preserved for source lines {a} and {b}")


class DimensionTooSmallError(DimensionError):
    """Raised when the source or target space has dimension below 3."""

    def __init__(self, side: str, dim: int):
        self.side = side
        self.dimension = dim
        super().__init__(f"{side} space has dimension {dim}, need at least 3")


class NotStarPreservingError(InputValidationError):
    """Raised when a collineation is requested from a map that sends a star elsewhere."""
    pass


class NotCoplanarPreservingError(InputValidationError):
    """Raised when a correlation is requested from a map that does not send stars to coplanar sets."""
    pass


class NotCollineationError(InputValidationError):
    """Raised when a point map does not send every line onto a line."""

    def __init__(self, line: int, message: Optional[str] = None):
        self.line = line
        super().__init__(message or f"Image of line {line} is not a line")


class NotCorrelationError(InputValidationError):
    """Raised when a point-to-plane map is not a correlation."""
    pass


class ImageNotMaximalError(ConsistencyAlarm):
    """Raised when an adjacency-preserving map sends a maximal related set to a non-maximal one."""
    pass


class NonUniformStarImagesError(ConsistencyAlarm):
    """Raised when some stars map to stars and others do not."""
    pass


class UnexpectedStarImageError(ConsistencyAlarm):
    """Raised when a star image is neither a star nor a coplanar set."""
    pass


class WellDefinednessFailureError(ConsistencyAlarm):
    """Raised when a rebuilt point map disagrees with the line map it came from."""
    pass


class TargetNotGenProjDim3Error(ConsistencyAlarm):
    """Raised when a correlation-type map has a target that is not a 3-dimensional generalized projective space."""
    pass


class SourceNotGenProjDim3Error(ConsistencyAlarm):
    """Raised when a correlation-type map has a source that is not a 3-dimensional generalized projective space."""
    pass


# ============================================================================
# Hypothesis
# ============================================================================

def _check_bijective(line_map: LineMap):
    source, target, image = line_map.source, line_map.target, line_map.image
    if source.line_count != target.line_count:
        raise NotBijectiveError(
            f"Source has {source.line_count} lines, target has {target.line_count}"
        )
    if len(image) != source.line_count:
        raise NotBijectiveError(f"Image has {len(image)} entries, expected {source.line_count}")
    seen: Dict[int, int] = {}
    for line_id, t in enumerate(image):
        if not 0 <= t < target.line_count:
            raise NotBijectiveError(f"Image of line {line_id} is {t}, not a target line")
        if t in seen:
            raise NotBijectiveError(f"Lines {seen[t]} and {line_id} both map to {t}")
        seen[t] = line_id


def check_adjacency_preserving(line_map: LineMap) -> PredicateResult:
    """
    Check a ρ b <=> φ(a) ρ' φ(b) over all pairs of lines.

    Returns:
        PredicateResult with witness (a, b) on failure

    Raises:
        NotBijectiveError: If the map is not a bijection
    """
    _check_bijective(line_map)
    image = line_map.image
    inverse = [0] * len(image)
    for line_id, t in enumerate(image):
        inverse[t] = line_id

    source_adj = line_graph(line_map.source).adjacency
    target_adj = line_graph(line_map.target).adjacency
    for a, t in enumerate(image):
        mapped = 0
        b_mask = source_adj[a]
        while b_mask:
            low = b_mask & -b_mask
            mapped |= 1 << image[low.bit_length() - 1]
            b_mask ^= low
        diff = mapped ^ target_adj[t]
        if diff:
            b = inverse[(diff & -diff).bit_length() - 1]
            logger.debug(f"Adjacency broken between lines {a} and {b}")
            return PredicateResult(False, (min(a, b), max(a, b)))

    return PredicateResult(True)


def _require_hypothesis(line_map: LineMap):
    result = check_adjacency_preserving(line_map)
    if not result.holds:
        raise HypothesisViolatedError(result.witness)


def _require_dimensions(line_map: LineMap):
    for side, space in (("source", line_map.source), ("target", line_map.target)):
        dim = dimension(space)
        if dim < 3:
            raise DimensionTooSmallError(side, dim)


# ============================================================================
# Maximal sets and stars
# ============================================================================

def _image_set(line_map: LineMap, lines: Iterable[int]) -> MaximalRelatedSet:
    image = tuple(sorted(line_map.image[line_id] for line_id in lines))
    if not is_maximal_related_set(line_map.target, image):
        raise ImageNotMaximalError(f"Image {list(image)} is not a maximal related set")
    return MaximalRelatedSet(image, classify_lines(line_map.target, image))


def map_maximal_set(line_map: LineMap, lines: Iterable[int], verified: bool = False) -> MaximalRelatedSet:
    """
    Image of a maximal related set, checked maximal and classified in the target.

    Args:
        line_map: Adjacency-preserving bijection
        lines: Maximal related set of the source
        verified: Skip the hypothesis check (caller already ran it)

    Raises:
        HypothesisViolatedError: If the map does not preserve adjacency
        NotMaximalError, NotRelatedSetError: If the input set is not maximal
        ImageNotMaximalError: If the image is not maximal (never expected)
    """
    if not verified:
        _require_hypothesis(line_map)
    members = tuple(sorted(set(lines)))
    classify_maximal_set(line_map.source, members)
    return _image_set(line_map, members)


def _star_images(line_map: LineMap, points: Iterable[int]) -> List[SetClassification]:
    source = line_map.source
    return [_image_set(line_map, source.point_lines[p]).classification for p in points]


def _inverse_map(line_map: LineMap) -> LineMap:
    inverse = [0] * len(line_map.image)
    for line_id, t in enumerate(line_map.image):
        inverse[t] = line_id
    return LineMap(line_map.target, line_map.source, tuple(inverse))


# ============================================================================
# Verdicts
# ============================================================================

def classify_map(line_map: LineMap, verified: bool = False) -> MapVerdict:
    """
    Decide whether a line bijection comes from a collineation or a correlation.

    The star at point 0 is probed; its image decides the case. The verdict
    is then checked against every other star, and in the collineation case
    against every star of the target under the inverse map.

    Args:
        line_map: Line bijection between spaces of dimension >= 3
        verified: Skip the hypothesis and dimension checks

    Returns:
        MapVerdict with the rebuilt point map or correlation

    Raises:
        HypothesisViolatedError: If adjacency is not preserved
        DimensionTooSmallError: If either side has dimension < 3
        NonUniformStarImagesError: If stars do not all map alike (never expected)
    """
    if not verified:
        _require_hypothesis(line_map)
        _require_dimensions(line_map)

    source = line_map.source
    images = _star_images(line_map, range(source.point_count))
    probe = images[0]
    if probe.kind is SetKind.OTHER:
        raise UnexpectedStarImageError("Image of the star at point 0 is neither a star nor coplanar")

    mixed = [p for p, image in enumerate(images) if image.kind is not probe.kind]
    if mixed:
        raise NonUniformStarImagesError(
            f"Star at point 0 maps to a {probe.kind.value} set but the star at point {mixed[0]} does not"
        )

    if probe.kind is SetKind.STAR:
        inverse = _inverse_map(line_map)
        back = _star_images(inverse, range(line_map.target.point_count))
        stray = [p for p, image in enumerate(back) if image.kind is not SetKind.STAR]
        if stray:
            raise NonUniformStarImagesError(
                f"Inverse map sends the star at target point {stray[0]} to a non-star"
            )
        kappa = reconstruct_collineation(line_map, verified=True)
        return MapVerdict(VerdictKind.COLLINEATION, 0, probe, point_map=kappa)

    delta = reconstruct_correlation(line_map, verified=True)
    return MapVerdict(VerdictKind.CORRELATION, 0, probe, correlation_map=delta)


def reconstruct_collineation(line_map: LineMap, verified: bool = False) -> PointMap:
    """
    Rebuild the collineation behind a star-preserving line bijection.

    Each point P goes to a^φ ∩ b^φ for the first two lines a, b through P;
    every other line through P must map through the same point.

    Raises:
        NotStarPreservingError: If the star at point 0 does not map to a star
        WellDefinednessFailureError: If a later star disagrees, or the
            rebuilt map is not a bijection reproducing φ (never expected)
    """
    if not verified:
        _require_hypothesis(line_map)

    source, target, image = line_map.source, line_map.target, line_map.image
    masks = target.line_masks
    kappa: List[int] = []
    for p in range(source.point_count):
        star_lines = source.point_lines[p]
        meet = masks[image[star_lines[0]]] & masks[image[star_lines[1]]] if len(star_lines) > 1 else 0
        if popcount(meet) != 1 or any(not masks[image[l]] & meet for l in star_lines):
            if p == 0:
                raise NotStarPreservingError("Star at point 0 does not map to a star")
            raise WellDefinednessFailureError(f"Star at point {p} does not map to a star")
        kappa.append(meet.bit_length() - 1)

    if len(set(kappa)) != source.point_count or source.point_count != target.point_count:
        raise WellDefinednessFailureError("Rebuilt point map is not a bijection")
    for line_id, line in enumerate(source.lines):
        if frozenset(kappa[p] for p in line) != target.line_sets[image[line_id]]:
            raise WellDefinednessFailureError(f"Rebuilt point map disagrees with φ on line {line_id}")

    return PointMap(source, target, tuple(kappa))


def _require_gen_proj_dim3(space: LinearSpace, error: type, side: str):
    dim = dimension(space)
    if dim != 3 or not is_generalized_projective_space(space).holds:
        raise error(f"{side} space is not a 3-dimensional generalized projective space (dimension {dim})")


def reconstruct_correlation(line_map: LineMap, verified: bool = False) -> CorrelationMap:
    """
    Rebuild the correlation behind a line bijection sending stars to coplanar sets.

    Each point P goes to the plane spanned by the images of the lines
    through P. The target and then the source are checked to be
    3-dimensional generalized projective spaces, and the result is checked
    to be a collineation onto the dual of the target.

    Raises:
        NotCoplanarPreservingError: If the star at point 0 does not map to a coplanar set
        TargetNotGenProjDim3Error, SourceNotGenProjDim3Error: Never expected
        WellDefinednessFailureError: If the rebuilt map is not a collineation onto the dual
    """
    if not verified:
        _require_hypothesis(line_map)

    source, target, image = line_map.source, line_map.target, line_map.image
    probe = classify_lines(target, tuple(sorted(image[l] for l in source.point_lines[0])))
    if probe.kind is not SetKind.COPLANAR:
        raise NotCoplanarPreservingError("Star at point 0 does not map to a coplanar set")

    _require_gen_proj_dim3(target, TargetNotGenProjDim3Error, "Target")
    dual = dual_space(target)
    _require_gen_proj_dim3(source, SourceNotGenProjDim3Error, "Source")

    delta: List[int] = []
    for p in range(source.point_count):
        star_lines = source.point_lines[p]
        plane = join_lines(target, image[star_lines[0]], image[star_lines[1]])
        plane_id = dual.plane_index.get(plane)
        if plane_id is None or any(not target.line_sets[image[l]] <= plane for l in star_lines):
            raise WellDefinednessFailureError(f"Star at point {p} does not map into a plane")
        delta.append(plane_id)

    if len(set(delta)) != source.point_count or source.point_count != dual.space.point_count:
        raise WellDefinednessFailureError("Rebuilt point-to-plane map is not a bijection")
    for line_id, line in enumerate(source.lines):
        pencil = dual.space.line_sets[dual.pencil_of[image[line_id]]]
        if frozenset(delta[p] for p in line) != pencil:
            raise WellDefinednessFailureError(
                f"Line {line_id} does not map onto the pencil of its image line"
            )

    return CorrelationMap(source, target, dual, tuple(delta))


# ============================================================================
# Inducing line maps
# ============================================================================

def induce_line_map(kappa: PointMap) -> LineMap:
    """
    Line bijection of a collineation: each line goes to the line through its image points.

    Raises:
        NotCollineationError: If the map is not bijective or some line image is not a line
    """
    source, target = kappa.source, kappa.target
    if len(kappa.image) != source.point_count or len(set(kappa.image)) != target.point_count:
        raise NotCollineationError(-1, "Point map is not a bijection")

    image: List[int] = []
    for line_id, line in enumerate(source.lines):
        t = target.line_index.get(frozenset(kappa.image[p] for p in line))
        if t is None:
            raise NotCollineationError(line_id)
        image.append(t)

    if len(set(image)) != target.line_count:
        raise NotCollineationError(-1, "Induced line map is not onto the target lines")
    return LineMap(source, target, tuple(image))


def induce_line_map_from_correlation(source: LinearSpace, target: LinearSpace,
                                     plane_of: Sequence[Iterable[int]]) -> LineMap:
    """
    Line bijection of a point-to-plane map: each line goes to the common line of its image planes.

    Args:
        source: Source space
        target: 3-dimensional generalized projective space
        plane_of: For each source point, the point set of a target plane

    Raises:
        NotCorrelationError: If the target has no dual, a set is not a plane,
            the map is not bijective, or collinear points do not go to planes
            through one line
    """
    try:
        dual = dual_space(target)
    except (DimensionError, InputValidationError) as e:
        raise NotCorrelationError(f"Target has no dual space: {e}")

    if len(plane_of) != source.point_count or source.point_count != dual.space.point_count:
        raise NotCorrelationError(
            f"{source.point_count} points cannot map onto {dual.space.point_count} planes"
        )

    planes: List[FrozenSet[int]] = []
    for p, plane in enumerate(plane_of):
        members = frozenset(plane)
        if members not in dual.plane_index:
            raise NotCorrelationError(f"Image of point {p} is not a plane")
        planes.append(members)
    if len(set(planes)) != source.point_count:
        raise NotCorrelationError("Point-to-plane map is not injective")

    image: List[int] = []
    for line_id, line in enumerate(source.lines):
        axis = planes[line[0]] & planes[line[1]]
        t = target.line_index.get(axis)
        if t is None or any(not axis <= planes[p] for p in line):
            raise NotCorrelationError(f"Planes of the points of line {line_id} share no common line")
        image.append(t)

    if len(set(image)) != target.line_count:
        raise NotCorrelationError("Induced line map is not a bijection")
    return LineMap(source, target, tuple(image))


def compose_line_maps(first: LineMap, second: LineMap) -> LineMap:
    """Apply first, then second."""
    if first.target != second.source:
        raise PreconditionViolatedError("Target of the first map must be the source of the second")
    return LineMap(first.source, second.target, tuple(second.image[t] for t in first.image))


def invert_line_map(line_map: LineMap) -> LineMap:
    _check_bijective(line_map)
    return _inverse_map(line_map)


# ============================================================================
# Search
# ============================================================================

def find_collineation(source: LinearSpace, target: LinearSpace,
                      node_budget: Optional[int] = None) -> Optional[PointMap]:
    """
    First collineation from source onto target found through the line graphs.

    Adjacency-preserving bijections are searched in order; the first whose
    probe star maps to a star is turned into a point map.

    Returns:
        PointMap, or None if the spaces are not isomorphic

    Raises:
        DimensionTooSmallError: If either side has dimension < 3
        SearchBudgetExceededError: If the search exceeds the budget
    """
    for side, space in (("source", source), ("target", target)):
        dim = dimension(space)
        if dim < 3:
            raise DimensionTooSmallError(side, dim)

    search = LineMapSearch(line_graph(source), line_graph(target),
                           config.NODE_BUDGET if node_budget is None else node_budget)
    for image in search.iter_maps():
        line_map = LineMap(source, target, image)
        if classify_lines(target, tuple(sorted(image[l] for l in source.point_lines[0]))).kind is SetKind.STAR:
            logger.info(f"Found collineation after {search.nodes} search nodes")
            return reconstruct_collineation(line_map, verified=True)

    logger.info(f"No collineation found ({search.nodes} search nodes)")
    return None


def _tally_branch(space: LinearSpace, budget: int, fixed: Optional[Dict[int, int]],
                  keep_maps: bool, classify: bool) -> AutomorphismTally:
    search = LineMapSearch(line_graph(space), line_graph(space), budget)
    tally = AutomorphismTally(classified=classify, maps=[] if keep_maps else None)
    for image in search.iter_maps(fixed):
        tally.total += 1
        line_map = LineMap(space, space, image)
        if classify:
            verdict = classify_map(line_map, verified=True)
            if verdict.kind is VerdictKind.COLLINEATION:
                tally.collineation += 1
            else:
                tally.correlation += 1
        if keep_maps:
            tally.maps.append(line_map)
    tally.nodes = search.nodes
    return tally


def _enumerate_exhaustive(space: LinearSpace, budget: int, keep_maps: bool,
                          classify: bool, workers: int) -> AutomorphismTally:
    if workers <= 1 or space.line_count == 0:
        return _tally_branch(space, budget, None, keep_maps, classify)

    search = LineMapSearch(line_graph(space), line_graph(space), budget)
    domains = search.initial_domains()
    tally = AutomorphismTally(classified=classify, maps=[] if keep_maps else None)
    if domains is None:
        return tally

    # One branch per image of the first search variable, each with its own node budget.
    first = search.order[0]
    candidates = bits(domains[first])
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_tally_branch, space, budget, {first: t}, keep_maps, classify)
            for t in candidates
        ]
        for future in futures:
            tally.merge(future.result())

    if tally.maps is not None:
        tally.maps.sort(key=lambda m: m.image)
    return tally


def _enumerate_orbit(space: LinearSpace, budget: int, classify: bool) -> AutomorphismTally:
    search = LineMapSearch(line_graph(space), line_graph(space), budget)
    levels = search.stabilizer_chain()
    total = prod(len(level.orbit) for level in levels)

    tally = AutomorphismTally(total=total, classified=classify, strategy="orbit", nodes=search.nodes)
    if not classify:
        return tally

    # Collineation-induced maps form a subgroup of index 1 or 2, and the
    # transversals generate the whole group.
    has_correlation = any(
        classify_map(LineMap(space, space, image), verified=True).kind is VerdictKind.CORRELATION
        for level in levels
        for image in level.transversal.values()
    )
    if has_correlation:
        tally.collineation = tally.correlation = total // 2
    else:
        tally.collineation = total
    return tally


def enumerate_automorphisms(space: LinearSpace, mode: str = "count", node_budget: Optional[int] = None,
                            strategy: str = "exhaustive", max_lines: Optional[int] = None,
                            workers: Optional[int] = None, classify: bool = True) -> AutomorphismTally:
    """
    All adjacency-preserving bijections of the lines of a space onto themselves.

    Args:
        space: Linear space
        mode: "count", or "list" to keep every map
        node_budget: Search node limit (defaults to config.NODE_BUDGET)
        strategy: "exhaustive" walks every map; "orbit" counts through a
            stabilizer chain and classifies only the transversal maps
        max_lines: Line cap (defaults to config.AUTOS_MAX_LINES)
        workers: Worker processes for the exhaustive strategy
        classify: Tally collineation and correlation types when dim >= 3

    Returns:
        AutomorphismTally; classified is False below dimension 3

    Raises:
        SizeCapExceededError: If the space has too many lines
        SearchBudgetExceededError: If the search exceeds the budget
    """
    if mode not in ("count", "list"):
        raise InputValidationError(f"Unknown mode: {mode}")
    if strategy not in ("exhaustive", "orbit"):
        raise InputValidationError(f"Unknown strategy: {strategy}")
    if strategy == "orbit" and mode == "list":
        raise InputValidationError("Listing maps needs the exhaustive strategy")

    cap = config.AUTOS_MAX_LINES if max_lines is None else max_lines
    if space.line_count > cap:
        raise SizeCapExceededError("line count", space.line_count, cap)

    budget = config.NODE_BUDGET if node_budget is None else node_budget
    classify = classify and dimension(space, node_budget=budget) >= 3
    logger.info(f"Enumerating line automorphisms of a space with {space.line_count} lines "
                f"({strategy}, classify={classify})")

    if strategy == "orbit":
        tally = _enumerate_orbit(space, budget, classify)
    else:
        tally = _enumerate_exhaustive(space, budget, mode == "list", classify,
                                      config.WORKERS if workers is None else workers)

    logger.info(f"Found {tally.total} maps: {tally.collineation} collineation, "
                f"{tally.correlation} correlation ({tally.nodes} nodes)")
    return tally
