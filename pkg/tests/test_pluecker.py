"""
Plücker space: the related relation, stars, and maximal related sets.
"""

from itertools import combinations

import pytest

from src.errors import SizeCapExceededError, UnknownLineError, UnknownPointError
from src.models import SetKind
from src.services.geometry_gen import generate_complete
from src.services.incidence_core import lines_in, planes, validate
from src.services.pluecker import (
    NotMaximalError, NotRelatedSetError,
    classify_lines, classify_maximal_set, extend_to_maximal, is_maximal_related_set,
    is_related_set, is_trilateral, join_lines, line_graph, maximal_cliques,
    maximal_related_sets, related, star,
)
from test_helpers import naive_maximal_cliques, networkx_maximal_cliques, single_line_space


def _kind_counts(sets):
    return {kind: sum(1 for m in sets if m.kind is kind) for kind in SetKind}


def _triangle(space, a, b, c):
    return (space.line_of(a, b), space.line_of(b, c), space.line_of(a, c))


# ============================================================================
# Related relation and stars
# ============================================================================

def test_related_is_reflexive_and_symmetric(pg32):
    for a in range(pg32.line_count):
        assert related(pg32, a, a)
        for b in range(a + 1, pg32.line_count):
            assert related(pg32, a, b) == related(pg32, b, a)


def test_related_rejects_unknown_lines(pg32):
    with pytest.raises(UnknownLineError):
        related(pg32, 0, 35)


def test_star_sizes(pg32, pg33, ag33, k8):
    assert {len(star(pg32, p)) for p in range(15)} == {7}
    assert {len(star(pg33, p)) for p in range(40)} == {13}
    assert {len(star(ag33, p)) for p in range(27)} == {13}
    assert {len(star(k8, p)) for p in range(8)} == {7}


def test_star_rejects_unknown_points(pg32):
    with pytest.raises(UnknownPointError):
        star(pg32, 15)


def test_line_graph_is_symmetric_without_loops(pg33):
    graph = line_graph(pg33)

    for a, mask in enumerate(graph.adjacency):
        assert not mask >> a & 1
        for b in range(pg33.line_count):
            assert (mask >> b & 1) == (graph.adjacency[b] >> a & 1)


def test_line_graph_degrees(pg32):
    # 3 points on a line, 6 other lines through each of them
    assert set(line_graph(pg32).degrees) == {18}


def test_trilateral(pg32):
    line = pg32.lines[0]
    off = next(p for p in range(15) if p not in line)
    a, b, c = _triangle(pg32, line[0], line[1], off)

    assert is_trilateral(pg32, a, b, c)
    assert not is_trilateral(pg32, a, a, b)

    through = star(pg32, line[0])
    x, y, z = sorted(through)[:3]
    assert not is_trilateral(pg32, x, y, z)


# ============================================================================
# Related sets and classification
# ============================================================================

def test_related_and_maximal_checks(pg32):
    lines = sorted(star(pg32, 0))

    assert is_related_set(pg32, lines[:2])
    assert not is_maximal_related_set(pg32, lines[:2])
    assert is_maximal_related_set(pg32, lines)


def test_classify_star_in_pg33(pg33):
    result = classify_maximal_set(pg33, star(pg33, 5))

    assert result.kind is SetKind.STAR
    assert result.vertex == 5


def test_classify_plane_in_pg33(pg33):
    plane = planes(pg33)[0]
    result = classify_maximal_set(pg33, lines_in(pg33, plane.points))

    assert result.kind is SetKind.COPLANAR
    assert result.plane == plane.points


def test_classify_triangle_in_k8(k8):
    result = classify_maximal_set(k8, _triangle(k8, 0, 1, 2))

    assert result.kind is SetKind.COPLANAR
    assert result.plane == frozenset({0, 1, 2})


def test_classify_rejects_non_maximal_sets(pg32):
    with pytest.raises(NotMaximalError) as exc:
        classify_maximal_set(pg32, sorted(star(pg32, 0))[:3])

    assert exc.value.exit_code == 1


def test_classify_rejects_unrelated_sets(pg32):
    a = 0
    b = next(b for b in range(35) if not related(pg32, a, b))

    with pytest.raises(NotRelatedSetError):
        classify_maximal_set(pg32, [a, b])


def test_classify_lines_edge_cases(pg32):
    assert classify_lines(pg32, ()).kind is SetKind.OTHER
    assert classify_lines(pg32, (0,)).kind is SetKind.OTHER


def test_extend_star_seed_stays_maximal(pg32):
    seed = sorted(star(pg32, 3))[:2]
    result = extend_to_maximal(pg32, seed)

    assert set(seed) <= set(result.lines)
    assert is_maximal_related_set(pg32, result.lines)
    assert result.kind in (SetKind.STAR, SetKind.COPLANAR)


def test_extend_trilateral_gives_its_plane(pg32):
    line = pg32.lines[0]
    off = next(p for p in range(15) if p not in line)
    seed = _triangle(pg32, line[0], line[1], off)

    result = extend_to_maximal(pg32, seed)

    assert result.kind is SetKind.COPLANAR
    assert len(result.lines) == 7
    assert {line[0], line[1], off} <= result.classification.plane


def test_extend_two_plane_lines_and_a_line_leaving_the_plane(pg32):
    plane = planes(pg32)[0].points
    in_plane = lines_in(pg32, plane)
    a = in_plane[0]
    meet = pg32.lines[a][0]
    b = next(i for i in in_plane if i != a and meet in pg32.line_sets[i])
    c = next(i for i in sorted(star(pg32, meet)) if not pg32.line_sets[i] <= plane)

    result = extend_to_maximal(pg32, [a, b, c])

    assert result.kind is SetKind.STAR
    assert result.classification.vertex == meet
    assert set(result.lines) == set(star(pg32, meet))


def test_extend_rejects_unrelated_seed(pg32):
    b = next(b for b in range(35) if not related(pg32, 0, b))

    with pytest.raises(NotRelatedSetError):
        extend_to_maximal(pg32, [0, b])


# ============================================================================
# Maximal related sets
# ============================================================================

def test_pg32_maximal_sets(pg32):
    sets = maximal_related_sets(pg32)
    counts = _kind_counts(sets)

    assert len(sets) == 30
    assert counts[SetKind.STAR] == 15
    assert counts[SetKind.COPLANAR] == 15
    assert {len(m.lines) for m in sets} == {7}


def test_k8_maximal_sets(k8):
    sets = maximal_related_sets(k8)
    counts = _kind_counts(sets)

    assert len(sets) == 64
    assert counts[SetKind.STAR] == 8
    assert counts[SetKind.COPLANAR] == 56
    assert {len(m.lines) for m in sets if m.kind is SetKind.COPLANAR} == {3}


@pytest.mark.slow
def test_ag33_maximal_sets(ag33):
    sets = maximal_related_sets(ag33)
    counts = _kind_counts(sets)

    assert counts[SetKind.STAR] == 27
    assert counts[SetKind.COPLANAR] == 2808
    assert counts[SetKind.OTHER] == 0
    assert {len(m.lines) for m in sets if m.kind is SetKind.STAR} == {13}
    assert {len(m.lines) for m in sets if m.kind is SetKind.COPLANAR} == {4}


def test_fano_has_one_coplanar_set(fano):
    sets = maximal_related_sets(fano)

    assert len(sets) == 1
    assert sets[0].lines == tuple(range(7))
    assert sets[0].kind is SetKind.COPLANAR


def test_single_line_space_has_one_other_set():
    sets = maximal_related_sets(single_line_space())

    assert len(sets) == 1
    assert sets[0].lines == (0,)
    assert sets[0].kind is SetKind.OTHER


def test_affine_plane_stars_are_maximal(ag23):
    for p in range(9):
        assert is_maximal_related_set(ag23, star(ag23, p))


@pytest.mark.parametrize("fixture", ["pg32", "pg33", "k8", "ag33"])
def test_stars_are_maximal_outside_planes(request, fixture):
    space = request.getfixturevalue(fixture)

    for p in range(space.point_count):
        assert is_maximal_related_set(space, star(space, p))


@pytest.mark.parametrize("fixture", ["pg32", "k8"])
def test_coplanar_sets_join_to_one_plane(request, fixture):
    space = request.getfixturevalue(fixture)

    for m in maximal_related_sets(space):
        if m.kind is SetKind.COPLANAR:
            for a, b in combinations(m.lines, 2):
                assert join_lines(space, a, b) == m.classification.plane


def test_output_is_sorted(pg32):
    sets = maximal_related_sets(pg32)

    assert [m.lines for m in sets] == sorted(m.lines for m in sets)


def test_cap_is_enforced(pg33):
    with pytest.raises(SizeCapExceededError) as exc:
        maximal_related_sets(pg33, max_lines=100)

    assert exc.value.exit_code == 4


def test_zero_cap_is_not_the_default(pg32):
    with pytest.raises(SizeCapExceededError):
        maximal_related_sets(pg32, max_lines=0)


# ============================================================================
# Clique enumeration against oracles
# ============================================================================

@pytest.mark.parametrize("space_factory", [
    lambda request: request.getfixturevalue("pg32"),
    lambda request: request.getfixturevalue("k5"),
    lambda request: generate_complete(6).space,
    lambda request: request.getfixturevalue("fano"),
    lambda request: request.getfixturevalue("ag23"),
    lambda request: request.getfixturevalue("near_pencil5"),
], ids=["pg32", "k5", "k6", "fano", "ag23", "near-pencil"])
def test_cliques_match_oracles(request, space_factory):
    space = space_factory(request)
    graph = line_graph(space)
    found = {frozenset(c) for c in maximal_cliques(graph)}

    assert found == naive_maximal_cliques(graph.adjacency)
    assert found == networkx_maximal_cliques(graph.adjacency)


def test_parallel_enumeration_matches_serial(pg32, k8):
    for space in (pg32, k8):
        graph = line_graph(space)
        assert maximal_cliques(graph, workers=2) == maximal_cliques(graph, workers=1)


@pytest.mark.parametrize("fixture", ["pg33", "k5", "k8"])
def test_no_other_sets_from_dimension_three(request, fixture):
    sets = maximal_related_sets(request.getfixturevalue(fixture))

    assert all(m.kind is not SetKind.OTHER for m in sets)


def test_empty_space_has_the_empty_set():
    sets = maximal_related_sets(validate(0, []))

    assert [m.lines for m in sets] == [()]
    assert sets[0].kind is SetKind.OTHER
