"""
File formats: geometry documents, label sidecars, line maps, clique reports
and verdicts.
"""

import json
import logging

import pytest

from src.services.chow import classify_map
from src.services.import_export import (
    FormatError, UnsupportedFormatError,
    clique_summary, line_map_to_document, parse_line_map, parse_space, read_cliques,
    read_labeled, read_line_map, read_space, sidecar_path, space_to_document,
    verdict_to_document, witness_to_document, write_cliques, write_document, write_labels,
    write_line_map, write_space,
)
from src.services.incidence_core import PairOnTwoLinesError
from src.services.pluecker import maximal_related_sets
from test_helpers import identity_map


# ============================================================================
# Geometry documents
# ============================================================================

def test_space_document_is_canonical(fano):
    text = write_space(fano)

    assert text.endswith("\n")
    assert " " not in text
    assert text.startswith('{"format":"linear-space/1","lines":[[0,')
    assert json.loads(text)["points"] == 7


def test_space_round_trip_is_byte_identical(tmp_path, pg32):
    path = tmp_path / "pg32.json"
    text = write_space(pg32, path)

    again = write_space(read_space(path))

    assert again == text
    assert path.read_bytes() == text.encode("utf-8")


def test_non_canonical_line_order_is_accepted_with_a_warning(caplog):
    data = {"format": "linear-space/1", "points": 3, "lines": [[1, 2], [0, 2], [0, 1]]}

    with caplog.at_level(logging.WARNING):
        space = parse_space(data)

    assert space.lines == ((0, 1), (0, 2), (1, 2))
    assert "canonical order" in caplog.text


def test_format_tag_is_checked(fano):
    data = space_to_document(fano)

    with pytest.raises(UnsupportedFormatError) as exc:
        parse_space(data, accepted=["line-map/1"])
    assert exc.value.exit_code == 1

    data["format"] = "linear-space/2"
    with pytest.raises(UnsupportedFormatError):
        parse_space(data)


@pytest.mark.parametrize("data", [
    {"format": "linear-space/1", "lines": [[0, 1]]},
    {"format": "linear-space/1", "points": 2, "lines": [[0, 1]], "extra": True},
    {"format": "linear-space/1", "points": -1, "lines": []},
    {"format": "linear-space/1", "points": 2, "lines": "01"},
    {"format": "linear-space/1", "points": 3.0, "lines": [[0, 1], [0, 2], [1, 2]]},
    {"format": "linear-space/1", "points": 3, "lines": [["0", 1], [0, 2], [1, 2]]},
    {"format": "linear-space/1", "points": 3, "lines": [[0, 1], [True, 2], [1, 2]]},
])
def test_schema_violations(data):
    with pytest.raises(FormatError):
        parse_space(data)


def test_missing_format_tag():
    with pytest.raises(FormatError):
        parse_space({"points": 2, "lines": [[0, 1]]})


def test_malformed_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"format": "linear-space/1", "points": ')

    with pytest.raises(FormatError):
        read_space(path)


def test_missing_file(tmp_path):
    with pytest.raises(FormatError):
        read_space(tmp_path / "absent.json")


def test_axiom_violations_surface_from_reading(tmp_path):
    path = tmp_path / "bad.json"
    write_document({"format": "linear-space/1", "points": 4, "lines": [[0, 1, 2], [0, 1, 3], [2, 3]]}, path)

    with pytest.raises(PairOnTwoLinesError) as exc:
        read_space(path)

    assert (exc.value.l1, exc.value.l2) == (0, 1)


# ============================================================================
# Label sidecars
# ============================================================================

def test_sidecar_path():
    assert sidecar_path("out/pg32.json").name == "pg32.labels.json"


def test_labels_round_trip(tmp_path, pg33_labeled):
    path = tmp_path / "pg33.json"
    write_space(pg33_labeled.space, path)
    write_labels(pg33_labeled, sidecar_path(path))

    labeled = read_labeled(path)

    assert labeled.labels == pg33_labeled.labels
    assert labeled.provenance == pg33_labeled.provenance


def test_missing_sidecar(tmp_path, fano):
    path = tmp_path / "fano.json"
    write_space(fano, path)

    with pytest.raises(FormatError):
        read_labeled(path)


# ============================================================================
# Line maps
# ============================================================================

def test_inline_line_map_round_trip(tmp_path, pg32_polarity):
    path = tmp_path / "polarity.json"
    text = write_line_map(pg32_polarity.line_map, path)

    line_map = read_line_map(path)

    assert line_map.image == pg32_polarity.line_map.image
    assert line_map.source == pg32_polarity.line_map.source
    assert write_line_map(line_map) == text


def test_path_references_resolve_against_the_map_directory(tmp_path, pg32):
    write_space(pg32, tmp_path / "pg32.json")
    maps = tmp_path / "maps"
    maps.mkdir()
    path = maps / "identity.json"
    write_line_map(identity_map(pg32), path, source_ref="../pg32.json", target_ref="../pg32.json")

    line_map = read_line_map(path)

    assert line_map.source == pg32
    assert line_map.image == tuple(range(35))
    assert json.loads(path.read_text())["source"] == "../pg32.json"


def test_inline_geometry_wins_over_a_path(tmp_path, caplog, fano):
    data = line_map_to_document(identity_map(fano), source_ref="missing.json")
    data["source_inline"] = space_to_document(fano)

    with caplog.at_level(logging.WARNING):
        line_map = parse_line_map(data, base_dir=tmp_path)

    assert line_map.source == fano
    assert "using the inline geometry" in caplog.text


def test_unresolvable_path_reference(tmp_path, fano):
    data = line_map_to_document(identity_map(fano), source_ref="missing.json")

    with pytest.raises(FormatError):
        parse_line_map(data, base_dir=tmp_path)


def test_line_map_format_pin(fano):
    data = line_map_to_document(identity_map(fano))

    with pytest.raises(UnsupportedFormatError):
        parse_line_map(data, accepted=["linear-space/1"])


def test_inline_geometry_respects_the_format_pin(fano):
    data = line_map_to_document(identity_map(fano))

    with pytest.raises(UnsupportedFormatError):
        parse_line_map(data, accepted=["line-map/1"])


def test_line_map_image_must_be_integers(fano):
    data = line_map_to_document(identity_map(fano))
    data["image"][0] = "0"

    with pytest.raises(FormatError):
        parse_line_map(data)


# ============================================================================
# Clique reports
# ============================================================================

def test_cliques_round_trip(tmp_path, pg32):
    sets = maximal_related_sets(pg32)
    path = tmp_path / "cliques.json"
    text = write_cliques(sets, path)

    loaded = read_cliques(path)

    assert loaded == sets
    assert write_cliques(loaded) == text


def test_clique_summary(pg32):
    summary = clique_summary(maximal_related_sets(pg32))

    assert summary == {
        "total": 30,
        "classes": {"star": 15, "coplanar": 15, "other": 0},
        "sizes": {"star:7": 15, "coplanar:7": 15},
    }


def test_clique_entries_carry_vertex_or_plane(k8):
    text = write_cliques(maximal_related_sets(k8))
    entries = json.loads(text)["sets"]

    stars = [e for e in entries if e["class"] == "star"]
    coplanar = [e for e in entries if e["class"] == "coplanar"]
    assert sorted(e["vertex"] for e in stars) == list(range(8))
    assert all(len(e["plane"]) == 3 and "vertex" not in e for e in coplanar)


def test_clique_report_rejects_unknown_keys(tmp_path, k5):
    data = json.loads(write_cliques(maximal_related_sets(k5)))
    data["extra"] = 1
    path = tmp_path / "cliques.json"
    write_document(data, path)

    with pytest.raises(FormatError):
        read_cliques(path)


# ============================================================================
# Verdicts
# ============================================================================

def test_collineation_verdict_document(pg32):
    document = verdict_to_document(classify_map(identity_map(pg32)))

    assert document == {"verdict": "collineation", "point_map": list(range(15))}


def test_correlation_verdict_document(pg32_polarity):
    document = verdict_to_document(classify_map(pg32_polarity.line_map))

    assert document["verdict"] == "correlation"
    assert document["plane_map"] == [sorted(plane) for plane in pg32_polarity.plane_of]


def test_witness_document():
    assert witness_to_document((3, 7)) == {"verdict": "hypothesis-violated", "witness": [3, 7]}
