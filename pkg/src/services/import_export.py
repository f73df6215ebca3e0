"""
File formats: geometry documents, label sidecars, line maps, clique
reports and map verdicts.

Every document is written as canonical JSON (sorted keys, compact
separators, LF ending), so writing what was read reproduces the bytes.
"""

import json
from collections import Counter
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, StrictInt, ValidationError

from src.config import SUPPORTED_FORMATS
from src.errors import InputValidationError
from src.models import (
    GeometryFamily, LineMap, LinearSpace, LabeledSpace, MapVerdict, MaximalRelatedSet,
    Provenance, SetClassification, SetKind, VerdictKind,
)
from src.services.incidence_core import validate
from src.utils.helpers import dumps_canonical
import logging

logger = logging.getLogger(__name__)


class FormatError(InputValidationError):
    """Raised when a document cannot be read or does not match its schema."""
    pass


class UnsupportedFormatError(InputValidationError):
    """Raised when a document's format tag is not among the accepted versions."""

    def __init__(self, found: str, accepted: Sequence[str]):
        self.found = found
        super().__init__(f"Format {found!r} is not accepted (accepted: {', '.join(accepted)})")


# Pydantic models
class LinearSpaceDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    format: Literal["linear-space/1"]
    points: StrictInt = Field(ge=0)
    lines: List[List[StrictInt]]


class ProvenanceDocument(BaseModel):
    family: GeometryFamily
    n: StrictInt
    q: Optional[StrictInt] = None
    degenerate: bool = False


class LabelsDocument(BaseModel):
    labels: Dict[str, List[StrictInt]]
    provenance: ProvenanceDocument


class LineMapDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    format: Literal["line-map/1"]
    source: Union[str, LinearSpaceDocument]
    target: Union[str, LinearSpaceDocument]
    source_inline: Optional[LinearSpaceDocument] = None
    target_inline: Optional[LinearSpaceDocument] = None
    image: List[StrictInt]


class CliqueEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    lines: List[StrictInt]
    class_: SetKind = Field(alias="class")
    vertex: Optional[StrictInt] = None
    plane: Optional[List[StrictInt]] = None


class CliquesDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    format: Literal["cliques/1"]
    sets: List[CliqueEntry]
    summary: Optional[Dict[str, Any]] = None


# ============================================================================
# Reading and writing
# ============================================================================

def write_document(data: Dict[str, Any], path: Optional[Union[str, Path]] = None) -> str:
    """
    Serialize a document canonically and optionally write it to a file.

    Returns:
        The canonical JSON text
    """
    text = dumps_canonical(data)
    if path is not None:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
        logger.debug(f"Wrote {path}")
    return text


def load_document(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Read a JSON document.

    Raises:
        FormatError: If the file is missing or not JSON
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise FormatError(f"Cannot read {path}: {e}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"{path} is not valid JSON: {e}")
    if not isinstance(data, dict):
        raise FormatError(f"{path} does not contain a JSON object")
    return data


def _check_format(data: Dict[str, Any], accepted: Optional[Sequence[str]]):
    found = data.get("format")
    accepted = list(accepted or SUPPORTED_FORMATS)
    if found is None:
        raise FormatError("Document has no format tag")
    if found not in accepted:
        raise UnsupportedFormatError(str(found), accepted)


def _parse(model: type, data: Dict[str, Any], where: str):
    try:
        return model.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise FormatError(f"{where}: {location}: {first['msg']}")


# ============================================================================
# Geometry documents
# ============================================================================

def space_to_document(space: LinearSpace) -> Dict[str, Any]:
    return {
        "format": "linear-space/1",
        "points": space.point_count,
        "lines": [list(line) for line in space.lines],
    }


def _space_from_model(doc: LinearSpaceDocument, where: str) -> LinearSpace:
    space = validate(doc.points, doc.lines)
    if [list(line) for line in space.lines] != doc.lines:
        logger.warning(f"{where}: lines are not in canonical order; line ids follow the sorted order")
    return space


def parse_space(data: Dict[str, Any], accepted: Optional[Sequence[str]] = None,
                where: str = "geometry") -> LinearSpace:
    """
    Build a validated LinearSpace from a linear-space/1 document.

    Raises:
        UnsupportedFormatError: If the format tag is not accepted
        FormatError: If the document does not match the schema
        InputValidationError: If the linear-space axioms fail
    """
    _check_format(data, accepted)
    return _space_from_model(_parse(LinearSpaceDocument, data, where), where)


def read_space(path: Union[str, Path], accepted: Optional[Sequence[str]] = None) -> LinearSpace:
    space = parse_space(load_document(path), accepted, where=str(path))
    logger.info(f"Read {path}: {space.point_count} points, {space.line_count} lines")
    return space


def write_space(space: LinearSpace, path: Optional[Union[str, Path]] = None) -> str:
    return write_document(space_to_document(space), path)


# ============================================================================
# Label sidecars
# ============================================================================

def sidecar_path(path: Union[str, Path]) -> Path:
    """Sidecar next to a geometry file: pg32.json -> pg32.labels.json."""
    return Path(path).with_suffix(".labels.json")


def labels_to_document(labeled: LabeledSpace) -> Dict[str, Any]:
    prov = labeled.provenance
    provenance: Dict[str, Any] = {"family": prov.family.value, "n": prov.n}
    if prov.q is not None:
        provenance["q"] = prov.q
    if prov.degenerate:
        provenance["degenerate"] = True
    return {
        "labels": {str(point): list(label) for point, label in enumerate(labeled.labels)},
        "provenance": provenance,
    }


def write_labels(labeled: LabeledSpace, path: Optional[Union[str, Path]] = None) -> str:
    return write_document(labels_to_document(labeled), path)


def read_labeled(path: Union[str, Path], accepted: Optional[Sequence[str]] = None) -> LabeledSpace:
    """
    Read a geometry file together with its label sidecar.

    Raises:
        FormatError: If the sidecar is missing or does not cover every point
    """
    space = read_space(path, accepted)
    doc = _parse(LabelsDocument, load_document(sidecar_path(path)), str(sidecar_path(path)))
    try:
        labels = tuple(tuple(doc.labels[str(p)]) for p in range(space.point_count))
    except KeyError as e:
        raise FormatError(f"Sidecar has no label for point {e.args[0]}")
    prov = doc.provenance
    return LabeledSpace(space, labels, Provenance(prov.family, prov.n, prov.q, prov.degenerate))


# ============================================================================
# Line maps
# ============================================================================

def line_map_to_document(line_map: LineMap, source_ref: Optional[str] = None,
                         target_ref: Optional[str] = None) -> Dict[str, Any]:
    """
    Line-map document; a side is embedded inline unless a path reference is given.
    """
    return {
        "format": "line-map/1",
        "source": source_ref if source_ref is not None else space_to_document(line_map.source),
        "target": target_ref if target_ref is not None else space_to_document(line_map.target),
        "image": list(line_map.image),
    }


def write_line_map(line_map: LineMap, path: Optional[Union[str, Path]] = None,
                   source_ref: Optional[str] = None, target_ref: Optional[str] = None) -> str:
    return write_document(line_map_to_document(line_map, source_ref, target_ref), path)


def _resolve_side(ref: Union[str, LinearSpaceDocument], inline: Optional[LinearSpaceDocument],
                  side: str, base_dir: Path, accepted: Sequence[str]) -> LinearSpace:
    if inline is not None:
        if isinstance(ref, str):
            logger.warning(f"Line map gives both a path and an inline {side}; using the inline geometry")
        ref = inline
    if isinstance(ref, LinearSpaceDocument):
        if ref.format not in accepted:
            raise UnsupportedFormatError(ref.format, accepted)
        return _space_from_model(ref, f"{side} (inline)")
    path = Path(ref)
    if not path.is_absolute():
        path = base_dir / path
    return read_space(path, accepted)


def parse_line_map(data: Dict[str, Any], base_dir: Union[str, Path] = ".",
                   accepted: Optional[Sequence[str]] = None) -> LineMap:
    """
    Build a LineMap from a line-map/1 document.

    Geometry paths are resolved against base_dir. When a side is given both
    by path and inline, the inline geometry wins and a warning is logged.

    Raises:
        UnsupportedFormatError, FormatError, InputValidationError
    """
    accepted = list(accepted or SUPPORTED_FORMATS)
    _check_format(data, accepted)
    doc = _parse(LineMapDocument, data, "line map")
    base = Path(base_dir)
    source = _resolve_side(doc.source, doc.source_inline, "source", base, accepted)
    target = _resolve_side(doc.target, doc.target_inline, "target", base, accepted)
    return LineMap(source, target, tuple(doc.image))


def read_line_map(path: Union[str, Path], accepted: Optional[Sequence[str]] = None) -> LineMap:
    line_map = parse_line_map(load_document(path), Path(path).parent, accepted)
    logger.info(f"Read line map {path}: {len(line_map.image)} lines")
    return line_map


# ============================================================================
# Clique reports
# ============================================================================

def _entry(m: MaximalRelatedSet) -> Dict[str, Any]:
    entry: Dict[str, Any] = {"lines": list(m.lines), "class": m.kind.value}
    if m.kind is SetKind.STAR:
        entry["vertex"] = m.classification.vertex
    elif m.kind is SetKind.COPLANAR:
        entry["plane"] = sorted(m.classification.plane)
    return entry


def clique_summary(sets: Sequence[MaximalRelatedSet]) -> Dict[str, Any]:
    """Histogram of classes and of (class, size) pairs."""
    classes = Counter(m.kind.value for m in sets)
    sizes = Counter(f"{m.kind.value}:{len(m.lines)}" for m in sets)
    return {
        "total": len(sets),
        "classes": {kind.value: classes.get(kind.value, 0) for kind in SetKind},
        "sizes": dict(sizes),
    }


def cliques_to_document(sets: Sequence[MaximalRelatedSet]) -> Dict[str, Any]:
    return {
        "format": "cliques/1",
        "sets": [_entry(m) for m in sets],
        "summary": clique_summary(sets),
    }


def write_cliques(sets: Sequence[MaximalRelatedSet], path: Optional[Union[str, Path]] = None) -> str:
    return write_document(cliques_to_document(sets), path)


def read_cliques(path: Union[str, Path], accepted: Optional[Sequence[str]] = None) -> List[MaximalRelatedSet]:
    data = load_document(path)
    _check_format(data, accepted)
    doc = _parse(CliquesDocument, data, str(path))
    result = []
    for entry in doc.sets:
        plane = frozenset(entry.plane) if entry.plane is not None else None
        classification = SetClassification(entry.class_, vertex=entry.vertex, plane=plane)
        result.append(MaximalRelatedSet(tuple(entry.lines), classification))
    return result


# ============================================================================
# Verdicts
# ============================================================================

def verdict_to_document(verdict: MapVerdict) -> Dict[str, Any]:
    """Verdict report: the point map of a collineation, or the plane map of a correlation."""
    if verdict.kind is VerdictKind.COLLINEATION:
        return {"verdict": "collineation", "point_map": list(verdict.point_map.image)}
    return {
        "verdict": "correlation",
        "plane_map": [sorted(plane) for plane in verdict.correlation_map.plane_map],
    }


def witness_to_document(witness: Tuple[int, int]) -> Dict[str, Any]:
    return {"verdict": "hypothesis-violated", "witness": list(witness)}
