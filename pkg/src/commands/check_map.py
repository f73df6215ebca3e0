"""
check-map: verify adjacency preservation and report the point-level origin of a line map.
"""

import sys

from src.config import RunConfig
from src.services.chow import check_adjacency_preserving, classify_map
from src.services.import_export import read_line_map, verdict_to_document, witness_to_document, write_document
import logging

logger = logging.getLogger(__name__)


def register(subparsers, parents):
    parser = subparsers.add_parser(
        "check-map", parents=parents,
        help="Classify a line bijection as collineation- or correlation-induced",
    )
    parser.add_argument("map_file", help="line-map/1 file")
    parser.set_defaults(handler=run)


def _emit(document, run_config: RunConfig):
    if run_config.out is not None:
        write_document(document, run_config.out)
    else:
        sys.stdout.write(write_document(document))


def run(args, run_config: RunConfig) -> int:
    """
    Exit 0 with the verdict, 2 with the witness pair when adjacency is not
    preserved, 3 when a side has dimension below 3.
    """
    line_map = read_line_map(args.map_file, run_config.format_versions)

    result = check_adjacency_preserving(line_map)
    if not result.holds:
        a, b = result.witness
        logger.error(f"Adjacency not preserved for source lines {a} and {b}")
        _emit(witness_to_document(result.witness), run_config)
        return 2

    verdict = classify_map(line_map)
    logger.info(f"Verdict: {verdict.kind.value}")
    _emit(verdict_to_document(verdict), run_config)
    return 0
