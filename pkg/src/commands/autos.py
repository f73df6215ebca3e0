"""
autos: count the adjacency-preserving line bijections of a space.
"""

from src.config import RunConfig, config
from src.services.chow import enumerate_automorphisms
from src.services.import_export import read_space, write_document
import logging

logger = logging.getLogger(__name__)


def register(subparsers, parents):
    parser = subparsers.add_parser(
        "autos", parents=parents,
        help="Enumerate adjacency-preserving line bijections and tally their type",
    )
    parser.add_argument("geometry", help="linear-space/1 file")
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument("--count-only", action="store_true", help="Count without classifying")
    mode.add_argument("--classify", action="store_true", help="Classify every map (default)")
    parser.add_argument(
        "--strategy", choices=("exhaustive", "orbit"), default="exhaustive",
        help="Walk every map, or count through a stabilizer chain",
    )
    parser.set_defaults(handler=run, max_lines_default=config.AUTOS_MAX_LINES)


def format_tally(tally, count_only: bool) -> str:
    if count_only:
        return f"total {tally.total}"
    if not tally.classified:
        return f"total {tally.total} (dim < 3: unclassified)"
    return f"total {tally.total} = {tally.collineation} collineation + {tally.correlation} correlation"


def run(args, run_config: RunConfig) -> int:
    space = read_space(args.geometry, run_config.format_versions)
    keep_maps = run_config.out is not None and args.strategy == "exhaustive"
    tally = enumerate_automorphisms(
        space,
        mode="list" if keep_maps else "count",
        node_budget=run_config.node_budget,
        strategy=args.strategy,
        max_lines=run_config.max_lines,
        workers=run_config.workers,
        classify=not args.count_only,
    )
    print(format_tally(tally, args.count_only))

    if run_config.out is not None:
        document = {
            "total": tally.total,
            "collineation": tally.collineation,
            "correlation": tally.correlation,
            "classified": tally.classified,
            "strategy": tally.strategy,
        }
        # Orbit counting never materializes the maps
        if keep_maps:
            document["images"] = [list(m.image) for m in tally.maps]
        write_document(document, run_config.out)
        logger.info(f"Wrote tally to {run_config.out}")
    return 0
