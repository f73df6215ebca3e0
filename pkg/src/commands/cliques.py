"""
cliques: all maximal related sets with their classification.
"""

import sys

from src.config import RunConfig, config
from src.services.import_export import clique_summary, cliques_to_document, read_space, write_document
from src.services.pluecker import maximal_related_sets
import logging

logger = logging.getLogger(__name__)


def register(subparsers, parents):
    parser = subparsers.add_parser(
        "cliques", parents=parents,
        help="Enumerate and classify the maximal related sets of lines",
    )
    parser.add_argument("geometry", help="linear-space/1 file")
    parser.set_defaults(handler=run, max_lines_default=config.CLIQUE_MAX_LINES)


def format_summary(summary) -> str:
    lines = [f"total {summary['total']}"]
    lines += [f"{kind} {count}" for kind, count in summary["classes"].items()]
    sizes = " ".join(f"{key}={value}" for key, value in sorted(summary["sizes"].items()))
    lines.append(f"sizes {sizes}".rstrip())
    return "\n".join(lines)


def run(args, run_config: RunConfig) -> int:
    """Emit the cliques/1 report to --out or stdout, and the histogram beside it."""
    space = read_space(args.geometry, run_config.format_versions)
    sets = maximal_related_sets(space, max_lines=run_config.max_lines, workers=run_config.workers)
    summary = format_summary(clique_summary(sets))

    if run_config.out is not None:
        write_document(cliques_to_document(sets), run_config.out)
        print(summary)
    else:
        sys.stdout.write(write_document(cliques_to_document(sets)))
        print(summary, file=sys.stderr)
    return 0
