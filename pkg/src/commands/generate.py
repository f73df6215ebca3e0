"""
generate: write a canonical test geometry.
"""

import sys

from src.config import RunConfig
from src.errors import InputValidationError
from src.services.geometry_gen import (
    generate_ag, generate_complete, generate_near_pencil, generate_pg,
)
from src.services.import_export import labels_to_document, sidecar_path, space_to_document, write_document
import logging

logger = logging.getLogger(__name__)

FAMILIES = ("pg", "ag", "complete", "near-pencil")


def register(subparsers, parents):
    parser = subparsers.add_parser(
        "generate", parents=parents,
        help="Generate PG(n,q), AG(n,q), a complete-graph space or a near-pencil",
    )
    parser.add_argument("family", choices=FAMILIES, help="Geometry family")
    parser.add_argument("--n", type=int, required=True, help="Dimension (pg, ag) or number of points")
    parser.add_argument("--q", type=int, help="Prime field order (pg, ag)")
    parser.set_defaults(handler=run)


def run(args, run_config: RunConfig) -> int:
    """Generate the geometry; the document goes to --out (plus sidecar) or stdout."""
    if args.family in ("pg", "ag") and args.q is None:
        raise InputValidationError(f"{args.family} needs --q")

    if args.family == "pg":
        labeled = generate_pg(args.n, args.q, run_config.max_points, run_config.max_lines)
    elif args.family == "ag":
        labeled = generate_ag(args.n, args.q, run_config.max_points, run_config.max_lines)
    elif args.family == "complete":
        labeled = generate_complete(args.n, run_config.max_points, run_config.max_lines)
    else:
        labeled = generate_near_pencil(args.n, run_config.max_points, run_config.max_lines)

    space = labeled.space
    summary = f"points {space.point_count}\nlines {space.line_count}"

    if run_config.out is not None:
        write_document(space_to_document(space), run_config.out)
        write_document(labels_to_document(labeled), sidecar_path(run_config.out))
        logger.info(f"Wrote {labeled.provenance.describe()} to {run_config.out}")
        print(summary)
    else:
        sys.stdout.write(write_document(space_to_document(space)))
        print(summary, file=sys.stderr)

    return 0
