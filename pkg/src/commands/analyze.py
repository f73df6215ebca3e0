"""
analyze: dimension, exchange axiom, generalized projective structure and planes.
"""

from typing import Any, Dict

from src.config import RunConfig
from src.models import LinearSpace
from src.services.import_export import read_space, write_document
from src.services.incidence_core import (
    dimension, is_exchange_space, is_generalized_projective_space, planes,
)
import logging

logger = logging.getLogger(__name__)


def register(subparsers, parents):
    parser = subparsers.add_parser(
        "analyze", parents=parents,
        help="Report dimension, exchange axiom, generalized projective flag and plane count",
    )
    parser.add_argument("geometry", help="linear-space/1 file")
    parser.set_defaults(handler=run)


def analyze_space(space: LinearSpace, node_budget: int) -> Dict[str, Any]:
    """
    Collect the analysis report of a space.

    Raises:
        SearchBudgetExceededError: If an exhaustive check exceeds its cap or budget
    """
    report: Dict[str, Any] = {
        "points": space.point_count,
        "lines": space.line_count,
        "dimension": dimension(space, node_budget=node_budget),
    }

    exchange = is_exchange_space(space, node_budget=node_budget)
    report["exchange"] = {"holds": exchange.holds}
    if not exchange.holds:
        closed, a, b = exchange.witness
        report["exchange"]["witness"] = {"S": sorted(closed), "A": a, "B": b}

    projective = is_generalized_projective_space(space)
    report["generalized_projective"] = {"holds": projective.holds}
    if not projective.holds:
        plane, a, b = projective.witness
        report["generalized_projective"]["witness"] = {"plane": sorted(plane), "lines": [a, b]}

    report["planes"] = len(planes(space))
    return report


def format_report(report: Dict[str, Any]) -> str:
    exchange = report["exchange"]
    exchange_text = str(exchange["holds"]).lower()
    if "witness" in exchange:
        w = exchange["witness"]
        exchange_text += f" (S={w['S']}, A={w['A']}, B={w['B']})"

    projective = report["generalized_projective"]
    projective_text = str(projective["holds"]).lower()
    if "witness" in projective:
        w = projective["witness"]
        projective_text += f" (disjoint lines {w['lines'][0]} and {w['lines'][1]} in plane {w['plane']})"

    return "\n".join([
        f"points {report['points']}",
        f"lines {report['lines']}",
        f"dimension {report['dimension']}",
        f"exchange {exchange_text}",
        f"generalized_projective {projective_text}",
        f"planes {report['planes']}",
    ])


def run(args, run_config: RunConfig) -> int:
    space = read_space(args.geometry, run_config.format_versions)
    report = analyze_space(space, run_config.node_budget)
    print(format_report(report))
    if run_config.out is not None:
        write_document(report, run_config.out)
        logger.info(f"Wrote analysis to {run_config.out}")
    return 0
