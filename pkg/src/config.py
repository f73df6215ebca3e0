"""
Configuration module for the line geometry toolkit.
Loads settings from environment variables with sensible defaults.
"""

import os
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

# Load environment variables from .env file
load_dotenv()


SUPPORTED_FORMATS = ("linear-space/1", "line-map/1", "cliques/1")


class Config:
    """Application configuration loaded from environment variables."""

    # Generator size caps
    MAX_POINTS: int = int(os.getenv("LINEGEOM_MAX_POINTS", "512"))
    MAX_LINES: int = int(os.getenv("LINEGEOM_MAX_LINES", "4096"))

    # Search caps
    CLIQUE_MAX_LINES: int = int(os.getenv("LINEGEOM_CLIQUE_MAX_LINES", "4096"))
    AUTOS_MAX_LINES: int = int(os.getenv("LINEGEOM_AUTOS_MAX_LINES", "40"))
    EXCHANGE_MAX_POINTS: int = int(os.getenv("LINEGEOM_EXCHANGE_MAX_POINTS", "160"))
    NODE_BUDGET: int = int(os.getenv("LINEGEOM_BUDGET", "10000000"))

    # Parallelism
    WORKERS: int = int(os.getenv("LINEGEOM_WORKERS", "1"))

    # Application Configuration
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")
    LOG_TO_FILE: bool = os.getenv("LOG_TO_FILE", "false").lower() == "true"

    # Derived paths
    BASE_DIR: Path = Path(__file__).resolve().parent.parent
    LOGS_DIR: Path = BASE_DIR / "logs"

    @classmethod
    def validate(cls) -> bool:
        """Validate that every cap and budget is positive."""
        caps = [
            "MAX_POINTS", "MAX_LINES", "CLIQUE_MAX_LINES", "AUTOS_MAX_LINES",
            "EXCHANGE_MAX_POINTS", "NODE_BUDGET", "WORKERS",
        ]

        invalid = [name for name in caps if getattr(cls, name) <= 0]

        if invalid:
            raise ValueError(f"Configuration values must be positive: {', '.join(invalid)}")

        return True


# Singleton instance
config = Config()


class RunConfig(BaseModel):
    """Per-invocation settings for the command line surface."""

    max_points: int = Field(default_factory=lambda: config.MAX_POINTS, gt=0)
    max_lines: int = Field(default_factory=lambda: config.MAX_LINES, gt=0)
    node_budget: int = Field(default_factory=lambda: config.NODE_BUDGET, gt=0)
    workers: int = Field(default_factory=lambda: config.WORKERS, gt=0)
    out: Optional[Path] = None
    format_versions: List[str] = Field(default_factory=lambda: list(SUPPORTED_FORMATS))

    @field_validator("format_versions")
    @classmethod
    def check_formats(cls, value: List[str]) -> List[str]:
        unknown = [v for v in value if v not in SUPPORTED_FORMATS]
        if unknown:
            raise ValueError(f"Unsupported format version(s): {', '.join(unknown)}")
        if not value:
            raise ValueError("At least one format version must be accepted")
        return value

    @classmethod
    def from_args(cls, args, max_lines_default: Optional[int] = None) -> "RunConfig":
        """
        Build a run configuration from parsed CLI arguments.

        Explicit flags win over LINEGEOM_BUDGET, which wins over the defaults.

        Args:
            args: argparse namespace
            max_lines_default: Line cap used when --max-lines is absent

        Returns:
            RunConfig instance
        """
        values = {}

        budget = getattr(args, "node_budget", None)
        if budget is None and os.getenv("LINEGEOM_BUDGET"):
            budget = int(os.environ["LINEGEOM_BUDGET"])
        if budget is not None:
            values["node_budget"] = budget

        max_lines = getattr(args, "max_lines", None)
        if max_lines is None:
            max_lines = max_lines_default
        if max_lines is not None:
            values["max_lines"] = max_lines

        if getattr(args, "workers", None) is not None:
            values["workers"] = args.workers
        if getattr(args, "out", None):
            values["out"] = Path(args.out)
        if getattr(args, "format_version", None):
            values["format_versions"] = list(args.format_version)

        return cls(**values)
