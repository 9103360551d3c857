"""CSV and JSON writers for experiment results."""

import io
import sys
from logging import getLogger
from pathlib import Path

from recoherence.models import ExperimentResult

LOGGER = getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def render_csv(result: ExperimentResult) -> str:
    """Config-hash comment, header row, one row per grid point, and the oracle trailer if any."""
    if result.table is None:
        raise ValueError(f"{result.kind.value} results have no table")

    buffer = io.StringIO()
    buffer.write(f"# config-sha256: {result.config_sha256}\n")
    result.table.to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    if result.oracle is not None:
        buffer.write(f"# max-oracle-deviation: {result.oracle.deviation:.17g}\n")
    return buffer.getvalue()


def render_json(result: ExperimentResult) -> str:
    return result.model_dump_json(indent=2, by_alias=True) + "\n"


def render(result: ExperimentResult) -> str:
    return render_csv(result) if result.is_table else render_json(result)


def write_result(result: ExperimentResult, path: Path | None = None) -> None:
    """Write to ``path``, or to stdout when no path is given.

    Raises:
        OSError: If ``path`` cannot be written; the error carries the path.
    """
    text = render(result)
    if path is None:
        sys.stdout.write(text)
        return

    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    LOGGER.debug(f"Wrote {result.kind.value} result to {path}")
