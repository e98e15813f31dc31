"""
CSV and JSON report writers.

Every file carries the tool version, the configuration hash and a UTC
timestamp. CSV bodies depend only on the configuration.
"""

import csv
import io
import json
import math
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence

from rich.table import Table

from src import __version__
from src.core.asymptotics import VerificationReport
from src.core.config_file import RunConfig, config_hash
from src.core.errors import OutputError
from src.core.file_system import save_text_file


def provenance(config: RunConfig) -> Dict[str, str]:
    """Version, configuration hash and timestamp of a run."""
    return {
        "tool": "fraclayer",
        "version": __version__,
        "config_sha256": config_hash(config),
        "generated": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def format_value(value: Any) -> str:
    """
    Format a CSV cell; floats keep 17 significant digits.

    Example:
        >>> format_value(0.1)
        '0.10000000000000001'
        >>> format_value(True)
        'true'
    """
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def csv_content(header: Sequence[str], rows: Iterable[Sequence[Any]], prov: Dict[str, str]) -> str:
    """
    CSV text with a provenance comment line, a header row and '\\n' endings.

    Example:
        >>> text = csv_content(["x"], [[1.5]], {"version": "0", "config_sha256": "ab", "generated": "t"})
        >>> text.splitlines()[1:]
        ['x', '1.5']
    """
    buffer = io.StringIO()
    buffer.write(f"# fraclayer {prov['version']} config_sha256={prov['config_sha256']} generated={prov['generated']}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(list(header))
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buffer.getvalue()


def _clean(value: Any) -> Any:
    # JSON has no NaN or infinity.
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if hasattr(value, "item") and callable(value.item):
        return _clean(value.item())
    return value


def json_content(payload: Dict[str, Any], prov: Dict[str, str]) -> str:
    """JSON text with the provenance block first."""
    return json.dumps(_clean({"provenance": prov, **payload}), indent=2) + "\n"


def write_report(directory: Path, filename: str, content: str) -> Path:
    """
    Write one report file.

    Raises:
        OutputError: The file could not be written
    """
    success, error, path = save_text_file(content, directory, filename)
    if not success:
        raise OutputError(error)
    return path


def summary_table(report: VerificationReport) -> Table:
    """Console table of a verification report."""
    table = Table(title="Verification")
    table.add_column("check")
    table.add_column("side")
    table.add_column("estimate", justify="right")
    table.add_column("target", justify="right")
    table.add_column("rel. error", justify="right")
    table.add_column("result")
    for r in report.limits:
        table.add_row(
            r.name,
            r.side,
            f"{r.estimate.extrapolated:.6g}",
            "finite" if r.target is None else f"{r.target:.6g}",
            "" if math.isnan(r.rel_error) else f"{r.rel_error:.2e}",
            "[green]pass[/green]" if r.passed else "[red]FAIL[/red]",
        )
    for c in report.scalars:
        table.add_row(c.name, "", f"{c.value:.6g}", "", "", "[green]pass[/green]" if c.passed else "[red]FAIL[/red]")
    return table


def checks_table(title: str, checks: List[Dict[str, Any]]) -> Table:
    """Console table of generic check records (name, value, pass)."""
    table = Table(title=title)
    table.add_column("check")
    table.add_column("value", justify="right")
    table.add_column("result")
    for c in checks:
        value = c.get("value")
        shown = "" if value is None else (f"{value:.6g}" if isinstance(value, float) else str(value))
        table.add_row(c["name"], shown, "[green]pass[/green]" if c["pass"] else "[red]FAIL[/red]")
    return table


VERIFICATION_HEADER = ["name", "side", "claim", "target", "extrapolated", "rel_error", "converged", "pass"]


def verification_rows(report: VerificationReport) -> List[List[Any]]:
    """Flatten a verification report into one CSV row per check."""
    rows: List[List[Any]] = []
    for r in report.limits:
        rows.append([
            r.name,
            r.side,
            r.claim,
            "finite" if r.target is None else r.target,
            r.estimate.extrapolated,
            r.rel_error,
            r.estimate.converged,
            r.passed,
        ])
    for c in report.scalars:
        rows.append([c.name, "", c.claim, "", c.value, math.nan, True, c.passed])
    return rows
