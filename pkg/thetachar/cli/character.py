"""
`character` command: expand a boundary admissible character.
"""

from typing import Annotated

import structlog
import typer
from rich.console import Console

from thetachar.cli.dependencies import (
    AlgebraOption,
    BetaOption,
    JOption,
    K1Option,
    K2Option,
    OrderOption,
    OutputFormat,
    POption,
    UOption,
    YWordOption,
    exit_on_error,
    resolve_descriptor,
)
from thetachar.core.config import settings
from thetachar.engine.characters import boundary_character
from thetachar.services.export_service import ExportService

logger = structlog.get_logger(__name__)

console = Console()


def character(
    algebra: AlgebraOption,
    u: UOption,
    j: JOption = None,
    p: POption = None,
    k1: K1Option = None,
    k2: K2Option = None,
    beta: BetaOption = None,
    y_word: YWordOption = None,
    order: OrderOption = None,
    output_format: Annotated[
        OutputFormat, typer.Option("--format", "-f", help="text table or JSON record")
    ] = OutputFormat.text,
) -> None:
    """Print the normalized character of a boundary admissible weight."""
    as_json = output_format is OutputFormat.json
    depth = order or settings.ORDER
    with exit_on_error(as_json):
        d = resolve_descriptor(algebra, u, j, p, k1, k2, beta, y_word)
        result = boundary_character(d, depth)
        record = ExportService.series_record(result.series, d.cartan, d, depth)

    logger.info("Character computed", descriptor=d.label, terms=len(record.terms))
    if as_json:
        typer.echo(ExportService.to_json(record))
        return
    console.print(f"[bold]{d.label}[/bold]  level {d.level}  m = {result.m_lambda}  top q^{result.top_q}")
    console.print(ExportService.series_table(record, title=f"ch to depth {depth}"))
