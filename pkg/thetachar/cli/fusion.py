"""
`fusion-table` command: the Verlinde fusion tensor of a boundary level.
"""

from typing import Annotated

import typer

from thetachar.cli.dependencies import AlgebraOption, TableFormat, UOption, exit_on_error
from thetachar.engine.affine_weights import validate_boundary_u
from thetachar.engine.root_system import build
from thetachar.services.export_service import ExportService


def fusion_table(
    algebra: AlgebraOption,
    u: UOption,
    output_format: Annotated[TableFormat, typer.Option("--format", "-f")] = TableFormat.csv,
    all_entries: Annotated[
        bool, typer.Option("--all-entries", help="Also print the zero coefficients (full tensor).")
    ] = False,
) -> None:
    """
    Print the fusion coefficients N_abc as CSV or JSON.

    Zero coefficients are left out unless --all-entries is given.
    """
    with exit_on_error(output_format is TableFormat.json):
        rs = build(algebra)
        validate_boundary_u(rs, u)
        table = ExportService.fusion_table(rs, u, include_zero=all_entries)

    if output_format is TableFormat.json:
        typer.echo(ExportService.to_json(table))
    else:
        typer.echo(ExportService.fusion_csv(table), nl=False)
