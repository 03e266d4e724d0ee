"""
`verify` command: run verification suites and report per-check timings.
"""

from typing import Annotated

import typer
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from thetachar.cli.dependencies import VERIFICATION_FAILURE, OrderOption, exit_on_error
from thetachar.schemas.output import CheckResult
from thetachar.services.verification_service import VerificationService

console = Console()


def _print_result(result: CheckResult) -> None:
    mark = "[green]PASS[/green]" if result.passed else "[red]FAIL[/red]"
    console.print(
        f"{mark} {escape(result.suite)}/{escape(result.name)} "
        f"({result.elapsed_seconds:.2f}s) {escape(result.detail)}",
        highlight=False,
    )


def verify(
    suite: Annotated[str, typer.Argument(help="Suite name or 'all'")],
    order: OrderOption = None,
) -> None:
    """Run a verification suite; exit 1 if any check fails."""
    with exit_on_error():
        reports = VerificationService.run(suite, order, on_result=_print_result)

    summary = Table(title="Verification summary")
    summary.add_column("suite")
    summary.add_column("checks", justify="right")
    summary.add_column("failures", justify="right")
    summary.add_column("seconds", justify="right")
    for report in reports:
        summary.add_row(
            report.suite,
            str(len(report.checks)),
            str(report.failures),
            f"{sum(c.elapsed_seconds for c in report.checks):.2f}",
        )
    console.print(summary)

    if not all(r.passed for r in reports):
        raise typer.Exit(code=VERIFICATION_FAILURE)
