"""
thetachar - command-line entry point.

    thetachar character --algebra A1 --u 3 --j 1 --order 10
    thetachar verify fusion
    thetachar fusion-table --algebra A2 --u 2 --format json
"""

import structlog
import typer

from thetachar.cli.character import character
from thetachar.cli.fusion import fusion_table
from thetachar.cli.verify import verify
from thetachar.core.config import settings
from thetachar.core.logging import configure_logging
from thetachar.core.startup_checks import validate_runtime_config

logger = structlog.get_logger(__name__)

app = typer.Typer(
    name=settings.APP_NAME,
    help="Characters, S-matrices and reductions of boundary admissible affine modules.",
    no_args_is_help=True,
    add_completion=False,
)


@app.callback()
def startup() -> None:
    """Configure logging and validate settings before any command runs."""
    configure_logging()
    try:
        validate_runtime_config()
    except ValueError as e:
        typer.echo(f"Invalid configuration: {e}", err=True)
        raise typer.Exit(code=2) from e
    logger.debug("Starting", app=settings.APP_NAME, version=settings.APP_VERSION, order=settings.ORDER)


app.command("character")(character)
app.command("verify")(verify)
app.command("fusion-table")(fusion_table)


if __name__ == "__main__":
    app()
