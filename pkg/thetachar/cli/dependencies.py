"""
Shared CLI options and input resolution.

Type aliases keep command signatures short:

    def character(algebra: AlgebraOption, u: UOption, ...)
"""

from collections.abc import Iterator
from contextlib import contextmanager
from enum import Enum
from fractions import Fraction
from typing import Annotated, Optional

import structlog
import typer
from rich.console import Console
from rich.markup import escape

from thetachar.core.exceptions import InvalidInputError, ThetaCharError
from thetachar.engine.affine_weights import (
    AdmissibleDescriptor,
    descriptor_for_j,
    descriptor_for_p_k,
    make_descriptor,
)
from thetachar.engine.root_system import build
from thetachar.schemas.common import ErrorRecord, ErrorResponse

logger = structlog.get_logger(__name__)


class OutputFormat(str, Enum):
    text = "text"
    json = "json"


class TableFormat(str, Enum):
    csv = "csv"
    json = "json"


# ==============================================================================
# Option aliases
# ==============================================================================

AlgebraOption = Annotated[str, typer.Option("--algebra", "-a", help="Cartan type, e.g. A1, A2, B2, G2")]
UOption = Annotated[int, typer.Option("--u", help="Denominator u of the boundary level h∨/u - h∨")]
OrderOption = Annotated[
    Optional[int],
    typer.Option("--order", "-n", min=1, help="Truncation depth (default THETACHAR_ORDER)"),
]

JOption = Annotated[Optional[int], typer.Option("--j", help="sl_2 label: beta = -j omega_1")]
POption = Annotated[Optional[int], typer.Option("--p", help="sl_3 label: y = r_theta^p")]
K1Option = Annotated[Optional[int], typer.Option("--k1", help="sl_3 label k1")]
K2Option = Annotated[Optional[int], typer.Option("--k2", help="sl_3 label k2")]
BetaOption = Annotated[
    Optional[str], typer.Option("--beta", help="beta in fundamental weight coordinates, comma separated")
]
YWordOption = Annotated[
    Optional[str], typer.Option("--y-word", help="y as simple reflections, comma separated, 1-based")
]


def parse_rationals(text: str) -> list[Fraction]:
    """'1,-1/2' -> [1, -1/2]."""
    try:
        return [Fraction(part.strip()) for part in text.split(",") if part.strip()]
    except (ValueError, ZeroDivisionError) as e:
        raise InvalidInputError(f"cannot parse rational list {text!r}") from e


def parse_word(text: Optional[str]) -> list[int]:
    if not text:
        return []
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise InvalidInputError(f"cannot parse Weyl word {text!r}") from e


def resolve_descriptor(
    algebra: str,
    u: int,
    j: Optional[int] = None,
    p: Optional[int] = None,
    k1: Optional[int] = None,
    k2: Optional[int] = None,
    beta: Optional[str] = None,
    y_word: Optional[str] = None,
) -> AdmissibleDescriptor:
    """
    Exactly one selector: --j (A1), --p/--k1/--k2 (A2) or --beta [--y-word].

    Raises:
        InvalidInputError: missing, mixed or malformed selectors
        InvalidUError, InadmissibleDescriptorError: from descriptor validation
    """
    rs = build(algebra)
    label = rs.cartan_type.label
    selectors = [j is not None, any(v is not None for v in (p, k1, k2)), beta is not None]
    if sum(selectors) != 1:
        raise InvalidInputError("give exactly one of --j, --p/--k1/--k2 or --beta")

    if j is not None:
        if label != "A1":
            raise InvalidInputError(f"--j labels sl_2 weights; algebra is {label}")
        return descriptor_for_j(u, j)
    if beta is None:
        if label != "A2":
            raise InvalidInputError(f"--p/--k1/--k2 label sl_3 weights; algebra is {label}")
        if p is None or k1 is None or k2 is None:
            raise InvalidInputError("--p, --k1 and --k2 must be given together")
        return descriptor_for_p_k(u, p, k1, k2)
    return make_descriptor(rs, u, parse_rationals(beta), rs.element(parse_word(y_word)))


# ==============================================================================
# Error reporting
# ==============================================================================

USAGE_ERROR = 2
VERIFICATION_FAILURE = 1

err_console = Console(stderr=True)


@contextmanager
def exit_on_error(as_json: bool = False) -> Iterator[None]:
    """Turn domain errors into exit code 2 with the message on stderr."""
    try:
        yield
    except ThetaCharError as e:
        logger.info("Command rejected", code=e.code, message=e.message)
        if as_json:
            payload = ErrorResponse(error=ErrorRecord(**e.to_dict()))
            err_console.print(payload.model_dump_json(), markup=False, highlight=False)
        else:
            err_console.print(f"[red]Error[/red] {escape(f'[{e.code}]')} {escape(e.message)}", highlight=False)
        raise typer.Exit(code=USAGE_ERROR) from e
