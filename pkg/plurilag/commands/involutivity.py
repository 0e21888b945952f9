"""Involutivity of the KdV Hamiltonians."""

from typing import Optional

import typer

from plurilag.commands.runner import execute
from plurilag.config import settings
from plurilag.models.requests import Command, OutputFormat

router = typer.Typer()


@router.command("involutivity")
def involutivity(
    k: int = typer.Option(4, "--k", help="Number of Hamiltonians", min=1),
    n: int = typer.Option(settings.default_n, "--n", help="Dimension used for the closedness proof chain"),
    output_format: Optional[OutputFormat] = typer.Option(None, "--format", help="text or structured"),
    cache_dir: Optional[str] = typer.Option(None, "--cache-dir", help="Polynomial cache directory ('' disables)"),
):
    """Matrix of {∫h_i, ∫h_j} = ∫0 for 1 <= i, j <= k."""
    execute(Command.INVOLUTIVITY, output_format, cache_dir, n=n, k_max=k)
