"""Table of resolvent coefficients, flows, Hamiltonians and two-form coefficients."""

from typing import Optional

import typer

from plurilag.commands.runner import execute
from plurilag.models.requests import Command, OutputFormat

router = typer.Typer()


@router.command("generate")
def generate(
    n: Optional[int] = typer.Option(None, "--n", help="Dimension of multi-time"),
    k: Optional[int] = typer.Option(None, "--k", help="Highest index k (defaults to N)"),
    output_format: Optional[OutputFormat] = typer.Option(None, "--format", help="text or structured"),
    cache_dir: Optional[str] = typer.Option(None, "--cache-dir", help="Polynomial cache directory ('' disables)"),
):
    """Print r_0..r_k, g_1..g_k, h_1..h_k and, for k >= N, the coefficients L_ij."""
    execute(Command.GENERATE, output_format, cache_dir, n=n, k_max=k)
