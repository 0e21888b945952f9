"""Identity suite of the variational bicomplex on random forms."""

from typing import Optional

import typer

from plurilag.commands.runner import execute
from plurilag.models.requests import Command, OutputFormat

router = typer.Typer()


@router.command("bicomplex-props")
def bicomplex_props(
    n: int = typer.Option(3, "--n", help="Dimension of multi-time (>= 2)"),
    seed: int = typer.Option(0, "--seed", help="Random seed"),
    count: int = typer.Option(200, "--count", help="Number of random forms"),
    output_format: Optional[OutputFormat] = typer.Option(None, "--format", help="text or structured"),
):
    """d∘d = δ∘δ = dδ + δd = 0, D_i δ = δ D_i and dι + ιd = 0."""
    execute(Command.BICOMPLEX_PROPS, output_format, "", n=n, seed=seed, count=count)
