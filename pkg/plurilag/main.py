"""Main CLI application."""

from typing import Optional

import typer

from plurilag import __version__
from plurilag.commands import bicomplex, generate, involutivity, verify
from plurilag.config import settings
from plurilag.core.logging import setup_logging

# Create CLI application
app = typer.Typer(
    name=settings.app_name,
    help="Exact differential algebra for pluri-Lagrangian structures of the potential KdV hierarchy.",
    no_args_is_help=True,
)


def _version(value: bool):
    if value:
        typer.echo(f"{settings.app_name} {__version__}")
        raise typer.Exit()


@app.callback()
def main(
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Log level (default from settings)"),
    log_file: Optional[str] = typer.Option(None, "--log-file", help="Also log to this file"),
    version: bool = typer.Option(False, "--version", callback=_version, is_eager=True, help="Show version"),
):
    """Application setup."""
    setup_logging(log_level, log_file)


# Include command groups
app.add_typer(generate.router)
app.add_typer(verify.router, name="verify")
app.add_typer(involutivity.router)
app.add_typer(bicomplex.router)


if __name__ == "__main__":
    app()
