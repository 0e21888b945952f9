"""Verification of the pluri-Lagrangian structures."""

from typing import Optional

import typer

from plurilag.commands.runner import execute
from plurilag.config import settings
from plurilag.models.requests import Command, OutputFormat

router = typer.Typer(help="Verify multi-time Euler-Lagrange equations and closedness.", no_args_is_help=True)

FORMAT = typer.Option(None, "--format", help="text or structured")
CACHE_DIR = typer.Option(None, "--cache-dir", help="Polynomial cache directory ('' disables)")
JOBS = typer.Option(None, "--jobs", help="Worker processes (0 = all cores)")


@router.command("pkdv")
def verify_pkdv(
    n: int = typer.Option(settings.default_n, "--n", help="Dimension of multi-time (>= 3)"),
    k: Optional[int] = typer.Option(None, "--k", help="Highest flow index (>= N, defaults to N)"),
    omit: Optional[int] = typer.Option(None, "--omit", help="Flow left out of the closedness check"),
    seed: int = typer.Option(0, "--seed", help="Seed of the random c-family members"),
    output_format: Optional[OutputFormat] = FORMAT,
    cache_dir: Optional[str] = CACHE_DIR,
    jobs: Optional[int] = JOBS,
):
    """Classify every Euler-Lagrange equation of the PKdV two-form and check dL = 0 on solutions."""
    execute(Command.VERIFY_PKDV, output_format, cache_dir, jobs, n=n, k_max=k, omit=omit, seed=seed)


@router.command("sine-gordon")
def verify_sine_gordon(
    output_format: Optional[OutputFormat] = FORMAT,
    jobs: Optional[int] = JOBS,
):
    """Check the sine-Gordon/mKdV two-form in (x, y, z)."""
    execute(Command.VERIFY_SINE_GORDON, output_format, "", jobs, n=3)


@router.command("curves-demo")
def verify_curves_demo(
    n: int = typer.Option(settings.default_n, "--n", help="Dimension of multi-time (>= 2)"),
    output_format: Optional[OutputFormat] = FORMAT,
):
    """Euler-Lagrange equations of a first-jet one-form against the three-equation system."""
    execute(Command.VERIFY_CURVES, output_format, "", n=n)
