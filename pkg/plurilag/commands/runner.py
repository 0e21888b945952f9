"""Shared plumbing of the CLI commands: config validation, execution, exit codes."""

import os
from typing import Optional

import typer
from pydantic import ValidationError

from plurilag.config import settings
from plurilag.core.exceptions import DiffAlgebraError
from plurilag.core.logging import logger
from plurilag.models.requests import Command, OutputFormat, RunConfig
from plurilag.services.report_service import report_service
from plurilag.services.verification_service import verification_service

EXIT_FAILURE = 1
EXIT_USAGE = 2


def resolve_jobs(jobs: Optional[int]) -> int:
    jobs = settings.jobs if jobs is None else jobs
    return jobs if jobs > 0 else (os.cpu_count() or 1)


def resolve_cache_dir(cache_dir: Optional[str]) -> Optional[str]:
    """--cache-dir, else PLURILAG_CACHE_DIR, else the configured default; '' disables."""
    if cache_dir is None:
        cache_dir = os.environ.get("PLURILAG_CACHE_DIR", settings.cache_dir)
    return cache_dir or None


def execute(
    command: Command,
    output_format: Optional[OutputFormat] = None,
    cache_dir: Optional[str] = None,
    jobs: Optional[int] = None,
    **fields,
) -> None:
    """Validate a RunConfig, run it, print the report and exit with its verdict."""
    try:
        cfg = RunConfig(
            command=command,
            output_format=output_format or OutputFormat(settings.output_format),
            cache_dir=resolve_cache_dir(cache_dir),
            jobs=resolve_jobs(jobs),
            **{k: v for k, v in fields.items() if v is not None},
        )
    except ValidationError as e:
        for error in e.errors():
            typer.echo(f"Error: {error['msg']}", err=True)
        raise typer.Exit(EXIT_USAGE)

    try:
        report = verification_service.run(cfg)
    except DiffAlgebraError as e:
        logger.error(f"{command.value} aborted: {type(e).__name__}: {e}")
        raise typer.Exit(EXIT_FAILURE)

    typer.echo(report_service.render(report, cfg.output_format), nl=False)
    if not report.summary.passed:
        raise typer.Exit(EXIT_FAILURE)
