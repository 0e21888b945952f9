"""Request models for CLI commands."""

from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field, model_validator


class OutputFormat(str, Enum):
    """Supported output formats."""
    TEXT = "text"
    STRUCTURED = "structured"


class Command(str, Enum):
    """Verification commands."""
    GENERATE = "generate"
    VERIFY_PKDV = "verify-pkdv"
    VERIFY_SINE_GORDON = "verify-sine-gordon"
    VERIFY_CURVES = "verify-curves-demo"
    INVOLUTIVITY = "involutivity"
    BICOMPLEX_PROPS = "bicomplex-props"


class RunConfig(BaseModel):
    """Configuration of one command run."""
    command: Command = Field(..., description="Command being run")
    n: int = Field(3, description="Dimension of multi-time", ge=1)
    k_max: Optional[int] = Field(None, description="Highest flow index (defaults to n)", ge=0)
    output_format: OutputFormat = Field(OutputFormat.TEXT, description="Report format")
    cache_dir: Optional[str] = Field(None, description="Polynomial cache directory; None disables caching")
    jobs: int = Field(1, description="Worker processes", ge=1)
    omit: Optional[int] = Field(None, description="Flow left out of the closedness substitution")
    seed: int = Field(0, description="Seed of random property checks")
    count: int = Field(200, description="Number of random samples", ge=1)

    @model_validator(mode="after")
    def check_dimensions(self):
        if self.command == Command.VERIFY_PKDV:
            if self.n < 3:
                raise ValueError("surfaces need N >= 3")
            if self.k_max is not None and self.k_max < self.n:
                raise ValueError("k_max must be at least N for PKdV verification")
        if self.command == Command.VERIFY_CURVES and self.n < 2:
            raise ValueError("curves need N >= 2")
        if self.command == Command.BICOMPLEX_PROPS and self.n < 2:
            raise ValueError("the identity suite needs N >= 2")
        if self.omit is not None and not 2 <= self.omit <= self.n:
            raise ValueError(f"omitted flow must lie in 2..{self.n}")
        return self

    @property
    def effective_k_max(self) -> int:
        return self.n if self.k_max is None else self.k_max
