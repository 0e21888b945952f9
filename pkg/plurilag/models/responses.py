"""Report records.

Every record serialises to one line of the structured report; the first line is
always a header.
"""

from enum import Enum
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field

FORMAT_VERSION = 1


class EquationStatus(str, Enum):
    """Classification of a multi-time Euler-Lagrange equation."""
    IDENTICALLY_ZERO = "identically-zero"
    EVOLUTION_EQUATION = "evolution-equation"
    CONSEQUENCE_OF_FLOWS = "consequence-of-flows"
    NONZERO_RESIDUAL = "NONZERO-RESIDUAL"


class HeaderRecord(BaseModel):
    """Report header."""
    record: Literal["header"] = "header"
    format_version: int = Field(FORMAT_VERSION, description="Structured format version")
    command: str = Field(..., description="Command that produced the report")
    n: int = Field(..., description="Dimension of multi-time")
    k_max: Optional[int] = Field(None, description="Highest flow index")
    coordinates: List[str] = Field(default_factory=list, description="Coordinate names")
    field: str = Field("u", description="Field name")
    omit: Optional[int] = Field(None, description="Omitted flow")
    seed: Optional[int] = Field(None, description="Random seed")


class EquationRecord(BaseModel):
    """One generated Euler-Lagrange equation and its classification."""
    record: Literal["equation"] = "equation"
    family: str = Field(..., description="Equation family")
    indices: List[int] = Field(..., description="Coordinates involved")
    multi_index: List[int] = Field(..., description="Multi-index I as exponent tuple")
    residual: str = Field(..., description="Canonical residual before reduction")
    status: EquationStatus = Field(..., description="Classification")
    flow: Optional[str] = Field(None, description="Relation label for evolution equations")
    reduced: str = Field(..., description="Canonical residual after reduction")


class CheckRecord(BaseModel):
    """A named identity check."""
    record: Literal["check"] = "check"
    name: str = Field(..., description="Identity checked")
    passed: bool = Field(..., description="Whether the identity holds")
    residual: str = Field("0", description="Canonical residual (0 on success)")
    detail: Optional[str] = Field(None, description="Extra information")


class PolynomialRecord(BaseModel):
    """A generated polynomial."""
    record: Literal["polynomial"] = "polynomial"
    name: str = Field(..., description="Symbol, e.g. r_2 or L_13")
    value: str = Field(..., description="Canonical rendering")


class MatrixRecord(BaseModel):
    """A boolean matrix (involutivity)."""
    record: Literal["matrix"] = "matrix"
    name: str = Field(..., description="Matrix name")
    rows: List[List[bool]] = Field(..., description="Row-major entries, 1-based labels implied")


class SummaryRecord(BaseModel):
    """Closing summary."""
    record: Literal["summary"] = "summary"
    passed: bool = Field(..., description="Overall verdict")
    counts: Dict[str, int] = Field(default_factory=dict, description="Counts per status or check outcome")
