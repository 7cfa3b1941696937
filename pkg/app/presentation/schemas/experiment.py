"""
Pydantic schemas for experiment endpoints.
Part of Presentation layer - request/response models.
"""
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class ExperimentRequest(BaseModel):
    """Curve spec fields plus any ExperimentConfig fields; the kind comes from the path."""

    curve: Dict[str, Any]
    parameters: Dict[str, Any] = Field(default_factory=dict)
    write_artifacts: bool = False


class TableResponse(BaseModel):
    name: str
    columns: List[str]
    rows: List[List[Any]]


class CheckResponse(BaseModel):
    name: str
    passed: bool
    detail: str = ""


class ExperimentResponse(BaseModel):
    """Rows and tolerance checks of one experiment."""

    kind: str
    curve_id: str
    passed: bool
    config_sha256: str
    tables: List[TableResponse]
    checks: List[CheckResponse]
    artifacts: List[str] = Field(default_factory=list)
    error: Optional[str] = None
