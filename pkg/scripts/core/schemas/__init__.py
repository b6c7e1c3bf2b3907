from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field


class ArrayModel(BaseModel):
    """
    Base class for models that carry numpy arrays or scipy sparse matrices.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)


class RunMetadata(BaseModel):
    tool: str = Field(default="")
    version: str = Field(default="")
    command: str = Field(default="")
    config: dict = Field(default_factory=dict)


class CommandSummary(BaseModel):
    status: str = Field(default="success")
    message: str = Field(default="success")
    meta: Optional[RunMetadata] = None
    data: Any = Field(default=None)
    checksums: dict = Field(default_factory=dict)


class CommandFailure(CommandSummary):
    status: str = Field(default="failure")
    message: str = Field(default="failure")
    error: str = Field(default="")
    exit_code: int = Field(default=2)
