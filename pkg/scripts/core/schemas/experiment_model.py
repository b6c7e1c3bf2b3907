from pathlib import Path
from typing import List, Literal, Optional

from pydantic import BaseModel, Field, field_validator

from scripts.core.schemas.algolab_model import OracleKind


class ExperimentConfig(BaseModel):
    """Validated flag set of one CLI invocation; echoed into every output header."""

    command: str
    n_list: List[int] = Field(default_factory=lambda: [1])
    m: int = Field(default=1, ge=1)
    t_max: Optional[float] = Field(default=None, gt=0.0)
    steps: int = Field(default=400, ge=2)
    gamma: float = Field(default=0.1, ge=0.0)
    oracle: Optional[OracleKind] = None
    oracle_time: Optional[float] = Field(default=None, gt=0.0)
    solution: Optional[List[int]] = None
    g: float = Field(default=1.0, ge=0.0)
    omega_pulse: float = Field(default=0.02, ge=0.0)
    deltas: List[float] = Field(default_factory=list)
    photon_cutoff: int = Field(default=2, ge=1)
    input_path: Optional[Path] = None
    output: Path = Field(default=Path("out"))
    format: Literal["csv", "json"] = "csv"
    jobs: int = Field(default=1, ge=1)
    allow_large: bool = False
    loss: bool = False
    bosons: Optional[int] = Field(default=None, ge=1)
    init: Optional[str] = None

    @field_validator("n_list")
    def check_bosons(cls, value):
        if not value:
            raise ValueError("at least one boson number is required")
        if any(n < 1 for n in value):
            raise ValueError(f"boson numbers must be >= 1, got {value}")
        return value

    @field_validator("solution")
    def check_solution(cls, value):
        if value is not None and any(bit not in (0, 1) for bit in value):
            raise ValueError(f"solution bits must be 0 or 1, got {value}")
        return value

    def header_config(self) -> dict:
        return self.model_dump(mode="json", exclude_none=True)
