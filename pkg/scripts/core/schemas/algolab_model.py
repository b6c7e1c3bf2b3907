from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field

from scripts.core.schemas import ArrayModel
from scripts.core.schemas.dynamics_model import Trajectory
from scripts.core.schemas.spin_model import RegisterState


class OracleKind(str, Enum):
    """f(x) tables (0,0), (1,1), (0,1), (1,0)."""

    CONST0 = "CONST0"
    CONST1 = "CONST1"
    BAL01 = "BAL01"
    BAL10 = "BAL10"

    @property
    def is_constant(self) -> bool:
        return self in (OracleKind.CONST0, OracleKind.CONST1)


class EntanglerResult(ArrayModel):
    n_bosons: int
    trajectory: Trajectory
    state_at_quarter: RegisterState
    snapshots: List[RegisterState] = Field(default_factory=list)


class ProjectionOutcome(BaseModel):
    k: int
    probability: float
    fidelity: float
    reference: str


class CnotReport(ArrayModel):
    n_bosons: int
    t: float
    state: RegisterState
    projections: List[ProjectionOutcome]
    oracle_fidelity: float


class DeutschReport(BaseModel):
    oracle: OracleKind
    n_bosons: int
    t_oracle: float
    overlap_plus: float
    overlap_minus: float
    site2_fidelity: float
    classification: Optional[str] = None


class GroverResult(ArrayModel):
    n_sites: int
    n_bosons: int
    trajectory: Trajectory
    t_peak: float = Field(gt=0.0)
    peak_value: float
    omega_est: float = Field(gt=0.0)
    omega_commutator: float = Field(gt=0.0)
    second_derivative: float
