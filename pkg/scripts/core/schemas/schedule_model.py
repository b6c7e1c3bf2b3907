import math
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, Field

Axis = Literal["X", "Y", "Z", "I"]


class Factor(BaseModel):
    axis: Axis
    site: int = 0

    def render(self) -> str:
        return "I" if self.axis == "I" else f"{self.axis}{self.site}"


class ScheduleTerm(BaseModel):
    coeff: float
    factors: List[Factor]

    @property
    def order(self) -> int:
        return sum(1 for factor in self.factors if factor.axis != "I")

    @property
    def first_site(self) -> int:
        sites = [factor.site for factor in self.factors if factor.axis != "I"]
        return min(sites) if sites else 0


class TimeExpr(BaseModel):
    """numerator * (pi if with_pi) / denominator, divided by N when over_n is set."""

    numerator: float = 1.0
    with_pi: bool = False
    denominator: int = Field(default=1, ge=1)
    over_n: bool = False

    def evaluate(self, n_bosons: Optional[int] = None) -> float:
        value = self.numerator * (math.pi if self.with_pi else 1.0) / self.denominator
        if self.over_n:
            if n_bosons is None:
                raise ValueError("time expression divides by N but no boson number is bound")
            value /= n_bosons
        return value

    def render(self) -> str:
        if self.with_pi:
            text = "pi" if self.numerator == 1.0 else f"{self.numerator!r}*pi"
            if self.denominator != 1:
                text += f"/{self.denominator}"
        else:
            text = repr(self.numerator)
        return text + ("/N" if self.over_n else "")


class HamiltonianBlock(BaseModel):
    kind: Literal["block"] = "block"
    terms: List[ScheduleTerm]


class Evolve(BaseModel):
    kind: Literal["evolve"] = "evolve"
    time: TimeExpr


class Measure(BaseModel):
    kind: Literal["measure"] = "measure"
    site: int
    basis: Literal["x", "y", "z"]


Statement = Union[HamiltonianBlock, Evolve, Measure]


class Schedule(BaseModel):
    n_sites: int
    n_bosons: Optional[int] = None
    statements: List[Statement] = Field(default_factory=list)

    def blocks(self) -> List[HamiltonianBlock]:
        return [statement for statement in self.statements if isinstance(statement, HamiltonianBlock)]

    def measurements(self) -> List[Measure]:
        return [statement for statement in self.statements if isinstance(statement, Measure)]
