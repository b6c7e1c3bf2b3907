from typing import List, Optional

import numpy as np
from pydantic import Field, field_validator, model_validator

from scripts.core.schemas import ArrayModel
from scripts.core.schemas.spin_model import Operator
from scripts.exceptions.messages import ErrorMessages
from scripts.exceptions.module_exception import ArgumentError, DimensionError


class LindbladSpec(ArrayModel):
    """Generator -i[H, rho] - gamma * sum_n [A_n, [A_n, rho]]."""

    gamma: float = Field(ge=0.0)
    couplings: List[Operator] = Field(default_factory=list)
    hamiltonian: Optional[Operator] = None

    @model_validator(mode="after")
    def check_dims(self):
        dims = {op.dim for op in self.couplings}
        if self.hamiltonian is not None:
            dims.add(self.hamiltonian.dim)
        if len(dims) > 1:
            raise DimensionError(ErrorMessages.DIMENSION.format(got=sorted(dims), expected="one common dimension"))
        return self

    @property
    def dim(self) -> Optional[int]:
        if self.hamiltonian is not None:
            return self.hamiltonian.dim
        return self.couplings[0].dim if self.couplings else None

    @property
    def hermitian_couplings(self) -> bool:
        return all(op.hermitian_hint for op in self.couplings)


class Trajectory(ArrayModel):
    times: np.ndarray
    values: np.ndarray
    labels: List[str]

    @field_validator("times", mode="before")
    def as_times(cls, value):
        return np.asarray(value, dtype=float).reshape(-1)

    @field_validator("values", mode="before")
    def as_values(cls, value):
        value = np.asarray(value)
        return value.reshape(-1, 1) if value.ndim == 1 else value

    @model_validator(mode="after")
    def check_samples(self):
        if self.times.size > 1 and np.any(np.diff(self.times) <= 0):
            raise ArgumentError("trajectory times must be strictly increasing")
        if self.values.shape[0] != self.times.size:
            raise DimensionError(ErrorMessages.DIMENSION.format(got=self.values.shape[0], expected=self.times.size))
        if self.values.shape[1] != len(self.labels):
            raise DimensionError(ErrorMessages.DIMENSION.format(got=self.values.shape[1], expected=len(self.labels)))
        return self

    def column(self, label: Optional[str] = None) -> np.ndarray:
        if label is None:
            return self.values[:, 0]
        try:
            return self.values[:, self.labels.index(label)]
        except ValueError as e:
            raise ArgumentError(f"unknown trajectory column {label!r}") from e


class LossModel(ArrayModel):
    """
    Two-mode Fock space with n_a + n_b <= N per site, the annihilators a_n, b_n
    on it, and the embedding of fixed-N register states.
    """

    n_bosons: int
    n_sites: int
    site_basis: List[tuple]
    couplings: List[Operator]
    annihilators: dict

    @property
    def site_dim(self) -> int:
        return len(self.site_basis)

    @property
    def dim(self) -> int:
        return self.site_dim**self.n_sites
