from typing import Any, Optional

import numpy as np
import scipy.sparse as sp
from pydantic import Field, PrivateAttr, field_validator, model_validator

from scripts.config.constants import Tolerances
from scripts.core.schemas import ArrayModel
from scripts.exceptions.messages import ErrorMessages
from scripts.exceptions.module_exception import (
    ArgumentError,
    DimensionError,
    NonHermitianError,
    NormalizationError,
)
from scripts.utils.linalg_util import max_abs


class QubitAmplitudes(ArrayModel):
    n_bosons: int
    amps: np.ndarray

    @field_validator("amps", mode="before")
    def as_complex(cls, value):
        return np.asarray(value, dtype=complex)

    @model_validator(mode="after")
    def check_amplitudes(self):
        if self.n_bosons < 1:
            raise ArgumentError(ErrorMessages.BOSONS.format(n=self.n_bosons))
        if self.amps.shape != (self.n_bosons + 1,):
            raise DimensionError(ErrorMessages.DIMENSION.format(got=self.amps.shape, expected=(self.n_bosons + 1,)))
        norm = float(np.vdot(self.amps, self.amps).real)
        if abs(norm - 1.0) > Tolerances.STATE_NORM:
            raise NormalizationError(f"qubit amplitudes have squared norm {norm:.15g}")
        return self


class RegisterState(ArrayModel):
    """
    Amplitudes over (N+1)^M Fock configurations. Site 1 is the slowest-varying
    index, so ``amps.reshape((N+1,) * M)[k1, ..., kM]`` addresses |k1 ... kM>.
    """

    n_bosons: int
    n_sites: int
    amps: np.ndarray

    @field_validator("amps", mode="before")
    def as_complex(cls, value):
        return np.asarray(value, dtype=complex).reshape(-1)

    @model_validator(mode="after")
    def check_register(self):
        if self.n_bosons < 1:
            raise ArgumentError(ErrorMessages.BOSONS.format(n=self.n_bosons))
        if self.n_sites < 1:
            raise ArgumentError(f"register needs at least one site, got {self.n_sites}")
        if self.amps.size != self.dim:
            raise DimensionError(ErrorMessages.DIMENSION.format(got=self.amps.size, expected=self.dim))
        norm = float(np.vdot(self.amps, self.amps).real)
        if abs(norm - 1.0) > Tolerances.STATE_NORM:
            raise NormalizationError(f"register state has squared norm {norm:.15g}")
        return self

    @property
    def site_dim(self) -> int:
        return self.n_bosons + 1

    @property
    def dim(self) -> int:
        return self.site_dim**self.n_sites

    def tensor(self) -> np.ndarray:
        return self.amps.reshape((self.site_dim,) * self.n_sites)


class Operator(ArrayModel):
    """
    Square complex matrix, stored as CSR. Treat instances as immutable: the
    eigendecomposition used by unitary evolution is cached on the instance.
    """

    matrix: Any
    hermitian_hint: bool = False
    label: str = ""
    _spectrum: Optional[tuple] = PrivateAttr(default=None)

    @field_validator("matrix", mode="before")
    def as_csr(cls, value):
        return sp.csr_matrix(value, dtype=complex)

    @model_validator(mode="after")
    def check_operator(self):
        rows, cols = self.matrix.shape
        if rows != cols:
            raise DimensionError(ErrorMessages.DIMENSION.format(got=(rows, cols), expected="square"))
        if self.hermitian_hint:
            deviation = max_abs(self.matrix - self.matrix.conj().T)
            if deviation > Tolerances.HERMITIAN * max(1.0, max_abs(self.matrix)):
                raise NonHermitianError(ErrorMessages.NON_HERMITIAN.format(dev=deviation))
        return self

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def is_diagonal(self) -> bool:
        coo = self.matrix.tocoo()
        return bool(np.all(coo.row == coo.col))

    def diagonal(self) -> np.ndarray:
        return self.matrix.diagonal()


class DensityMatrix(ArrayModel):
    """
    Unit-trace matrix. ``strict`` additionally demands Hermiticity; it is
    switched off for generators that do not preserve it.
    """

    matrix: np.ndarray
    strict: bool = Field(default=True)

    @field_validator("matrix", mode="before")
    def as_dense(cls, value):
        if sp.issparse(value):
            value = value.toarray()
        return np.asarray(value, dtype=complex)

    @model_validator(mode="after")
    def check_density(self):
        rows, cols = self.matrix.shape
        if rows != cols:
            raise DimensionError(ErrorMessages.DIMENSION.format(got=(rows, cols), expected="square"))
        trace = complex(np.trace(self.matrix))
        if abs(trace - 1.0) > Tolerances.DENSITY_TRACE:
            raise NormalizationError(f"density matrix trace is {trace:.12g}")
        if self.strict:
            deviation = max_abs(self.matrix - self.matrix.conj().T)
            if deviation > Tolerances.DENSITY_HERMITIAN:
                raise NonHermitianError(ErrorMessages.NON_HERMITIAN.format(dev=deviation))
        return self

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]
