import math
from typing import Optional

from pydantic import BaseModel, Field, model_validator

from scripts.config.constants import Defaults
from scripts.exceptions.messages import ErrorMessages
from scripts.exceptions.module_exception import ArgumentError, CutoffError
from scripts.logging import logger


class BusParams(BaseModel):
    """
    Two sites with levels a, b, c each, coupled through one photon mode.

    ``pulse_detuning`` places level a below c in the frame co-rotating with the
    pulse; it defaults to a fixed fraction of the bus detuning. ``Omega`` is the
    amplitude of the effective exchange g^2 Omega / Delta^2; the physical pulse
    amplitude that produces it is ``pulse_amplitude``.
    """

    omega0: float
    omega: float
    g: float = Field(ge=0.0)
    Omega: float = Field(ge=0.0)
    N: int = Field(default=1)
    photon_cutoff: int = Field(default=Defaults.BUS_PHOTON_CUTOFF)
    t_final: float = Field(default=0.0, ge=0.0)
    pulse_detuning: Optional[float] = None

    @model_validator(mode="after")
    def check_params(self):
        if self.N < 1:
            raise ArgumentError(ErrorMessages.BOSONS.format(n=self.N))
        if self.photon_cutoff < 1:
            raise CutoffError(f"photon_cutoff must be >= 1, got {self.photon_cutoff}")
        if self.delta <= 0:
            raise ArgumentError(f"detuning omega0 - omega must be positive, got {self.delta:g}")
        if not 0.0 < self.detuning_p < self.delta:
            raise ArgumentError(f"pulse_detuning must lie in (0, {self.delta:g}), got {self.detuning_p:g}")
        if self.delta < Defaults.BUS_DETUNING_WARNING * self.g * math.sqrt(self.N):
            logger.warning(
                f"bus detuning {self.delta:g} is below {Defaults.BUS_DETUNING_WARNING:g} g sqrt(N); "
                f"adiabatic elimination is unreliable"
            )
        return self

    @property
    def delta(self) -> float:
        return self.omega0 - self.omega

    @property
    def detuning_p(self) -> float:
        if self.pulse_detuning is None:
            return Defaults.BUS_PULSE_DETUNING_RATIO * self.delta
        return self.pulse_detuning

    @property
    def pulse_amplitude(self) -> float:
        d, dp = self.delta, self.detuning_p
        return math.sqrt(4.0 * self.Omega * dp**2 * (d - dp)) / d

    @property
    def exchange_coupling(self) -> float:
        """Coefficient of S+_1 S-_2 + h.c. in the effective interaction."""
        return self.g**2 * self.Omega / self.delta**2

    @property
    def pair_exchange(self) -> float:
        """Matrix element of b1^dag a1 a2^dag b2 in the fourth-order expansion."""
        return 4.0 * self.exchange_coupling

    @property
    def light_shift(self) -> float:
        dp = self.detuning_p
        return dp / 2.0 - math.sqrt(dp**2 / 4.0 + self.pulse_amplitude**2)

    @property
    def level_energies(self) -> tuple:
        """Bare (E_a, E_b, E_c) in the pulse frame."""
        return self.omega0 / 2.0 - self.detuning_p, -self.omega0 / 2.0, self.omega0 / 2.0

    def half_exchange_period(self) -> float:
        """Time for a complete transfer |1,0>>|0,1> -> |0,1>>|1,0> under the pair exchange."""
        if self.Omega == 0 or self.g == 0:
            raise ArgumentError("exchange period undefined for zero coupling")
        return math.pi / (2.0 * self.pair_exchange * self.N)


class BusComparison(BaseModel):
    delta: float
    t: float
    fidelity: float
    infidelity: float
    fidelity_printed: float
    leaked_population: float
    max_photon_population: float
    cutoff_population: float
