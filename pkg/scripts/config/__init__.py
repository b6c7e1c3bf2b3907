from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings


class _Simulation(BaseSettings):
    DIM_CAP: int = Field(default=250_000, validation_alias="BOSEQ_DIM_CAP")

    @field_validator("DIM_CAP", mode="after")
    def validate_dim_cap(cls, value):
        if value < 1:
            raise ValueError("BOSEQ_DIM_CAP must be a positive integer")
        return value


class _Logging(BaseSettings):
    LEVEL: str = Field(default="INFO", validation_alias="BOSEQ_LOG_LEVEL")
    LOG_FILE: Optional[str] = Field(default=None, validation_alias="BOSEQ_LOG_FILE")

    @field_validator("LEVEL", mode="before")
    def validate_level(cls, value):
        return str(value).strip().upper()


Simulation = _Simulation()
Logging = _Logging()

__all__ = ["Simulation", "Logging"]
