"""
Pydantic schemas for potential parameters
"""
from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from gsws.core.config import settings


class PotentialParams(BaseModel):
    """Physical inputs of the generalized symmetric Woods-Saxon potential"""
    v0: float = Field(..., allow_inf_nan=False, description="Well depth V0 (MeV)")
    w0: float = Field(..., allow_inf_nan=False, description="Surface term strength W0 (MeV)")
    a: float = Field(..., gt=0, allow_inf_nan=False, description="Diffuseness parameter a (1/fm)")
    L: float = Field(..., gt=0, allow_inf_nan=False, description="Half width L (fm)")
    mc2: float = Field(
        default_factory=lambda: settings.DEFAULT_MC2,
        gt=0,
        allow_inf_nan=False,
        description="Particle rest energy mc^2 (MeV)",
    )
    hbarc: float = Field(
        default_factory=lambda: settings.DEFAULT_HBARC,
        gt=0,
        allow_inf_nan=False,
        description="hbar*c (MeV fm)",
    )

    model_config = ConfigDict(frozen=True)

    @property
    def two_m_over_hbar2(self) -> float:
        """2m/hbar^2 in 1/(MeV fm^2)"""
        return 2.0 * self.mc2 / self.hbarc ** 2

    @property
    def aL(self) -> float:
        return self.a * self.L

    def with_updates(self, **changes: Any) -> "PotentialParams":
        """Return a validated copy with some fields replaced"""
        return PotentialParams(**{**self.model_dump(), **changes})


class MwsParams(BaseModel):
    """Parameters of the modified Woods-Saxon comparison potential"""
    v0: float = Field(..., allow_inf_nan=False, description="Well depth V0 (MeV)")
    a: float = Field(..., gt=0, allow_inf_nan=False, description="Diffuseness parameter a (1/fm)")
    L: float = Field(..., gt=0, allow_inf_nan=False, description="Half width L (fm)")
    p: int = Field(..., ge=1, description="Constant term of the denominator")
    q: int = Field(..., ge=1, description="Weight of the exponential term")

    model_config = ConfigDict(frozen=True)
