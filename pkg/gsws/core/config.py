"""
Application configuration settings
"""
from typing import Optional

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings"""

    model_config = SettingsConfigDict(env_file=".env", env_prefix="GSWS_", case_sensitive=True)

    # Application
    APP_NAME: str = "GSWS Solver"
    VERSION: str = "1.0.0"
    DEBUG: bool = False

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_JSON: bool = True
    LOG_FILE: Optional[str] = None

    @field_validator('LOG_LEVEL', mode='before')
    @classmethod
    def normalize_log_level(cls, v):
        if isinstance(v, str):
            return v.strip().upper()
        return v

    # Physical constants (MeV, fm)
    DEFAULT_MC2: float = 940.0
    DEFAULT_HBARC: float = 197.329

    # Special functions
    SERIES_TOLERANCE: float = 1e-14
    SERIES_MAX_TERMS: int = 100_000
    HYP2F1_Z_SWITCH: float = 0.5
    CONJUGACY_TOLERANCE: float = 1e-10
    REALNESS_TOLERANCE: float = 1e-10

    # Analytic solvers
    ASYMPTOTIC_AL_THRESHOLD: float = 5.0
    ENERGY_XTOL: float = 1e-7  # MeV
    THRESHOLD_MARGIN: float = 1e-6  # fraction of V0
    MIN_SCATTERING_ENERGY: float = 1e-3  # MeV
    RESONANCE_SCAN_POINTS: int = 2000
    RESONANCE_T_GATE: float = 1e-4
    BOUND_SCAN_POINTS: int = 4000
    BOUND_TOP_FRACTION: float = 0.01
    BOUND_TOP_DENSITY: int = 10
    BOUND_TAIL: float = 30.0  # units of 1/a beyond L
    BOUND_PARTNER_WINDOW: float = 0.05  # fraction of V0 searched for the exact-scheme root

    # Quasi-bound search
    QUASIBOUND_MAX_ITER: int = 200
    QUASIBOUND_STEP_TOL: float = 1e-8  # MeV
    QUASIBOUND_RESIDUAL_REDUCTION: float = 1e-10
    QUASIBOUND_RESIDUAL_FLOOR: float = 1e-12
    QUASIBOUND_MAX_WIDTH: float = 10.0  # MeV
    QUASIBOUND_SEED_OFFSET: float = 0.1  # MeV
    QUASIBOUND_GRID_REAL: int = 60
    QUASIBOUND_GRID_IMAG: int = 20
    QUASIBOUND_LINK_TOLERANCE: float = 0.5  # MeV
    QUASIBOUND_DEDUP_TOLERANCE: float = 1e-4  # MeV
    QUASIBOUND_TAIL: float = 15.0  # units of 1/a beyond L

    # Numerical oracle
    ORACLE_TAIL: float = 20.0  # units of 1/a beyond L
    ORACLE_MAX_STEP: float = 0.01  # units of 1/a
    ORACLE_WAVELENGTH_FRACTION: int = 40
    ORACLE_BOUND_SCAN_POINTS: int = 2000
    ORACLE_HALVING_STEP: float = 0.0025  # units of 1/a, base step of the grid-halving check

    # Negative control for the branch-invariance check
    DEBUG_CORRUPT_THETA_BRANCH: bool = False


settings = Settings()
