"""
Reflection and transmission through the GSWS potential

For a wave incident from the left the solution is D1 u1 + D2 u2 on x < 0
and D3 v1 + D4 v2 on x > 0 (v(x) = u(-x)), with D3 = 0 for no incoming wave
from the right. Continuity of the value and slope at x = 0 fixes D2/D1 and
D4/D1; R = |D2/D1|^2 and T = |D4/D1|^2.
"""
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import brentq, minimize_scalar

from gsws.core.config import settings
from gsws.core.exceptions import BranchError, GswsException, NoBarrierError
from gsws.core.logging import StructuredLogger, get_logger
from gsws.core.validation import validate_energy_window, validate_sweep_input
from gsws.instrumentation.metrics import ROOT_SOLVES, SOLVE_LATENCY
from gsws.schemas.potential import PotentialParams
from gsws.services.potential import (
    DEFAULT_SOLVER,
    MatchingScheme,
    Regime,
    SolverConfig,
    barrier_height,
    check_asymptotic_regime,
    derive,
)
from gsws.services.special_functions import ConnectionCoefficients, connection_coefficients
from gsws.services.wavefunction import (
    BoundaryValues,
    asymptotic_boundary_values,
    exact_boundary_values,
)

logger = get_logger(__name__)
structured_logger = StructuredLogger(logger)


class SweepAxis(str, Enum):
    """Parameter varied by ``sweep``"""
    ENERGY = "energy"
    V0 = "v0"
    W0 = "w0"
    A = "a"
    L = "L"


AXIS_COLUMNS = {
    SweepAxis.ENERGY: "E_MeV",
    SweepAxis.V0: "V0_MeV",
    SweepAxis.W0: "W0_MeV",
    SweepAxis.A: "a_per_fm",
    SweepAxis.L: "L_fm",
}


@dataclass(frozen=True)
class AmplitudeRatios:
    """
    Reflected and transmitted amplitudes relative to the incident one.

    For incidence from the right the same fields hold D4/D3 (reflected) and
    D2/D3 (transmitted).
    """
    d2_over_d1: complex
    d4_over_d1: complex

    @property
    def norm_defect(self) -> float:
        return abs(abs(self.d2_over_d1) ** 2 + abs(self.d4_over_d1) ** 2 - 1.0)


@dataclass(frozen=True)
class ScatteringResult:
    """Reflection and transmission coefficients at one energy"""
    energy: float
    r: float
    t: float
    unitarity_defect: float
    scheme: Optional[MatchingScheme] = None
    closed_form_defect: Optional[float] = None


def _scattering_state(
    params: PotentialParams,
    energy: float,
    solver: SolverConfig,
) -> Tuple[ConnectionCoefficients, BoundaryValues, complex]:
    dp = derive(params, energy, Regime.SCATTERING, theta_branch=solver.theta_branch)
    coefficients = connection_coefficients(dp)
    if solver.scheme is MatchingScheme.EXACT:
        values = exact_boundary_values(params, dp)
    else:
        values = asymptotic_boundary_values(params, dp, coefficients)
    return coefficients, values, dp.kappa


def _solve_continuity(values: BoundaryValues, from_right: bool) -> Tuple[complex, complex]:
    """
    Solve the 2x2 continuity system for (D2, D4).

    Left incidence (D1 = 1, D3 = 0):  D2 u2 - D4 u2 = -u1,   D2 u2' + D4 u2' = -u1'
    Right incidence (D3 = 1, D1 = 0): D2 u2 - D4 u2 =  u1,   D2 u2' + D4 u2' = -u1'
    """
    matrix = np.array([[values.u2, -values.u2], [values.du2, values.du2]], dtype=complex)
    sign = 1.0 if from_right else -1.0
    rhs = np.array([sign * values.u1, -values.du1], dtype=complex)
    d2, d4 = np.linalg.solve(matrix, rhs)
    return complex(d2), complex(d4)


def _closed_form_ratios(coefficients: ConnectionCoefficients, kappa: complex, L: float) -> AmplitudeRatios:
    n1, n2, n3, n4 = coefficients.n1, coefficients.n2, coefficients.n3, coefficients.n4
    ahead = np.exp(2j * kappa * L)
    behind = np.exp(-2j * kappa * L)
    denominator = n4 ** 2 * ahead - n3 ** 2 * behind
    d2 = (n1 * n3 * behind - n2 * n4 * ahead) / denominator
    d4 = (n1 * n4 - n2 * n3) / denominator
    return AmplitudeRatios(d2_over_d1=complex(d2), d4_over_d1=complex(d4))


def amplitude_ratios(
    params: PotentialParams,
    energy: float,
    solver: SolverConfig = DEFAULT_SOLVER,
) -> AmplitudeRatios:
    """
    Reflected and transmitted amplitude ratios for a wave incident from the left.

    In the asymptotic scheme these are the closed forms

        D2/D1 = (N1 N3 e^{-2i kappa L} - N2 N4 e^{2i kappa L}) / (N4^2 e^{2i kappa L} - N3^2 e^{-2i kappa L})
        D4/D1 = (N1 N4 - N2 N3) / (N4^2 e^{2i kappa L} - N3^2 e^{-2i kappa L})

    In the exact scheme the continuity system is solved with the
    hypergeometric values at x = 0.
    """
    coefficients, values, kappa = _scattering_state(params, energy, solver)
    if solver.scheme is MatchingScheme.ASYMPTOTIC:
        return _closed_form_ratios(coefficients, kappa, params.L)
    d2, d4 = _solve_continuity(values, from_right=False)
    return AmplitudeRatios(d2_over_d1=d2, d4_over_d1=d4)


def mirrored_amplitude_ratios(
    params: PotentialParams,
    energy: float,
    solver: SolverConfig = DEFAULT_SOLVER,
) -> AmplitudeRatios:
    """Amplitude ratios for a wave incident from the right (D3 = 1, D1 = 0)"""
    _, values, _ = _scattering_state(params, energy, solver)
    d2, d4 = _solve_continuity(values, from_right=True)
    return AmplitudeRatios(d2_over_d1=d4, d4_over_d1=d2)


def _ratio_form_coefficients(coefficients: ConnectionCoefficients, kappa: complex, L: float) -> Tuple[float, float]:
    """R and T in the closed ratio form, used as a cross-check at moderate energies"""
    x = np.exp(coefficients.log_n1 + coefficients.log_n3 - coefficients.log_n2 - coefficients.log_n4)
    y = np.exp(coefficients.log_n1 + coefficients.log_n4 - coefficients.log_n2 - coefficients.log_n3)
    phase = np.exp(4j * kappa * L)
    bracket = x / phase + phase / x
    denominator = y + 1.0 / y - bracket
    r = (2.0 - bracket) / denominator
    t = (y + 1.0 / y - 2.0) / denominator
    return float(np.real(r)), float(np.real(t))


def reflection_transmission(
    params: PotentialParams,
    energy: float,
    solver: SolverConfig = DEFAULT_SOLVER,
) -> ScatteringResult:
    """
    Reflection and transmission coefficients at a real energy E > 0.

    Returns the squared moduli of the amplitude ratios. In the asymptotic
    scheme the closed ratio forms of R and T are evaluated as well and
    their largest deviation is reported as ``closed_form_defect``.
    """
    coefficients, values, kappa = _scattering_state(params, energy, solver)
    closed_form_defect = None
    if solver.scheme is MatchingScheme.ASYMPTOTIC:
        ratios = _closed_form_ratios(coefficients, kappa, params.L)
        r = abs(ratios.d2_over_d1) ** 2
        t = abs(ratios.d4_over_d1) ** 2
        r_ratio, t_ratio = _ratio_form_coefficients(coefficients, kappa, params.L)
        closed_form_defect = max(abs(r_ratio - r), abs(t_ratio - t))
    else:
        d2, d4 = _solve_continuity(values, from_right=False)
        r, t = abs(d2) ** 2, abs(d4) ** 2

    return ScatteringResult(
        energy=float(energy),
        r=r,
        t=t,
        unitarity_defect=abs(r + t - 1.0),
        scheme=solver.scheme,
        closed_form_defect=closed_form_defect,
    )


def resonance_residual(
    params: PotentialParams,
    energy: float,
    solver: SolverConfig = DEFAULT_SOLVER,
) -> float:
    """
    Transmission-resonance residual.

    Asymptotic scheme: sin(4 kappa L) + (i/2) ((N1 N3)^2 - (N2 N4)^2) / (N1 N2 N3 N4),
    real for real E; T = 1 where it vanishes and the transmission phase
    matches (other zeros are filtered by a T check).

    Exact scheme: Im(D2/D4), the reflection-to-transmission amplitude ratio,
    which is purely imaginary and vanishes exactly where R = 0.

    Raises:
        BranchError: If the discarded imaginary part exceeds the realness tolerance
    """
    if solver.scheme is MatchingScheme.EXACT:
        return reflection_ratio_residual(params, energy, solver)

    dp = derive(params, energy, Regime.SCATTERING, theta_branch=solver.theta_branch)
    coefficients = connection_coefficients(dp)
    ratio = np.exp(coefficients.log_n1 + coefficients.log_n3 - coefficients.log_n2 - coefficients.log_n4)
    value = np.sin(4.0 * dp.kappa * params.L) + 0.5j * (ratio - 1.0 / ratio)
    if abs(value.imag) > settings.REALNESS_TOLERANCE:
        raise BranchError(
            "Resonance residual is not real",
            details={"energy": energy, "imaginary_part": float(value.imag)},
        )
    return float(value.real)


def reflection_ratio_residual(
    params: PotentialParams,
    energy: float,
    solver: SolverConfig = DEFAULT_SOLVER,
) -> float:
    """
    Im(D2/D4) for left incidence.

    For a symmetric potential D2/D4 is purely imaginary with modulus
    sqrt(R/T); it changes sign exactly once across every T = 1 resonance,
    however narrow, which makes it the bracketing function of the scan.
    """
    ratios = amplitude_ratios(params, energy, solver)
    quotient = ratios.d2_over_d1 / ratios.d4_over_d1
    if abs(quotient.real) > 1e-6 * (1.0 + abs(quotient)):
        raise BranchError(
            "Reflection-to-transmission ratio is not imaginary",
            details={"energy": energy, "real_part": quotient.real},
        )
    return float(quotient.imag)


def find_resonances(
    params: PotentialParams,
    e_min: float,
    e_max: float,
    solver: SolverConfig = DEFAULT_SOLVER,
) -> List[float]:
    """
    Transmission resonances (T = 1) inside an energy window.

    The window is scanned on a uniform grid of settings.RESONANCE_SCAN_POINTS
    steps starting at max(e_min, settings.MIN_SCATTERING_ENERGY); sign
    changes of the reflection-to-transmission ratio are refined with brentq
    and kept when T >= 1 - settings.RESONANCE_T_GATE.

    Returns:
        Sorted resonance energies in MeV (empty if none)
    """
    validate_energy_window(e_min, e_max)
    check_asymptotic_regime(params)
    start = time.perf_counter()

    lo = max(e_min, settings.MIN_SCATTERING_ENERGY)
    if lo >= e_max:
        return []
    grid = np.linspace(lo, e_max, settings.RESONANCE_SCAN_POINTS + 1)
    values = np.array([reflection_ratio_residual(params, e, solver) for e in grid])

    resonances: List[float] = []
    for i in np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) <= 0):
        left, right = grid[i], grid[i + 1]
        if values[i] == 0:
            root = left
        elif values[i + 1] == 0:
            continue  # picked up as the left end of the next interval
        else:
            root = brentq(
                lambda e: reflection_ratio_residual(params, e, solver),
                left,
                right,
                xtol=settings.ENERGY_XTOL,
            )
        result = reflection_transmission(params, root, solver)
        if result.t >= 1.0 - settings.RESONANCE_T_GATE:
            ROOT_SOLVES.labels("resonance", "accepted").inc()
            logger.debug(f"Resonance at {root:.6f} MeV, T = {result.t:.12f}")
            resonances.append(float(root))
        else:
            ROOT_SOLVES.labels("resonance", "rejected").inc()

    duration = time.perf_counter() - start
    SOLVE_LATENCY.labels("resonance").observe(duration)
    structured_logger.log_performance(
        "find_resonances", duration, count=len(resonances), scheme=solver.scheme.value
    )
    return sorted(resonances)


def locate_transmission_peak(
    params: PotentialParams,
    energy: float,
    half_width: float = 0.01,
    solver: SolverConfig = DEFAULT_SOLVER,
) -> float:
    """Local maximum of T(E) in [energy - half_width, energy + half_width] by bounded golden-section search"""
    lo = max(energy - half_width, settings.MIN_SCATTERING_ENERGY)
    result = minimize_scalar(
        lambda e: -reflection_transmission(params, e, solver).t,
        bounds=(lo, energy + half_width),
        method="bounded",
        options={"xatol": 1e-9},
    )
    return float(result.x)


def _sweep_point(
    params: PotentialParams,
    axis: SweepAxis,
    value: float,
    fixed_energy: Optional[float],
    solver: SolverConfig,
) -> dict:
    row = {AXIS_COLUMNS[axis]: value}
    try:
        if axis is SweepAxis.ENERGY:
            point_params, energy = params, value
        else:
            point_params, energy = params.with_updates(**{axis.value: value}), fixed_energy
        result = reflection_transmission(point_params, energy, solver)
        row.update(R=result.r, T=result.t, unitarity_defect=result.unitarity_defect, error="")
        if axis in (SweepAxis.V0, SweepAxis.W0):
            try:
                row["HB_MeV"] = barrier_height(point_params)
            except NoBarrierError:
                row["HB_MeV"] = np.nan
    except (GswsException, ValueError) as e:
        row.update(R=np.nan, T=np.nan, unitarity_defect=np.nan, error=str(e))
        if axis in (SweepAxis.V0, SweepAxis.W0):
            row["HB_MeV"] = np.nan
    return row


def sweep(
    params: PotentialParams,
    axis: SweepAxis,
    lo: float,
    hi: float,
    steps: int,
    fixed_energy: Optional[float] = None,
    solver: SolverConfig = DEFAULT_SOLVER,
    max_workers: Optional[int] = None,
) -> pd.DataFrame:
    """
    Reflection and transmission along one parameter axis.

    Args:
        params: Base potential parameters
        axis: Parameter to vary
        lo, hi: Range of the varied parameter (energy sweeps start at
            settings.MIN_SCATTERING_ENERGY at the earliest)
        steps: Number of rows
        fixed_energy: Incident energy for non-energy axes
        solver: Matching options
        max_workers: Evaluate rows on a thread pool when > 1

    Returns:
        One row per step with the axis value, R, T, the unitarity defect, an
        error column for rows that failed and, on V0/W0 axes, the barrier height
    """
    axis = SweepAxis(axis)
    validate_sweep_input(axis.value, lo, hi, steps, fixed_energy)
    if axis is SweepAxis.ENERGY:
        lo = max(lo, settings.MIN_SCATTERING_ENERGY)
    check_asymptotic_regime(params)
    values = np.linspace(lo, hi, steps)

    start = time.perf_counter()
    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            rows = list(pool.map(lambda v: _sweep_point(params, axis, float(v), fixed_energy, solver), values))
    else:
        rows = [_sweep_point(params, axis, float(v), fixed_energy, solver) for v in values]

    table = pd.DataFrame(rows)
    failed = int((table["error"] != "").sum())
    structured_logger.log_performance(
        "sweep", time.perf_counter() - start, axis=axis.value, rows=len(table), failed_rows=failed
    )
    return table
