"""
Numerical oracle: direct integration of the Schrodinger equation

Shares only the potential definition with the analytic services; nothing
here touches the special functions. Scattering runs a complex Numerov
integration inward from a pure transmitted wave; bound states are found by
Numerov shooting from both tails and matching at x = 0.
"""
import time
from dataclasses import dataclass
from typing import Callable, List, NamedTuple, Optional, Tuple

import numpy as np

from gsws.core.config import settings
from gsws.core.exceptions import DecompositionError, DomainError, GridResolutionError
from gsws.core.logging import StructuredLogger, get_logger
from gsws.instrumentation.metrics import ROOT_SOLVES, SOLVE_LATENCY
from gsws.schemas.potential import PotentialParams
from gsws.services.potential import Parity, potential_gsws
from gsws.services.scattering import ScatteringResult

logger = get_logger(__name__)
structured_logger = StructuredLogger(logger)

PotentialFunction = Callable[[np.ndarray], np.ndarray]


class OracleEigenvalue(NamedTuple):
    """Bound eigenvalue located by shooting"""
    energy: float
    nodes: int
    parity: Parity
    resolved: bool = True


def _profile(params: PotentialParams, potential: Optional[PotentialFunction]) -> PotentialFunction:
    if potential is not None:
        return potential
    return lambda x: potential_gsws(params, x)


def max_step(
    params: PotentialParams,
    e_max: float = 0.0,
    potential: Optional[PotentialFunction] = None,
) -> float:
    """Largest admissible step: min(ORACLE_MAX_STEP/a, lambda/ORACLE_WAVELENGTH_FRACTION)"""
    half = params.L + settings.ORACLE_TAIL / params.a
    v_min = float(np.min(_profile(params, potential)(np.linspace(-half, half, 4001))))
    limit = settings.ORACLE_MAX_STEP / params.a
    kinetic = e_max - v_min
    if kinetic > 0:
        k_max = np.sqrt(params.two_m_over_hbar2 * kinetic)
        limit = min(limit, 2.0 * np.pi / k_max / settings.ORACLE_WAVELENGTH_FRACTION)
    return limit


@dataclass(frozen=True)
class IntegrationGrid:
    """Symmetric uniform grid with a node at x = 0"""
    x_min: float
    x_max: float
    step: float
    samples: int

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.samples)

    @property
    def center(self) -> int:
        return (self.samples - 1) // 2

    @classmethod
    def for_params(
        cls,
        params: PotentialParams,
        e_max: float = 0.0,
        step: Optional[float] = None,
        potential: Optional[PotentialFunction] = None,
    ) -> "IntegrationGrid":
        """
        Build a grid of half-width L + ORACLE_TAIL/a.

        Args:
            params: Potential parameters
            e_max: Largest energy the grid must resolve
            step: Requested step (defaults to the largest admissible one)
            potential: Substitute potential profile
        """
        half = params.L + settings.ORACLE_TAIL / params.a
        target = max_step(params, e_max, potential) if step is None else step
        intervals = 2 * int(np.ceil(half / target))
        grid = cls(x_min=-half, x_max=half, step=2.0 * half / intervals, samples=intervals + 1)
        grid.validate(params, e_max, potential)
        return grid

    def validate(
        self,
        params: PotentialParams,
        e_max: float = 0.0,
        potential: Optional[PotentialFunction] = None,
    ) -> None:
        """
        Raises:
            GridResolutionError: If the grid is asymmetric, too short, too coarse or inconsistent
        """
        details = {"x_min": self.x_min, "x_max": self.x_max, "step": self.step, "samples": self.samples}
        if self.x_max != -self.x_min or self.samples % 2 == 0:
            raise GridResolutionError("Grid must be symmetric with a node at x = 0", details=details)
        if self.x_max < (params.L + settings.ORACLE_TAIL / params.a) * (1 - 1e-12):
            raise GridResolutionError("Grid half-width below L + tail", details=details)
        if abs((self.x_max - self.x_min) / (self.samples - 1) - self.step) > 1e-9 * self.step:
            raise GridResolutionError("Step does not match the sample count", details=details)
        if self.step > max_step(params, e_max, potential) * (1 + 1e-9):
            raise GridResolutionError("Step-size violation", details=details)


def probability_current(phi: complex, dphi: complex, hbar_over_m: float = 1.0) -> float:
    """
    Probability current (hbar / 2mi)(phi* phi' - phi phi'*) = (hbar/m) Im(phi* phi').

    Args:
        phi: Wavefunction value(s)
        dphi: Derivative value(s)
        hbar_over_m: hbar/m in the caller's units (hbarc/mc2 gives fm in units of c)
    """
    return hbar_over_m * np.imag(np.conj(phi) * dphi)


def _scattering_profile(
    params: PotentialParams,
    energy: float,
    grid: IntegrationGrid,
    potential: Optional[PotentialFunction],
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """Complex Numerov integration from x_max to x_min; returns x, psi, psi' (interior) and k"""
    x = grid.x
    h = grid.step
    two_m = params.two_m_over_hbar2
    k = float(np.sqrt(two_m * energy))
    f = 1.0 + h * h * two_m * (energy - _profile(params, potential)(x)) / 12.0
    fl = f.tolist()

    n = grid.samples
    psi = [0j] * n
    psi[n - 1] = complex(np.exp(1j * k * x[n - 1]))
    psi[n - 2] = complex(np.exp(1j * k * x[n - 2]))
    for i in range(n - 2, 0, -1):
        psi[i - 1] = ((12.0 - 10.0 * fl[i]) * psi[i] - fl[i + 1] * psi[i + 1]) / fl[i - 1]

    values = np.array(psi)
    derivative = np.full(n, np.nan + 0j)
    # fourth-order derivative from the ODE: psi'' = -Q psi
    derivative[1:-1] = (values[2:] * (2.0 * f[2:] - 1.0) - values[:-2] * (2.0 * f[:-2] - 1.0)) / (2.0 * h)
    return x, values, derivative, k


def oracle_current_profile(
    params: PotentialParams,
    energy: float,
    grid: IntegrationGrid,
    potential: Optional[PotentialFunction] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Probability current along the integrated scattering solution (interior points)"""
    x, psi, dpsi, _ = _scattering_profile(params, energy, grid, potential)
    current = probability_current(psi[1:-1], dpsi[1:-1], params.hbarc / params.mc2)
    return x[1:-1], current


def oracle_rt(
    params: PotentialParams,
    energy: float,
    grid: IntegrationGrid,
    potential: Optional[PotentialFunction] = None,
) -> ScatteringResult:
    """
    R and T by direct integration.

    The solution starts as e^{ikx} at x_max, is integrated to x_min and is
    decomposed there as A e^{ikx} + B e^{-ikx} using its value and
    derivative; R and T are current ratios, so R + T = 1 is a diagnostic.

    Raises:
        DomainError: If energy <= 0
        DecompositionError: If k is too small for a stable decomposition
    """
    if energy <= 0:
        raise DomainError("Oracle scattering requires E > 0", details={"energy": energy})
    x, psi, dpsi, k = _scattering_profile(params, energy, grid, potential)
    if k * (grid.x_max - grid.x_min) < 1e-3:
        raise DecompositionError(
            "Plane-wave decomposition ill-conditioned near k = 0",
            details={"energy": energy, "k": k},
        )

    hbar_over_m = params.hbarc / params.mc2
    j = 1
    forward = 0.5 * (psi[j] + dpsi[j] / (1j * k)) * np.exp(-1j * k * x[j])
    backward = 0.5 * (psi[j] - dpsi[j] / (1j * k)) * np.exp(1j * k * x[j])
    incident = hbar_over_m * k * abs(forward) ** 2
    reflected = hbar_over_m * k * abs(backward) ** 2
    transmitted = probability_current(psi[-2], dpsi[-2], hbar_over_m)

    r = float(reflected / incident)
    t = float(transmitted / incident)
    return ScatteringResult(energy=float(energy), r=r, t=t, unitarity_defect=abs(r + t - 1.0))


def _shoot(
    v_path: np.ndarray,
    energies: np.ndarray,
    two_m: float,
    h: float,
    keep_profile: bool = False,
):
    """
    Numerov integration from a tail inward for an array of energies.

    Starts from the decaying tail e^{k s} and returns the value and path
    derivative at the second-to-last path point, plus the full profile
    when requested.
    """
    e = np.asarray(energies, dtype=float)
    k = np.sqrt(two_m * np.maximum(-e, 0.0))
    h12 = h * h / 12.0

    f_pp = 1.0 + h12 * two_m * (e - v_path[0])
    f_p = 1.0 + h12 * two_m * (e - v_path[1])
    psi_pp = np.ones_like(e)
    psi_p = np.exp(k * h)
    profile = [psi_pp, psi_p] if keep_profile else None

    f_c, psi_c = f_p, psi_p
    for i in range(2, len(v_path)):
        f_c = 1.0 + h12 * two_m * (e - v_path[i])
        psi_c = ((12.0 - 10.0 * f_p) * psi_p - f_pp * psi_pp) / f_c
        if keep_profile:
            profile.append(psi_c)
        elif i % 64 == 0:
            scale = np.maximum(np.abs(psi_c), np.abs(psi_p))
            psi_c, psi_p, psi_pp = psi_c / scale, psi_p / scale, psi_pp / scale
        if i < len(v_path) - 1:
            psi_pp, psi_p = psi_p, psi_c
            f_pp, f_p = f_p, f_c

    # psi_pp, psi_p, psi_c are the last three points; derivative at the middle one
    value = psi_p
    derivative = (psi_c * (2.0 * f_c - 1.0) - psi_pp * (2.0 * f_pp - 1.0)) / (2.0 * h)
    if keep_profile:
        return value, derivative, np.array(profile)
    return value, derivative


def _matching(
    v: np.ndarray,
    center: int,
    energies: np.ndarray,
    two_m: float,
    h: float,
    scale: float,
) -> np.ndarray:
    """Normalized Wronskian psi_L psi_R' - psi_L' psi_R at x = 0"""
    left, dleft = _shoot(v[: center + 2], energies, two_m, h)
    right, dright_path = _shoot(v[::-1][: len(v) - center + 1], energies, two_m, h)
    dright = -dright_path
    norm_left = np.sqrt(left ** 2 + (dleft / scale) ** 2)
    norm_right = np.sqrt(right ** 2 + (dright / scale) ** 2)
    return (left * dright - dleft * right) / (scale * norm_left * norm_right)


def _eigenfunction(
    v: np.ndarray,
    center: int,
    energy: float,
    two_m: float,
    h: float,
    scale: float,
) -> np.ndarray:
    e = np.array([energy])
    left, dleft, left_profile = _shoot(v[: center + 2], e, two_m, h, keep_profile=True)
    right, dright_path, right_profile = _shoot(v[::-1][: len(v) - center + 1], e, two_m, h, keep_profile=True)
    dright = -dright_path
    if abs(left[0]) >= abs(dleft[0]) / scale:
        factor = left[0] / right[0]
    else:
        factor = dleft[0] / dright[0]
    right_part = (factor * right_profile[:, 0])[::-1]  # x from x(center - 1) to x_max
    return np.concatenate([left_profile[: center + 1, 0], right_part[2:]])


def oracle_bound(
    params: PotentialParams,
    grid: IntegrationGrid,
    potential: Optional[PotentialFunction] = None,
) -> List[OracleEigenvalue]:
    """
    Bound eigenvalues by Numerov shooting from both tails.

    Energies are scanned over (V_min + eps, -eps) with the top fraction of
    the range sampled more densely; sign changes of the matching Wronskian
    are bisected simultaneously to 1e-7 MeV. Parity comes from the symmetry
    of the joined solution and the node count from its sign changes.

    Returns:
        Eigenvalues sorted by energy (empty for V0 <= 0)
    """
    if potential is None and params.v0 <= 0:
        return []
    start = time.perf_counter()
    x = grid.x
    v = np.asarray(_profile(params, potential)(x), dtype=float)
    v_min = float(np.min(v))
    if v_min >= 0:
        return []

    two_m = params.two_m_over_hbar2
    h = grid.step
    center = grid.center
    scale = float(np.sqrt(two_m * -v_min))

    depth = -v_min
    eps = settings.THRESHOLD_MARGIN * depth
    points = settings.ORACLE_BOUND_SCAN_POINTS
    fraction = settings.BOUND_TOP_FRACTION
    top = -fraction * depth
    energies = np.concatenate([
        np.linspace(v_min + eps, top, int(round(points * (1.0 - fraction))) + 1),
        np.linspace(top, -eps, int(round(points * fraction * settings.BOUND_TOP_DENSITY)) + 1)[1:],
    ])
    mismatch = _matching(v, center, energies, two_m, h, scale)
    brackets = np.flatnonzero(np.sign(mismatch[:-1]) * np.sign(mismatch[1:]) < 0)
    if brackets.size == 0:
        return []

    lo, hi = energies[brackets], energies[brackets + 1]
    m_lo = mismatch[brackets]
    while np.max(hi - lo) > 1e-7:
        mid = 0.5 * (lo + hi)
        m_mid = _matching(v, center, mid, two_m, h, scale)
        same = np.sign(m_mid) == np.sign(m_lo)
        lo = np.where(same, mid, lo)
        m_lo = np.where(same, m_mid, m_lo)
        hi = np.where(same, hi, mid)

    eigenvalues = []
    for energy in 0.5 * (lo + hi):
        psi = _eigenfunction(v, center, float(energy), two_m, h, scale)
        mirrored = psi[::-1]
        parity = (
            Parity.EVEN
            if np.linalg.norm(psi - mirrored) < np.linalg.norm(psi + mirrored)
            else Parity.ODD
        )
        peak = np.max(np.abs(psi))
        signs = np.sign(psi[np.abs(psi) > 1e-8 * peak])
        nodes = int(np.count_nonzero(signs[1:] != signs[:-1]))

        tail_level = abs(v[0])
        resolved = tail_level <= 1e-3 * abs(energy)
        if not resolved:
            structured_logger.log_warning(
                "oracle_grid_resolution", energy=float(energy), tail_potential=tail_level
            )
        ROOT_SOLVES.labels("oracle_bound", "accepted").inc()
        eigenvalues.append(OracleEigenvalue(float(energy), nodes, parity, resolved))

    duration = time.perf_counter() - start
    SOLVE_LATENCY.labels("oracle_bound").observe(duration)
    structured_logger.log_performance("oracle_bound", duration, count=len(eigenvalues))
    return eigenvalues
