"""
Bound-state spectrum and wavefunctions

Below threshold the regular solution u1 is real and decays on the left;
the symmetric continuation is an eigenstate when its slope (even parity)
or its value (odd parity) vanishes at x = 0. In the asymptotic scheme
these conditions read Im(N1 e^{-i kappa L}) = 0 and Re(N1 e^{-i kappa L}) = 0.
"""
import time
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import trapezoid
from scipy.optimize import brentq

from gsws.core.config import settings
from gsws.core.exceptions import BranchError, ConvergenceError, DomainError
from gsws.core.logging import StructuredLogger, get_logger
from gsws.instrumentation.metrics import ROOT_SOLVES, SOLVE_LATENCY
from gsws.schemas.potential import PotentialParams
from gsws.services.potential import (
    DEFAULT_SOLVER,
    DerivedParams,
    MatchingScheme,
    Parity,
    Regime,
    SolverConfig,
    check_asymptotic_regime,
    derive,
)
from gsws.services.special_functions import connection_coefficients
from gsws.services.wavefunction import (
    SolutionKind,
    left_solution,
    phase_normalize,
    regular_boundary_values,
    symmetric_extension,
)

logger = get_logger(__name__)
structured_logger = StructuredLogger(logger)

BOTH_PARITIES = (Parity.EVEN, Parity.ODD)


@dataclass(frozen=True, eq=False)
class BoundState:
    """Bound eigenstate with its sampled, phase-normalized wavefunction"""
    index: int
    parity: Parity
    energy: float
    nodes: int
    x: np.ndarray = field(repr=False)
    wavefunction: np.ndarray = field(repr=False)
    scheme: MatchingScheme = MatchingScheme.ASYMPTOTIC
    wavefunction_energy: Optional[float] = None

    @property
    def sampled_energy(self) -> float:
        """Energy at which the wavefunction is built"""
        return self.energy if self.wavefunction_energy is None else self.wavefunction_energy


def state_label(nodes: int) -> int:
    """Quantum-number label n: even states 1, 2, ... and odd states 2, 3, ..."""
    return (nodes + 1) // 2 + 1


def _check_bound_energy(params: PotentialParams, energy: float) -> None:
    margin = settings.THRESHOLD_MARGIN * params.v0
    if not (-params.v0 + margin <= energy <= -margin):
        raise DomainError(
            "Bound energy must lie inside (-V0 + eps, -eps)",
            details={"energy": energy, "v0": params.v0, "eps": margin},
        )


def _residual_pair(params: PotentialParams, energy: float, solver: SolverConfig) -> Tuple[float, float]:
    """(even, odd) matching residuals at one energy"""
    dp = derive(params, energy, Regime.BOUND, theta_branch=solver.theta_branch)

    if solver.scheme is MatchingScheme.ASYMPTOTIC:
        coefficients = connection_coefficients(dp)
        n1 = coefficients.n1
        defect = abs(coefficients.n2 - n1.conjugate()) / abs(n1)
        if defect > settings.CONJUGACY_TOLERANCE:
            raise BranchError(
                "N2 is not the conjugate of N1 in the bound regime",
                details={"energy": energy, "defect": defect},
            )
        w = n1 * np.exp(-1j * dp.kappa * params.L)
        return float(w.imag), float(w.real)

    u, du = regular_boundary_values(params, dp, MatchingScheme.EXACT)
    kappa = abs(dp.kappa)
    scale = abs(u) + abs(du) / kappa
    if abs(u.imag) + abs(du.imag) / kappa > 1e-8 * scale:
        raise BranchError(
            "Regular bound-regime solution is not real",
            details={"energy": energy, "u": str(u), "du": str(du)},
        )
    # same normalization as the asymptotic form: u1 ~ 2 Re(w), u1' ~ 2 kappa Im(w)
    return du.real / (2.0 * kappa), u.real / 2.0


def bound_residual(
    params: PotentialParams,
    energy: float,
    parity: Parity,
    solver: SolverConfig = DEFAULT_SOLVER,
) -> float:
    """
    Real matching residual whose zeros are the bound-state energies.

    Even parity returns Im(N1 e^{-i kappa L}) (vanishing slope at x = 0),
    odd parity Re(N1 e^{-i kappa L}) (vanishing value). The exact scheme
    returns u1'(0) / (2 kappa) and u1(0) / 2, the same quantities without
    the asymptotic approximation.

    Raises:
        DomainError: If the energy is outside (-V0 + eps, -eps)
        BranchError: If the conjugacy or realness assertion fails
    """
    _check_bound_energy(params, energy)
    even, odd = _residual_pair(params, energy, solver)
    return even if Parity(parity) is Parity.EVEN else odd


def bound_scan_grid(v0: float) -> np.ndarray:
    """Scan energies over (-V0 + eps, -eps), denser in the top fraction of the well"""
    eps = settings.THRESHOLD_MARGIN * v0
    fraction = settings.BOUND_TOP_FRACTION
    points = settings.BOUND_SCAN_POINTS
    top = -fraction * v0
    main = np.linspace(-v0 + eps, top, int(round(points * (1.0 - fraction))) + 1)
    dense = np.linspace(top, -eps, int(round(points * fraction * settings.BOUND_TOP_DENSITY)) + 1)
    return np.concatenate([main, dense[1:]])


def arctan_energy(params: PotentialParams, energy: float, parity: Parity) -> float:
    """
    Energy returned by the arctan form of the eigenvalue equation.

    Even states satisfy kappa L = arg N1 + n pi and odd states
    kappa L = arg N1 + pi/2 + n pi; the integer n nearest to the input
    energy is used. At an eigenvalue the output reproduces the input.
    """
    dp = derive(params, energy, Regime.BOUND)
    offset = np.angle(connection_coefficients(dp).n1)
    if Parity(parity) is Parity.ODD:
        offset += np.pi / 2.0
    n = np.round((dp.kappa.real * params.L - offset) / np.pi)
    kappa = (offset + n * np.pi) / params.L
    return float(kappa ** 2 / params.two_m_over_hbar2 - params.v0)


def count_nodes(params: PotentialParams, dp: DerivedParams, parity: Parity, samples: int = 4001) -> int:
    """
    Nodes of the symmetric eigenfunction from sign changes of u1 on x < 0.

    The last eighth of the interior wavelength before x = 0 is skipped: no
    genuine node of either parity falls there, while a zero pushed off
    x = 0 by the matching approximation would.
    """
    window = np.pi / (4.0 * abs(dp.kappa))
    tail = params.L + settings.BOUND_TAIL / params.a
    x = np.linspace(-tail, -window, samples)
    values, _ = left_solution(params, dp, x, SolutionKind.REGULAR)
    real = values.real
    peak = np.max(np.abs(real))
    signs = np.sign(real[np.abs(real) > 1e-10 * peak])
    changes = int(np.count_nonzero(signs[1:] != signs[:-1]))
    return 2 * changes + (1 if Parity(parity) is Parity.ODD else 0)


def _evaluate(
    params: PotentialParams,
    energy: float,
    parity: Parity,
    x: Union[float, np.ndarray],
) -> np.ndarray:
    dp = derive(params, energy, Regime.BOUND)
    phase = phase_normalize(params, dp, SolutionKind.REGULAR)
    return symmetric_extension(params, dp, x, SolutionKind.REGULAR, odd=parity is Parity.ODD) * phase


def wavefunction_norm(
    params: PotentialParams,
    energy: float,
    parity: Parity,
    tail: Optional[float] = None,
    step: Optional[float] = None,
) -> float:
    """
    Trapezoidal integral of |phi|^2 over [-(L + tail/a), L + tail/a].

    Args:
        tail: Cutoff beyond L in units of 1/a (default: settings.BOUND_TAIL or
            twenty decay lengths of the tail, whichever is longer)
        step: Grid step in fm (default 0.01/a)
    """
    if tail is None:
        mu = derive(params, energy, Regime.BOUND).mu.real
        tail = max(settings.BOUND_TAIL, 20.0 / mu)
    step = 0.01 / params.a if step is None else step
    half = params.L + tail / params.a
    x = np.linspace(-half, 0.0, int(np.ceil(half / step)) + 1)
    density = np.abs(_evaluate(params, energy, Parity(parity), x)) ** 2
    return float(2.0 * trapezoid(density, x))


def bound_wavefunction(
    params: PotentialParams,
    state: BoundState,
    x: Union[float, np.ndarray],
    normalize: bool = False,
) -> Union[complex, np.ndarray]:
    """
    Closed-form bound-state wavefunction at x.

    The regular left solution is continued with the state's parity and
    multiplied by the unit factor that makes it real and positive at
    x = -L. Unnormalized unless ``normalize`` is set.
    """
    values = _evaluate(params, state.sampled_energy, state.parity, x)
    if normalize:
        values = values / np.sqrt(wavefunction_norm(params, state.sampled_energy, state.parity))
    if np.ndim(x) == 0:
        return complex(values[0])
    return values


def exact_partner_energy(
    params: PotentialParams,
    energy: float,
    parity: Parity,
    theta_branch: int = 1,
) -> float:
    """
    Exact-scheme eigenvalue next to an asymptotic-scheme root.

    The asymptotic matching leaves an O(e^{-aL}) mismatch at x = 0, so a
    wavefunction built at the asymptotic root has a kink (even) or a
    jump (odd) there. The exact residual is scanned over
    energy +/- settings.BOUND_PARTNER_WINDOW * V0 and the sign change
    closest to the input energy is refined with brentq.

    Raises:
        ConvergenceError: If the window holds no sign change
    """
    parity = Parity(parity)
    exact = SolverConfig(scheme=MatchingScheme.EXACT, theta_branch=theta_branch)
    column = 0 if parity is Parity.EVEN else 1
    eps = settings.THRESHOLD_MARGIN * params.v0
    width = settings.BOUND_PARTNER_WINDOW * params.v0
    lower = max(energy - width, -params.v0 + eps)
    upper = min(energy + width, -eps)

    grid = bound_scan_grid(params.v0)
    grid = np.unique(np.concatenate([[lower, energy, upper], grid[(grid > lower) & (grid < upper)]]))
    values = np.array([_residual_pair(params, e, exact)[column] for e in grid])
    brackets = np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) <= 0)
    if brackets.size == 0:
        raise ConvergenceError(
            "No exact-scheme root near the bound energy",
            details={"energy": energy, "parity": parity.value, "window": [lower, upper]},
        )
    midpoints = 0.5 * (grid[brackets] + grid[brackets + 1])
    i = int(brackets[np.argmin(np.abs(midpoints - energy))])
    if values[i] == 0.0:
        return float(grid[i])
    if values[i + 1] == 0.0:
        return float(grid[i + 1])
    root = brentq(
        lambda e: _residual_pair(params, e, exact)[column],
        grid[i],
        grid[i + 1],
        xtol=1e-12,
    )
    return float(root)


def _sample_grid(params: PotentialParams, x_samples: int) -> np.ndarray:
    half = params.L + settings.BOUND_TAIL / params.a
    return np.linspace(-half, half, x_samples)


def find_bound_states(
    params: PotentialParams,
    solver: SolverConfig = DEFAULT_SOLVER,
    parities: Iterable[Parity] = BOTH_PARITIES,
    x_samples: int = 401,
) -> List[BoundState]:
    """
    Bound spectrum from sign changes of the matching residuals.

    Each parity is scanned over bound_scan_grid(V0), sign changes are
    refined with brentq to settings.ENERGY_XTOL, and every root gets its
    node count, label and sampled wavefunction.

    Returns:
        States sorted by energy (empty when V0 <= 0)
    """
    if params.v0 <= 0:
        return []
    check_asymptotic_regime(params)
    start = time.perf_counter()
    wanted: Sequence[Parity] = [Parity(p) for p in parities]

    energies = bound_scan_grid(params.v0)
    pairs = np.array([_residual_pair(params, e, solver) for e in energies])
    columns = {Parity.EVEN: 0, Parity.ODD: 1}

    roots: List[Tuple[float, Parity]] = []
    for parity in wanted:
        values = pairs[:, columns[parity]]
        for i in np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0):
            root = brentq(
                lambda e: _residual_pair(params, e, solver)[columns[parity]],
                energies[i],
                energies[i + 1],
                xtol=settings.ENERGY_XTOL,
            )
            ROOT_SOLVES.labels("bound", "accepted").inc()
            roots.append((float(root), parity))

    x = _sample_grid(params, x_samples)
    states = []
    for energy, parity in sorted(roots):
        dp = derive(params, energy, Regime.BOUND)
        nodes = count_nodes(params, dp, parity)
        sampled = energy
        if solver.scheme is MatchingScheme.ASYMPTOTIC:
            sampled = exact_partner_energy(params, energy, parity, solver.theta_branch)
        states.append(
            BoundState(
                index=state_label(nodes),
                parity=parity,
                energy=energy,
                nodes=nodes,
                x=x,
                wavefunction=_evaluate(params, sampled, parity, x),
                scheme=solver.scheme,
                wavefunction_energy=sampled,
            )
        )

    duration = time.perf_counter() - start
    SOLVE_LATENCY.labels("bound").observe(duration)
    structured_logger.log_performance(
        "find_bound_states", duration, count=len(states), scheme=solver.scheme.value
    )
    structured_logger.log_event(
        "bound_search_complete",
        count=len(states),
        scheme=solver.scheme.value,
        energies=[s.energy for s in states],
    )
    return states
