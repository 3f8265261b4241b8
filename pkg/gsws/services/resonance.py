"""
Quasi-bound (Gamow) states

An outgoing-wave state is the irregular solution u2 (pure e^{-ik(x+L)}
on the far left) continued with definite parity. Its complex energy
E = E_r - i E_i is a zero of

    even:  N3 e^{-i kappa L} - N4 e^{i kappa L}   (vanishing slope at x = 0)
    odd:   N3 e^{-i kappa L} + N4 e^{i kappa L}   (vanishing value at x = 0)

in the asymptotic scheme, or of u2'(0) and u2(0) in the exact scheme.
"""
import time
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.ndimage import minimum_filter
from scipy.optimize import newton

from gsws.core.config import settings
from gsws.core.exceptions import (
    ConvergenceError,
    DomainError,
    GswsException,
    NoBarrierError,
    ValidationError,
)
from gsws.core.logging import StructuredLogger, get_logger
from gsws.core.validation import validate_energy_window
from gsws.instrumentation.metrics import ROOT_SOLVES, SOLVE_LATENCY
from gsws.schemas.potential import PotentialParams
from gsws.services.potential import (
    DEFAULT_SOLVER,
    MatchingScheme,
    Parity,
    Regime,
    SolverConfig,
    barrier_height,
    check_asymptotic_regime,
    derive,
)
from gsws.services.scattering import find_resonances
from gsws.services.spectrum import find_bound_states
from gsws.services.wavefunction import (
    SolutionKind,
    irregular_boundary_values,
    phase_normalize,
    symmetric_extension,
)

logger = get_logger(__name__)
structured_logger = StructuredLogger(logger)


@dataclass(frozen=True, eq=False)
class QuasiBoundState:
    """Complex-energy outgoing-wave state E = e_r - i e_i"""
    index: int
    parity: Parity
    e_r: float
    e_i: float
    x: np.ndarray = field(repr=False)
    wavefunction: np.ndarray = field(repr=False)
    linked_resonance: Optional[float] = None
    over_barrier: bool = False
    residual: float = 0.0
    iterations: int = 0
    scheme: MatchingScheme = MatchingScheme.ASYMPTOTIC
    wavefunction_energy: Optional[complex] = None

    @property
    def energy(self) -> complex:
        return complex(self.e_r, -self.e_i)

    @property
    def sampled_energy(self) -> complex:
        """Energy at which the wavefunction is built"""
        return self.energy if self.wavefunction_energy is None else complex(self.wavefunction_energy)

    @property
    def is_quasibound(self) -> bool:
        """Trapped below the barrier top and narrower than its energy"""
        return not self.over_barrier and 0 < self.e_i < self.e_r


@dataclass(frozen=True)
class SeedFailure:
    """A seed whose iteration did not produce an accepted root"""
    seed: complex
    reason: str


def _residual_and_scale(
    params: PotentialParams,
    energy: complex,
    parity: Parity,
    solver: SolverConfig,
) -> Tuple[complex, float]:
    dp = derive(params, energy, Regime.QUASIBOUND, theta_branch=solver.theta_branch, validate=False)
    u, du = irregular_boundary_values(params, dp, solver.scheme)
    # u2 ~ w_minus + w_plus and u2' ~ -i kappa (w_minus - w_plus)
    slope_form = du / (-1j * dp.kappa)
    scale = abs(u) + abs(slope_form)
    if parity is Parity.EVEN:
        return complex(slope_form), scale
    return complex(u), scale


def quasibound_residual(
    params: PotentialParams,
    energy: complex,
    parity: Parity,
    solver: SolverConfig = DEFAULT_SOLVER,
) -> complex:
    """
    Complex matching residual, zero at quasi-bound energies.

    Raises:
        DomainError: If Re(E) <= 0 or Im(E) > 0 (growing-state branch)
    """
    energy = complex(energy)
    if energy.real <= 0 or energy.imag > 0:
        raise DomainError(
            "Quasi-bound residual requires Re(E) > 0 and Im(E) <= 0",
            details={"energy": str(energy)},
        )
    value, _ = _residual_and_scale(params, energy, Parity(parity), solver)
    return value


def _grid_seeds(
    params: PotentialParams,
    parity: Parity,
    window: Tuple[float, float],
    solver: SolverConfig,
) -> List[complex]:
    """Local minima of |residual| on the real axis and on a coarse complex-energy grid"""
    e_lo, e_hi = window
    real_axis = np.linspace(e_lo, e_hi, settings.QUASIBOUND_GRID_REAL * 4 + 1)
    on_axis = np.array([abs(_residual_and_scale(params, e, parity, solver)[0]) for e in real_axis])
    inner = (on_axis[1:-1] < on_axis[:-2]) & (on_axis[1:-1] < on_axis[2:])
    seeds = [complex(e, -settings.QUASIBOUND_SEED_OFFSET) for e in real_axis[1:-1][inner]]

    re = np.linspace(e_lo, e_hi, settings.QUASIBOUND_GRID_REAL + 1)
    im = -np.linspace(settings.QUASIBOUND_SEED_OFFSET, settings.QUASIBOUND_MAX_WIDTH, settings.QUASIBOUND_GRID_IMAG)
    surface = np.empty((im.size, re.size))
    for i, y in enumerate(im):
        for j, x in enumerate(re):
            value, scale = _residual_and_scale(params, complex(x, y), parity, solver)
            surface[i, j] = abs(value) / scale
    minima = (minimum_filter(surface, size=3, mode="nearest") == surface)
    for i, j in zip(*np.nonzero(minima)):
        seeds.append(complex(re[j], im[i]))
    return seeds


def _refine(
    params: PotentialParams,
    parity: Parity,
    seed: complex,
    solver: SolverConfig,
) -> Tuple[complex, int, float]:
    """Secant iteration from a seed; returns (root, iterations, relative residual)"""
    seed_value, scale = _residual_and_scale(params, seed, parity, solver)
    root, info = newton(
        lambda e: _residual_and_scale(params, e, parity, solver)[0],
        x0=seed,
        x1=seed + complex(1e-3, -1e-3),
        tol=settings.QUASIBOUND_STEP_TOL,
        maxiter=settings.QUASIBOUND_MAX_ITER,
        full_output=True,
        disp=False,
    )
    root = complex(root)
    if not info.converged:
        raise ConvergenceError(f"secant did not converge ({info.flag})", details={"seed": str(seed)})
    value, root_scale = _residual_and_scale(params, root, parity, solver)
    allowed = (
        settings.QUASIBOUND_RESIDUAL_REDUCTION * abs(seed_value)
        + settings.QUASIBOUND_RESIDUAL_FLOOR * root_scale
    )
    if not np.isfinite(abs(value)) or abs(value) > allowed:
        raise ConvergenceError("residual not reduced at the converged point", details={"seed": str(seed)})
    return root, int(info.iterations), abs(value) / root_scale


def _deduplicate(roots: Sequence[Tuple[complex, int, float]]) -> List[Tuple[complex, int, float]]:
    unique: List[Tuple[complex, int, float]] = []
    for candidate in sorted(roots, key=lambda r: (r[0].real, r[0].imag)):
        if all(abs(candidate[0] - kept[0]) > settings.QUASIBOUND_DEDUP_TOLERANCE for kept in unique):
            unique.append(candidate)
    return unique


def exact_partner(
    params: PotentialParams,
    parity: Parity,
    root: complex,
    solver: SolverConfig = DEFAULT_SOLVER,
) -> complex:
    """
    Exact-scheme root next to an asymptotic-scheme quasi-bound energy.

    Falls back to the input root (with a warning) when the secant
    iteration fails or wanders further than
    settings.BOUND_PARTNER_WINDOW * V0 from it.
    """
    exact = SolverConfig(scheme=MatchingScheme.EXACT, theta_branch=solver.theta_branch)
    try:
        partner, _, _ = _refine(params, Parity(parity), complex(root), exact)
    except (GswsException, ArithmeticError, ValueError) as e:
        structured_logger.log_warning(
            "quasibound_wavefunction_partner_failed", energy=str(root), reason=str(e)
        )
        return complex(root)
    if abs(partner - root) > settings.BOUND_PARTNER_WINDOW * params.v0 or partner.imag > 0:
        structured_logger.log_warning(
            "quasibound_wavefunction_partner_failed", energy=str(root), reason=f"partner {partner} rejected"
        )
        return complex(root)
    return partner


def find_quasibound(
    params: PotentialParams,
    parity: Parity,
    window: Tuple[float, float],
    solver: SolverConfig = DEFAULT_SOLVER,
    x_samples: int = 401,
) -> List[QuasiBoundState]:
    """
    Quasi-bound states of one parity with real parts inside a window.

    Seeds are the transmission resonances of the window shifted by
    -i settings.QUASIBOUND_SEED_OFFSET plus the local minima of |residual|
    on the real axis and on a coarse complex grid reaching
    Im E = -settings.QUASIBOUND_MAX_WIDTH. Each seed is refined with the
    secant method; seeds that fail are logged and dropped. Accepted roots
    are deduplicated, linked to a resonance within
    settings.QUASIBOUND_LINK_TOLERANCE and flagged when above the barrier.

    Returns:
        States sorted by real part
    """
    parity = Parity(parity)
    e_lo, e_hi = window
    validate_energy_window(e_lo, e_hi, allow_zero=False)
    check_asymptotic_regime(params)
    start = time.perf_counter()

    resonances = find_resonances(params, e_lo, e_hi, solver)
    seeds = [complex(e, -settings.QUASIBOUND_SEED_OFFSET) for e in resonances]
    seeds += _grid_seeds(params, parity, (e_lo, e_hi), solver)

    accepted = []
    failures: List[SeedFailure] = []
    for seed in seeds:
        try:
            root, iterations, residual = _refine(params, parity, seed, solver)
        except (GswsException, ArithmeticError, ValueError) as e:
            failures.append(SeedFailure(seed=seed, reason=str(e)))
            ROOT_SOLVES.labels("quasibound", "failed").inc()
            continue
        width = -root.imag
        if not (e_lo <= root.real <= e_hi and 0 < width <= settings.QUASIBOUND_MAX_WIDTH):
            ROOT_SOLVES.labels("quasibound", "outside").inc()
            continue
        ROOT_SOLVES.labels("quasibound", "accepted").inc()
        accepted.append((root, iterations, residual))

    if failures:
        structured_logger.log_warning(
            "quasibound_seed_failures",
            parity=parity.value,
            failed=len(failures),
            seeds=len(seeds),
            first_reason=failures[0].reason,
        )

    try:
        barrier: Optional[float] = barrier_height(params)
    except NoBarrierError:
        barrier = None

    bound_count = sum(
        1 for state in find_bound_states(params, solver, parities=[parity], x_samples=2)
    )
    first_label = bound_count + (1 if parity is Parity.EVEN else 2)

    x = _sample_grid(params, x_samples)
    states = []
    for rank, (root, iterations, residual) in enumerate(_deduplicate(accepted)):
        linked = None
        if resonances:
            nearest = min(resonances, key=lambda e: abs(e - root.real))
            if abs(nearest - root.real) <= settings.QUASIBOUND_LINK_TOLERANCE:
                linked = nearest
        sampled = root
        if solver.scheme is MatchingScheme.ASYMPTOTIC:
            sampled = exact_partner(params, parity, root, solver)
        states.append(
            QuasiBoundState(
                index=first_label + rank,
                parity=parity,
                e_r=root.real,
                e_i=-root.imag,
                x=x,
                wavefunction=_evaluate(params, sampled, parity, x, solver),
                linked_resonance=linked,
                over_barrier=barrier is None or root.real >= barrier,
                residual=residual,
                iterations=iterations,
                scheme=solver.scheme,
                wavefunction_energy=sampled,
            )
        )

    duration = time.perf_counter() - start
    SOLVE_LATENCY.labels("quasibound").observe(duration)
    structured_logger.log_performance(
        "find_quasibound",
        duration,
        parity=parity.value,
        count=len(states),
        seeds=len(seeds),
        scheme=solver.scheme.value,
    )
    structured_logger.log_event(
        "quasibound_search_complete",
        parity=parity.value,
        count=len(states),
        energies=[str(s.energy) for s in states],
    )
    return states


def tail_cutoff(params: PotentialParams) -> float:
    """Largest |x| at which Gamow wavefunctions are evaluated"""
    return params.L + settings.QUASIBOUND_TAIL / params.a


def _sample_grid(params: PotentialParams, x_samples: int) -> np.ndarray:
    half = tail_cutoff(params)
    return np.linspace(-half, half, x_samples)


def _evaluate(
    params: PotentialParams,
    energy: complex,
    parity: Parity,
    x: Union[float, np.ndarray],
    solver: SolverConfig = DEFAULT_SOLVER,
) -> np.ndarray:
    dp = derive(params, energy, Regime.QUASIBOUND, theta_branch=solver.theta_branch)
    phase = phase_normalize(params, dp, SolutionKind.IRREGULAR)
    return symmetric_extension(params, dp, x, SolutionKind.IRREGULAR, odd=parity is Parity.ODD) * phase


def quasibound_wavefunction(
    params: PotentialParams,
    state: QuasiBoundState,
    x: Union[float, np.ndarray],
) -> Union[complex, np.ndarray]:
    """
    Closed-form Gamow wavefunction at x, real and positive at x = -L.

    Raises:
        ValidationError: If |x| exceeds the tail cutoff L + settings.QUASIBOUND_TAIL/a
    """
    cutoff = tail_cutoff(params)
    if np.any(np.abs(np.asarray(x, dtype=float)) > cutoff):
        raise ValidationError(
            "Position beyond the Gamow-state tail cutoff",
            details={"cutoff": cutoff},
        )
    values = _evaluate(params, state.sampled_energy, state.parity, x)
    if np.ndim(x) == 0:
        return complex(values[0])
    return values
