"""
Potential definitions, unit conventions and energy-dependent parameters

The generalized symmetric Woods-Saxon (GSWS) potential is

    V(x) = -V0 / (1 + e^{a(|x| - L)}) + W0 e^{a(|x| - L)} / (1 + e^{a(|x| - L)})^2

and every closed-form quantity downstream is expressed through the
parameters collected in ``DerivedParams``.
"""
import cmath
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np
from scipy.special import expit

from gsws.core.config import settings
from gsws.core.exceptions import DomainError, NoBarrierError
from gsws.core.logging import StructuredLogger, get_logger
from gsws.schemas.potential import MwsParams, PotentialParams

logger = get_logger(__name__)
structured_logger = StructuredLogger(logger)

ArrayLike = Union[float, np.ndarray]


class Regime(str, Enum):
    """Energy regime selecting the branch conventions of ``derive``"""
    SCATTERING = "scattering"
    BOUND = "bound"
    QUASIBOUND = "quasibound"


class Parity(str, Enum):
    """Symmetry class under x -> -x"""
    EVEN = "even"
    ODD = "odd"


class MatchingScheme(str, Enum):
    """How the left and right solutions are matched at x = 0"""
    ASYMPTOTIC = "asymptotic"  # plane-wave forms built from N1..N4
    EXACT = "exact"  # hypergeometric closed forms evaluated at x = 0


@dataclass(frozen=True)
class SolverConfig:
    """Options shared by the analytic solvers"""
    scheme: MatchingScheme = MatchingScheme.ASYMPTOTIC
    theta_branch: int = 1


DEFAULT_SOLVER = SolverConfig()


@dataclass(frozen=True)
class DerivedParams:
    """Energy-dependent complex parameters of the closed-form solution"""
    energy: complex
    regime: Regime
    k: complex
    kappa: complex
    mu: complex
    nu: complex
    theta: complex
    a1: complex
    b1: complex
    c1: complex
    beta2: float
    gamma2: float
    eps2: complex


def potential_gsws(params: PotentialParams, x: ArrayLike) -> ArrayLike:
    """
    Evaluate the GSWS potential.

    The profile is computed from |x| once, so V(-x) and V(x) are the same
    floating-point number.

    Args:
        params: Potential parameters
        x: Position(s) in fm
    """
    s = params.a * (np.abs(x) - params.L)
    inner = expit(-s)  # 1 / (1 + e^s)
    outer = expit(s)  # e^s / (1 + e^s)
    return -params.v0 * inner + params.w0 * outer * inner


def potential_ws(params: PotentialParams, x: ArrayLike) -> ArrayLike:
    """Plain symmetric Woods-Saxon well, the W0 = 0 member of the family"""
    s = params.a * (np.abs(x) - params.L)
    return -params.v0 * expit(-s)


def potential_mws(params: MwsParams, x: ArrayLike) -> ArrayLike:
    """
    Evaluate the modified Woods-Saxon potential -V0 / (p + q e^{a(|x| - L)}).

    Reduces to the plain Woods-Saxon well for p = q = 1.
    """
    s = params.a * (np.abs(x) - params.L)
    with np.errstate(over="ignore"):
        return -params.v0 / (params.p + params.q * np.exp(s))


def barrier_height(params: PotentialParams) -> float:
    """
    Height of the surface barrier, (V0 - W0)^2 / (4 W0).

    Raises:
        NoBarrierError: If W0 <= 0, W0 < V0, or the barrier maximum falls
            outside the surface region
    """
    v0, w0 = params.v0, params.w0
    details = {"v0": v0, "w0": w0}
    if w0 <= 0:
        raise NoBarrierError("No surface barrier for W0 <= 0", details=details)
    if w0 < v0:
        raise NoBarrierError("No surface barrier for W0 < V0", details=details)
    if -v0 >= w0:
        raise NoBarrierError("Barrier maximum lies outside the surface region", details=details)
    return (v0 - w0) ** 2 / (4.0 * w0)


def check_asymptotic_regime(params: PotentialParams) -> bool:
    """Warn when a*L is too small for the asymptotic matching to be reliable"""
    if params.aL < settings.ASYMPTOTIC_AL_THRESHOLD:
        structured_logger.log_warning(
            "small_aL",
            aL=params.aL,
            threshold=settings.ASYMPTOTIC_AL_THRESHOLD,
        )
        return False
    return True


def _validate_energy(params: PotentialParams, energy: complex, regime: Regime) -> None:
    details = {"energy": str(energy), "regime": regime.value}
    if regime is Regime.SCATTERING:
        if energy.imag != 0 or energy.real <= 0:
            raise DomainError("Scattering requires a real energy E > 0", details=details)
        if energy.real + params.v0 <= 0:
            raise DomainError("Scattering requires E + V0 > 0", details=details)
    elif regime is Regime.BOUND:
        if energy.imag != 0 or not (-params.v0 <= energy.real < 0):
            raise DomainError("Bound regime requires a real energy -V0 <= E < 0", details=details)
    else:
        if energy.real <= 0 or energy.imag > 0:
            raise DomainError(
                "Quasi-bound regime requires Re(E) > 0 and Im(E) <= 0", details=details
            )


def derive(
    params: PotentialParams,
    energy: complex,
    regime: Regime,
    theta_branch: int = 1,
    validate: bool = True,
) -> DerivedParams:
    """
    Compute the energy-dependent parameters of the closed-form solution.

    Args:
        params: Potential parameters
        energy: Energy in MeV (complex for quasi-bound states)
        regime: Energy regime fixing the branch of mu
        theta_branch: +1 for theta = 1/2 + sqrt(1/4 - gamma^2), -1 for the other root
        validate: Check the energy against the regime's admissible set

    Raises:
        DomainError: If the energy is outside the regime's admissible set
    """
    energy = complex(energy)
    if validate:
        _validate_energy(params, energy, regime)

    two_m = params.two_m_over_hbar2
    a = params.a

    kappa = cmath.sqrt(two_m * (energy + params.v0))
    if regime is Regime.BOUND:
        # decay constant of the bound-state tails, mu = k_n / a
        k = cmath.sqrt(-two_m * energy.real)
        mu = complex(k.real / a, 0.0)
    else:
        k = cmath.sqrt(two_m * energy)
        if k.real < 0:
            k = -k
        mu = complex(-k.imag / a, k.real / a)  # i k / a
    nu = complex(-kappa.imag / a, kappa.real / a)  # i kappa / a

    gamma2 = two_m * params.w0 / a ** 2
    beta2 = two_m * (params.v0 - params.w0) / a ** 2
    eps2 = -two_m * energy / a ** 2

    root = cmath.sqrt(0.25 - gamma2)
    principal = 0.5 + root
    theta = principal if theta_branch >= 0 else 0.5 - root

    a1 = mu + theta + nu
    if settings.DEBUG_CORRUPT_THETA_BRANCH and theta_branch < 0:
        # negative control: b1 built from the other root breaks a1 + b1 - c1 = 2 nu
        b1 = 1.0 + mu - principal + nu
    else:
        b1 = 1.0 + mu - theta + nu
    c1 = 1.0 + 2.0 * mu

    return DerivedParams(
        energy=energy,
        regime=regime,
        k=k,
        kappa=kappa,
        mu=mu,
        nu=nu,
        theta=theta,
        a1=a1,
        b1=b1,
        c1=c1,
        beta2=beta2,
        gamma2=gamma2,
        eps2=eps2,
    )
